#include "pcsmaa/result_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace pcsmaa {

double round6(double value) { return std::round(value * 1e6) / 1e6; }

Json big_to_json(const BigInt& value) {
  if (value >= 0 && value <= std::numeric_limits<std::uint64_t>::max()) {
    return value.convert_to<std::uint64_t>();
  }
  return value.str();
}

BigInt big_from_json(const Json& value) {
  if (value.is_number_unsigned()) return BigInt(value.get<std::uint64_t>());
  if (value.is_number_integer()) return BigInt(value.get<std::int64_t>());
  if (value.is_string()) {
    try {
      return BigInt(value.get<std::string>());
    } catch (const std::exception&) {
      throw Error(Errc::Schema, "invalid integer string");
    }
  }
  throw Error(Errc::Schema, "expected an integer");
}

Json to_json(const SamplePlan& plan) {
  Json doc;
  doc["accuracy"] = plan.accuracy;
  doc["confidence"] = plan.confidence;
  doc["z"] = plan.z();
  doc["z_override"] = plan.z_override ? Json(*plan.z_override) : Json(nullptr);
  doc["iterations"] = plan.iterations;
  doc["iterations_overridden"] = plan.iterations_overridden;
  doc["seed"] = plan.seed;
  return doc;
}

SamplePlan plan_from_json(const Json& document) {
  SamplePlan plan;
  plan.accuracy = document.at("accuracy").get<double>();
  plan.confidence = document.at("confidence").get<double>();
  if (document.contains("z_override") && !document["z_override"].is_null()) {
    plan.z_override = document["z_override"].get<double>();
  }
  plan.iterations = document.at("iterations").get<std::uint64_t>();
  plan.iterations_overridden = document.value("iterations_overridden", false);
  plan.seed = document.at("seed").get<std::uint64_t>();
  return plan;
}

namespace {

template <class Cell>
Json grid(std::size_t n, Cell cell) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(cell(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::uint64_t> flatten(const Json& rows, std::size_t n, const char* name) {
  if (!rows.is_array() || rows.size() != n) {
    throw Error(Errc::Schema, fmt::format("'{}' must be a {}x{} matrix", name, n, n));
  }
  std::vector<std::uint64_t> out;
  out.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) {
      throw Error(Errc::Schema, fmt::format("'{}' must be a {}x{} matrix", name, n, n));
    }
    for (const auto& v : row) out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

Json cell_json(const CellSummary& c) {
  Json doc;
  doc["mean"] = round6(c.mean);
  doc["sd"] = c.stddev ? Json(round6(*c.stddev)) : Json(nullptr);
  return doc;
}

std::string ordinal(std::size_t k) {
  const char* suffix = "th";
  if (k % 100 < 11 || k % 100 > 13) {
    if (k % 10 == 1) suffix = "st";
    if (k % 10 == 2) suffix = "nd";
    if (k % 10 == 3) suffix = "rd";
  }
  return fmt::format("{}{}", k, suffix);
}

// Left-aligned table with a header row.
std::string layout(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += fmt::format("{:<{}}", row[c], width[c]);
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace

Json to_json(const AcceptabilityResult& result) {
  const std::size_t n = result.alternatives.size();
  const auto& c = result.counts;
  Json doc;
  doc["toolkit"] = kToolkitName;
  doc["version"] = kToolkitVersion;
  doc["mode"] = std::string(to_string(result.mode));
  doc["alternatives"] = result.alternatives;
  doc["problem_fingerprint"] = result.problem_fingerprint;
  doc["total_space"] = big_to_json(result.total_space);
  doc["combinations_evaluated"] = c.combinations();
  doc["plan"] = result.plan ? to_json(*result.plan) : Json(nullptr);
  doc["seed"] = result.plan ? Json(result.plan->seed) : Json(nullptr);
  doc["counts"]["preference"] = grid(n, [&](auto i, auto j) { return c.preference(i, j); });
  doc["counts"]["indifference"] = grid(n, [&](auto i, auto j) { return c.indifference(i, j); });
  doc["counts"]["rank"] = grid(n, [&](auto i, auto p) { return c.rank(i, p); });
  doc["probabilities"]["preference"] =
      grid(n, [&](auto i, auto j) { return round6(result.preference_probability(i, j)); });
  doc["probabilities"]["indifference"] =
      grid(n, [&](auto i, auto j) { return round6(result.indifference_probability(i, j)); });
  doc["probabilities"]["rank"] =
      grid(n, [&](auto i, auto p) { return round6(result.rank_probability(i, p)); });
  return doc;
}

AcceptabilityResult result_from_json(const Json& document) {
  try {
    AcceptabilityResult result;
    const auto mode = document.at("mode").get<std::string>();
    if (mode == "enumerated") {
      result.mode = Mode::Enumerated;
    } else if (mode == "sampled") {
      result.mode = Mode::Sampled;
    } else {
      throw Error(Errc::Schema, "unknown mode '" + mode + "'");
    }
    result.alternatives = document.at("alternatives").get<std::vector<std::string>>();
    result.problem_fingerprint = document.at("problem_fingerprint").get<std::string>();
    result.total_space = big_from_json(document.at("total_space"));
    if (!document.at("plan").is_null()) result.plan = plan_from_json(document["plan"]);
    const std::size_t n = result.alternatives.size();
    const auto& counts = document.at("counts");
    result.counts = AcceptabilityCounts(n);
    result.counts.set_raw(document.at("combinations_evaluated").get<std::uint64_t>(),
                          flatten(counts.at("preference"), n, "preference"),
                          flatten(counts.at("indifference"), n, "indifference"),
                          flatten(counts.at("rank"), n, "rank"));
    return result;
  } catch (const Json::exception& e) {
    throw Error(Errc::Schema, std::string("malformed result document: ") + e.what());
  }
}

Json to_json(const Summary& summary) {
  const std::size_t n = summary.alternatives.size();
  Json doc;
  doc["runs"] = summary.runs;
  doc["mode"] = std::string(to_string(summary.mode));
  doc["alternatives"] = summary.alternatives;
  doc["preference"] = grid(n, [&](auto i, auto j) { return cell_json(summary.preference[i][j]); });
  doc["indifference"] = grid(n, [&](auto i, auto j) { return cell_json(summary.indifference[i][j]); });
  doc["rank"] = grid(n, [&](auto i, auto p) { return cell_json(summary.rank[i][p]); });
  return doc;
}

Json result_set_to_json(const std::vector<AcceptabilityResult>& runs) {
  Json doc;
  doc["toolkit"] = kToolkitName;
  doc["version"] = kToolkitVersion;
  doc["runs"] = Json::array();
  for (const auto& r : runs) doc["runs"].push_back(to_json(r));
  doc["summary"] = to_json(summarize(runs));
  return doc;
}

std::vector<AcceptabilityResult> results_from_json(const Json& document) {
  std::vector<AcceptabilityResult> out;
  if (document.is_object() && document.contains("runs")) {
    for (const auto& r : document["runs"]) out.push_back(result_from_json(r));
  } else {
    out.push_back(result_from_json(document));
  }
  return out;
}

std::string render_table(const AcceptabilityResult& result) {
  const std::size_t n = result.alternatives.size();
  const bool exact = result.mode == Mode::Enumerated;
  auto cell = [&](double p, std::uint64_t count) {
    return exact ? fmt::format("{:.2f} ({})", p, count) : fmt::format("{:.3f}", p);
  };

  std::string out;
  if (exact) {
    out += fmt::format("Enumerated {} combinations of spanning trees\n\n",
                       result.counts.combinations());
  } else {
    const auto& plan = *result.plan;
    out += fmt::format("Sampled {} combinations of spanning trees (accuracy {}, confidence {}%, "
                       "z {}, seed {}) out of {}\n\n",
                       result.counts.combinations(), plan.accuracy, plan.confidence, plan.z(),
                       plan.seed, result.total_space.str());
  }

  out += "Preference probability (row preferred to column)\n";
  std::vector<std::vector<std::string>> rows;
  rows.emplace_back(1, "");
  for (const auto& a : result.alternatives) rows.front().push_back(a);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows.emplace_back(1, result.alternatives[i]);
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(i == j ? "X" : cell(result.preference_probability(i, j), result.counts.preference(i, j)));
    }
  }
  out += layout(rows);

  out += "\nRank acceptability (probability of attaining each rank)\n";
  rows.clear();
  rows.emplace_back(1, "");
  for (const auto& a : result.alternatives) rows.front().push_back(a);
  for (std::size_t p = 0; p < n; ++p) {
    auto& row = rows.emplace_back(1, ordinal(p + 1));
    for (std::size_t i = 0; i < n; ++i) {
      row.push_back(cell(result.rank_probability(i, p), result.counts.rank(i, p)));
    }
  }
  out += layout(rows);
  return out;
}

std::string render_table(const Summary& summary) {
  const std::size_t n = summary.alternatives.size();
  auto cell = [](const CellSummary& c) {
    return c.stddev ? fmt::format("{:.3f} ± {:.3f}", c.mean, *c.stddev) : fmt::format("{:.3f}", c.mean);
  };
  std::string out = fmt::format("{} {} run(s)\n\n", summary.runs, to_string(summary.mode));
  out += "Preference probability (row preferred to column)\n";
  std::vector<std::vector<std::string>> rows;
  rows.emplace_back(1, "");
  for (const auto& a : summary.alternatives) rows.front().push_back(a);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows.emplace_back(1, summary.alternatives[i]);
    for (std::size_t j = 0; j < n; ++j) row.push_back(i == j ? "-" : cell(summary.preference[i][j]));
  }
  out += layout(rows);
  out += "\nRank acceptability (probability of attaining each rank)\n";
  rows.clear();
  rows.emplace_back(1, "");
  for (const auto& a : summary.alternatives) rows.front().push_back(a);
  for (std::size_t p = 0; p < n; ++p) {
    auto& row = rows.emplace_back(1, ordinal(p + 1));
    for (std::size_t i = 0; i < n; ++i) row.push_back(cell(summary.rank[i][p]));
  }
  out += layout(rows);
  return out;
}

}  // namespace pcsmaa
