#include "pcsmaa/problem_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace pcsmaa {

namespace {

void require(bool condition, std::vector<Violation>& out, const std::string& matrix,
             const std::string& message) {
  if (!condition) out.push_back({Errc::Schema, matrix, 0, 0, message});
}

std::vector<std::string> parse_labels(const Json& document, const char* key,
                                      std::vector<Violation>& violations) {
  std::vector<std::string> labels;
  if (!document.contains(key) || !document[key].is_array()) {
    violations.push_back({Errc::Schema, {}, 0, 0, fmt::format("'{}' must be an array of strings", key)});
    return labels;
  }
  std::set<std::string> seen;
  for (const auto& item : document[key]) {
    if (!item.is_string()) {
      violations.push_back({Errc::Schema, {}, 0, 0, fmt::format("'{}' must contain only strings", key)});
      continue;
    }
    auto label = item.get<std::string>();
    if (!seen.insert(label).second) {
      violations.push_back({Errc::Schema, {}, 0, 0, fmt::format("duplicate entry '{}' in '{}'", label, key)});
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

// Returns nullopt (after recording violations) when the matrix cannot be built.
std::optional<JudgementTable> parse_matrix(const Json& rows, std::size_t expected,
                                           const std::string& name,
                                           std::vector<Violation>& violations) {
  if (!rows.is_array()) {
    violations.push_back({Errc::Schema, name, 0, 0, fmt::format("matrix '{}' must be an array of rows", name)});
    return std::nullopt;
  }
  RawMatrix raw;
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) {
      violations.push_back({Errc::Schema, name, i, 0, fmt::format("row {} of '{}' is not an array", i, name)});
      ok = false;
      continue;
    }
    auto& out = raw.emplace_back();
    for (std::size_t j = 0; j < row.size(); ++j) {
      try {
        out.push_back(judgement_from_json(row[j]));
      } catch (const Error& e) {
        violations.push_back({e.code(), name, i, j,
                              fmt::format("'{}' entry ({}, {}): {}", name, i, j, e.what())});
        out.emplace_back();
        ok = false;
      }
    }
  }
  if (!ok) return std::nullopt;
  if (raw.size() != expected) {
    violations.push_back({Errc::NotSquare, name, 0, 0,
                          fmt::format("matrix '{}' has {} rows, expected {}", name, raw.size(), expected)});
    return std::nullopt;
  }
  auto structural = check_structure(raw);
  if (!structural.empty()) {
    for (auto& v : structural) {
      v.matrix = name;
      v.message = fmt::format("'{}': {}", name, v.message);
      violations.push_back(std::move(v));
    }
    return std::nullopt;
  }
  return build_table(raw);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Json table_to_json(const JudgementTable& table) {
  Json rows = Json::array();
  for (Index i = 0; i < table.size(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < table.size(); ++j) row.push_back(judgement_to_json(table.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json judgement_to_json(const std::optional<Rational>& value) {
  if (!value) return nullptr;
  if (value->denominator() == 1) return value->numerator();
  return value->to_string();
}

std::optional<Rational> judgement_from_json(const Json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_number_integer()) {
    if (value.is_number_unsigned() && value.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw Error(Errc::Overflow, "integer out of range");
    }
    return Rational(value.get<std::int64_t>());
  }
  if (value.is_number_float()) return Rational::from_double(value.get<double>());
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  throw Error(Errc::Schema, "judgement must be a number, a \"p/q\" string, or null");
}

ProblemDraft parse_problem_draft(const Json& document) {
  std::vector<Violation> violations;
  if (!document.is_object()) {
    throw ValidationError({{Errc::Schema, {}, 0, 0, "problem document must be a JSON object"}});
  }
  ProblemDraft draft;
  draft.alternatives = parse_labels(document, "alternatives", violations);
  draft.criteria = parse_labels(document, "criteria", violations);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  require(draft.alternatives.size() >= 2, violations, {}, "at least 2 alternatives are required");
  require(!draft.criteria.empty(), violations, {}, "at least 1 criterion is required");

  const auto n = draft.alternatives.size();
  const auto m = draft.criteria.size();
  const bool has_matrices = document.contains("matrices") && document["matrices"].is_object();
  require(has_matrices, violations, {}, "'matrices' must be an object keyed by criterion");
  if (has_matrices) {
    const auto& matrices = document["matrices"];
    for (const auto& [key, value] : matrices.items()) {
      if (std::find(draft.criteria.begin(), draft.criteria.end(), key) == draft.criteria.end()) {
        violations.push_back({Errc::Schema, key, 0, 0, fmt::format("matrix '{}' has no matching criterion", key)});
      }
    }
    for (const auto& name : draft.criteria) {
      if (!matrices.contains(name)) {
        violations.push_back({Errc::Schema, name, 0, 0, fmt::format("criterion '{}' has no matrix", name)});
        continue;
      }
      if (auto table = parse_matrix(matrices[name], n, name, violations)) {
        draft.criterion_tables.push_back(std::move(*table));
      }
    }
  }
  if (!document.contains("weights")) {
    violations.push_back({Errc::Schema, "weights", 0, 0, "'weights' matrix is required"});
  } else if (auto table = parse_matrix(document["weights"], m, "weights", violations)) {
    draft.weight_table = std::move(*table);
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return draft;
}

Problem parse_problem(const Json& document) { return to_problem(parse_problem_draft(document)); }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Schema, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::Schema, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Problem load_problem(const std::filesystem::path& path) { return parse_problem(read_json_file(path)); }

Json to_json(const ProblemDraft& draft) {
  Json doc;
  doc["alternatives"] = draft.alternatives;
  doc["criteria"] = draft.criteria;
  Json matrices = Json::object();
  for (std::size_t j = 0; j < draft.criteria.size() && j < draft.criterion_tables.size(); ++j) {
    matrices[draft.criteria[j]] = table_to_json(draft.criterion_tables[j]);
  }
  doc["matrices"] = std::move(matrices);
  doc["weights"] = table_to_json(draft.weight_table);
  return doc;
}

Json to_json(const Problem& problem) { return to_json(to_draft(problem)); }

std::string fingerprint(const ProblemDraft& draft) {
  return fmt::format("{:016x}", fnv1a(to_json(draft).dump()));
}

std::string fingerprint(const Problem& problem) { return fingerprint(to_draft(problem)); }

}  // namespace pcsmaa
