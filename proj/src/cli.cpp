#include "pcsmaa/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "pcsmaa/problem_io.hpp"
#include "pcsmaa/result_io.hpp"
#include "pcsmaa/service.hpp"
#include "pcsmaa/smaa.hpp"

namespace pcsmaa {

namespace {

// Usage error: bad flags or flag combinations.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_workers() {
  if (const char* env = std::getenv("PCSMAA_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct AnalyzeArgs {
  std::string input;
  std::string mode = "auto";
  double accuracy = 0.01;
  double confidence = 99.0;
  std::optional<double> z;
  std::optional<std::int64_t> iterations;
  int repetitions = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string output;
  std::string format = "table";
  std::uint64_t cap = kDefaultEnumerationCap;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) throw UsageError("cannot write '" + path + "'");
}

std::string cell_text(const Json& value) {
  if (value.is_null()) return "-";
  if (value.is_number_float()) return fmt::format("{:.2f}", value.get<double>());
  return value.dump();
}

int run_validate(const std::string& input, const std::string& format, std::ostream& out) {
  const ProblemDraft draft = parse_problem_draft(read_json_file(input));
  const Json state = validation_state(draft);
  if (format == "json") {
    out << state.dump(2) << '\n';
  } else {
    out << fmt::format("{:<24}{:>6}{:>12}{:>11}{:>8}{:>14}  {}\n", "matrix", "size", "judgements",
                       "connected", "CR", "trees", "intransitive triads");
    for (const auto& m : state["matrices"]) {
      std::string triads = "-";
      if (m["transitivity_violations"].is_array()) {
        triads.clear();
        for (const auto& t : m["transitivity_violations"]) {
          if (!triads.empty()) triads += " ";
          triads += fmt::format("({},{},{})", t[0].get<int>(), t[1].get<int>(), t[2].get<int>());
        }
        if (triads.empty()) triads = "none";
      }
      out << fmt::format("{:<24}{:>6}{:>12}{:>11}{:>8}{:>14}  {}\n", m["key"].get<std::string>(),
                         m["size"].dump(), m["judgements"].dump(),
                         m["connected"].get<bool>() ? "yes" : "no", cell_text(m["consistency_ratio"]),
                         cell_text(m["tree_count"]), triads);
    }
    out << "total space: " << cell_text(state["total_space"]) << '\n';
    for (const auto& v : state["violations"]) out << "violation: " << v["message"].get<std::string>() << '\n';
  }
  return state["draft"].get<bool>() ? 1 : 0;
}

int run_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  if (args.repetitions < 1) throw UsageError("--repetitions must be at least 1");
  if (args.iterations && *args.iterations <= 0) {
    throw Error(Errc::BadPlan, "--iterations must be positive");
  }
  const Problem problem = load_problem(args.input);

  bool enumerate = args.mode == "enumerate";
  if (args.mode == "auto") enumerate = total_space(problem) <= args.cap;

  RunOptions options;
  options.workers = args.workers;
  options.cap = args.cap;

  std::vector<AcceptabilityResult> runs;
  if (enumerate) {
    if (args.repetitions > 1) err << "note: enumeration is exact; running it once\n";
    runs.push_back(acceptability_enumerate(problem, options));
  } else {
    std::optional<std::uint64_t> iterations;
    if (args.iterations) iterations = static_cast<std::uint64_t>(*args.iterations);
    for (int r = 0; r < args.repetitions; ++r) {
      const auto plan = make_plan(args.accuracy, args.confidence, args.z,
                                  args.seed + static_cast<std::uint64_t>(r), iterations);
      runs.push_back(acceptability_sample(problem, plan, options));
    }
  }

  const Json document = runs.size() == 1 ? to_json(runs.front()) : result_set_to_json(runs);
  if (!args.output.empty()) write_file(args.output, document.dump(2) + "\n");
  if (args.format == "json") {
    out << document.dump(2) << '\n';
  } else if (runs.size() == 1) {
    out << render_table(runs.front());
  } else {
    out << render_table(summarize(runs));
  }
  return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& format, std::ostream& out) {
  std::vector<AcceptabilityResult> runs;
  for (const auto& path : inputs) {
    for (auto& r : results_from_json(read_json_file(path))) runs.push_back(std::move(r));
  }
  const Summary summary = summarize(runs);
  if (format == "json") {
    out << to_json(summary).dump(2) << '\n';
  } else if (runs.size() == 1) {
    out << render_table(runs.front());
  } else {
    out << render_table(summary);
  }
  return 0;
}

int run_serve(const std::string& host, int port, const ServiceConfig& config, std::ostream& out) {
  SessionService service(config);
  httplib::Server server;
  service.mount(server);
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw UsageError(fmt::format("cannot bind {}:{}", host, port));
  out << fmt::format("listening on http://{}:{}\n", host, bound) << std::flush;
  server.listen_after_bind();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic acceptability analysis for incomplete pairwise comparisons", "pcsmaa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  std::string input;
  std::string format = "table";
  auto* validate = app.add_subcommand("validate", "Check a problem file and print per-matrix diagnostics");
  validate->add_option("input", input, "Problem file")->required();
  validate->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));

  AnalyzeArgs args;
  args.workers = default_workers();
  auto* analyze = app.add_subcommand("analyze", "Compute preference and rank acceptability");
  analyze->add_option("input", args.input, "Problem file")->required();
  analyze->add_option("--mode", args.mode, "enumerate, sample or auto")
      ->check(CLI::IsMember({"enumerate", "sample", "auto"}));
  analyze->add_option("--accuracy", args.accuracy, "Target accuracy (lambda)");
  analyze->add_option("--confidence", args.confidence, "Confidence level in percent");
  analyze->add_option("--z", args.z, "Override the normal quantile");
  analyze->add_option("--iterations", args.iterations, "Override the sample size");
  analyze->add_option("--repetitions", args.repetitions, "Independent sampling runs (seed, seed+1, ...)");
  analyze->add_option("--seed", args.seed, "Random seed");
  analyze->add_option("--workers", args.workers, "Worker threads (default: $PCSMAA_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--output,-o", args.output, "Write the result document to this file");
  analyze->add_option("--format", args.format, "Standard output format")
      ->check(CLI::IsMember({"table", "json"}));
  analyze->add_option("--cap", args.cap, "Largest space to enumerate");

  std::vector<std::string> reports;
  auto* report = app.add_subcommand("report", "Summarize stored result documents");
  report->add_option("results", reports, "Result documents")->required();
  report->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));

  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceConfig config;
  std::string data_dir = "sessions";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--data-dir", data_dir, "Session storage directory");
  serve->add_option("--static-dir", static_dir, "Directory served under /");
  serve->add_option("--job-threads", config.job_threads, "Concurrent analysis jobs");
  serve->add_option("--workers", config.analysis_workers, "Threads per analysis job");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolkitVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*validate) return run_validate(input, format, out);
    if (*analyze) return run_analyze(args, out, err);
    if (*report) return run_report(reports, format, out);
    config.data_dir = data_dir;
    if (!static_dir.empty()) config.static_dir = static_dir;
    config.analysis_workers = std::max(1u, config.analysis_workers);
    return run_serve(host, port, config, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& v : e.violations()) {
      err << fmt::format("  [{}] {} ({}, {}): {}\n", to_string(v.code), v.matrix, v.row, v.col, v.message);
    }
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pcsmaa
