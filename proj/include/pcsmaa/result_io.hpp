#pragma once

#include <string>
#include <vector>

#include "pcsmaa/problem_io.hpp"
#include "pcsmaa/smaa.hpp"

namespace pcsmaa {

inline constexpr const char* kToolkitName = "pcsmaa";
inline constexpr const char* kToolkitVersion = "1.0.0";

// Exact count as a JSON number when it fits 64 bits, else a decimal string.
Json big_to_json(const BigInt& value);
BigInt big_from_json(const Json& value);

Json to_json(const SamplePlan& plan);
SamplePlan plan_from_json(const Json& document);

// Result document: exact counts, probabilities rounded to 6 decimals, mode,
// plan and seed (sampled runs), toolkit name and version. Nothing
// run-specific (timestamps, worker count) is included, so identical runs
// serialize to identical bytes.
Json to_json(const AcceptabilityResult& result);
AcceptabilityResult result_from_json(const Json& document);

Json to_json(const Summary& summary);

// Document holding several repetitions plus their summary.
Json result_set_to_json(const std::vector<AcceptabilityResult>& runs);

// Accepts either a single result document or a result set.
std::vector<AcceptabilityResult> results_from_json(const Json& document);

// Human-readable tables: preference matrix (row over column), then rank
// acceptability with one row per rank position. Enumerated results show the
// exact count in parentheses.
std::string render_table(const AcceptabilityResult& result);
// mean +- sd per cell across repetitions.
std::string render_table(const Summary& summary);

double round6(double value);

}  // namespace pcsmaa
