#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "pcsmaa/pcm.hpp"

namespace pcsmaa {

using Json = nlohmann::json;

// Problem document:
//   {"alternatives": [str], "criteria": [str],
//    "matrices": {criterion: [[number | "p/q" | null]]},
//    "weights": [[number | "p/q" | null]]}
//
// Structural errors (schema, shape, positivity, diagonal, reciprocity) throw
// ValidationError listing every violation found. Connectivity is left to
// to_problem so that drafts can be loaded.
ProblemDraft parse_problem_draft(const Json& document);

// parse_problem_draft + to_problem.
Problem parse_problem(const Json& document);
Problem load_problem(const std::filesystem::path& path);

// Canonical document: integers as numbers, fractions as "p/q" strings,
// missing judgements as null, diagonal as 1.
Json to_json(const ProblemDraft& draft);
Json to_json(const Problem& problem);

Json judgement_to_json(const std::optional<Rational>& value);
// Throws Error(Schema) for anything but a positive-or-not number, "p/q"
// string, or null.
std::optional<Rational> judgement_from_json(const Json& value);

// Stable 64-bit FNV-1a hash of the canonical document, as 16 hex digits.
std::string fingerprint(const ProblemDraft& draft);
std::string fingerprint(const Problem& problem);

Json read_json_file(const std::filesystem::path& path);

}  // namespace pcsmaa
