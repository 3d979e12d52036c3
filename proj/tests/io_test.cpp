#include <gtest/gtest.h>

#include "pcsmaa/problem_io.hpp"
#include "pcsmaa/result_io.hpp"
#include "support.hpp"

using namespace pcsmaa;
using namespace testing_support;

namespace {

Json small_document() {
  return Json::parse(R"({
    "alternatives": ["x", "y", "z"],
    "criteria": ["price", "looks"],
    "matrices": {
      "price": [[1, 2, "1/3"], [null, 1, null], [null, null, 1]],
      "looks": [[1, 0.5, 4], ["2", 1, 1], [0.25, 1, 1]]
    },
    "weights": [[1, 3], [null, 1]]
  })");
}

std::vector<Violation> violations_of(const Json& doc) {
  try {
    parse_problem_draft(doc);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

}  // namespace

TEST(ProblemIo, ParsesMixedNotations) {
  const auto p = parse_problem(small_document());
  EXPECT_EQ(p.criterion_matrices[0].at(2, 0), Rational(3));
  EXPECT_EQ(p.criterion_matrices[1].at(0, 1), Rational(1, 2));
  EXPECT_EQ(p.criterion_matrices[1].at(1, 0), Rational(2));
  EXPECT_EQ(p.weight_matrix.at(1, 0), Rational(1, 3));
}

TEST(ProblemIo, RoundTrip) {
  const auto p = parse_problem(small_document());
  const auto doc = to_json(p);
  EXPECT_EQ(doc["matrices"]["price"][0][2], "1/3");
  EXPECT_EQ(doc["matrices"]["price"][2][0], 3);
  EXPECT_TRUE(doc["matrices"]["price"][1][2].is_null());
  const auto again = parse_problem(doc);
  EXPECT_EQ(to_json(again), doc);
  EXPECT_EQ(fingerprint(again), fingerprint(p));
}

TEST(ProblemIo, FingerprintTracksContent) {
  const auto p = school();
  auto d = to_draft(p);
  d.criterion_tables[0].set(0, 1, Rational(5));
  EXPECT_NE(fingerprint(d), fingerprint(p));
  EXPECT_EQ(fingerprint(p).size(), 16u);
}

TEST(ProblemIo, ReciprocityViolationNamesMatrixAndCell) {
  auto doc = small_document();
  doc["matrices"]["looks"][1][0] = 3;
  const auto v = violations_of(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, Errc::ReciprocityViolation);
  EXPECT_EQ(v[0].matrix, "looks");
  EXPECT_EQ(v[0].row, 0u);
  EXPECT_EQ(v[0].col, 1u);
}

TEST(ProblemIo, CollectsViolationsAcrossMatrices) {
  auto doc = small_document();
  doc["matrices"]["price"][0][1] = -2;
  doc["weights"][1][1] = 3;
  const auto v = violations_of(doc);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].code, Errc::NonPositiveEntry);
  EXPECT_EQ(v[1].code, Errc::BadDiagonal);
  EXPECT_EQ(v[1].matrix, "weights");
}

TEST(ProblemIo, SchemaErrors) {
  auto doc = small_document();
  doc["matrices"].erase("looks");
  EXPECT_FALSE(violations_of(doc).empty());
  doc = small_document();
  doc["matrices"]["price"][0][1] = "two";
  EXPECT_FALSE(violations_of(doc).empty());
  doc = small_document();
  doc["weights"] = Json::array({Json::array({1})});
  EXPECT_FALSE(violations_of(doc).empty());
}

TEST(ProblemIo, DisconnectedLoadsAsDraft) {
  auto doc = small_document();
  doc["matrices"]["price"][0][2] = nullptr;
  const auto d = parse_problem_draft(doc);
  ASSERT_EQ(d.connectivity_violations().size(), 1u);
  EXPECT_THROW(parse_problem(doc), ValidationError);
}

TEST(ResultIo, EnumeratedRoundTrip) {
  const auto r = acceptability_enumerate(school());
  const auto doc = to_json(r);
  EXPECT_EQ(doc["mode"], "enumerated");
  EXPECT_EQ(doc["total_space"], 944784);
  EXPECT_TRUE(doc["plan"].is_null());
  EXPECT_EQ(doc["counts"]["preference"][0][1], 483246);
  EXPECT_DOUBLE_EQ(doc["probabilities"]["rank"][2][2].get<double>(), round6(752841.0 / 944784));
  EXPECT_EQ(result_from_json(doc), r);
}

TEST(ResultIo, SampledRoundTrip) {
  const auto r = acceptability_sample(school(), make_plan(0.01, 99, {}, 42, 2000));
  const auto doc = to_json(r);
  EXPECT_EQ(doc["plan"]["iterations"], 2000);
  EXPECT_EQ(doc["seed"], 42);
  const auto back = result_from_json(Json::parse(doc.dump()));
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(back).dump(), doc.dump());
}

TEST(ResultIo, LargeCountsAsStrings) {
  const BigInt huge("21743271936000000000000");
  EXPECT_TRUE(big_to_json(huge).is_string());
  EXPECT_EQ(big_from_json(big_to_json(huge)), huge);
  EXPECT_EQ(big_to_json(BigInt(944784)), 944784);
}

TEST(ResultIo, ResultSet) {
  std::vector<AcceptabilityResult> runs;
  for (std::uint64_t s = 0; s < 3; ++s) {
    runs.push_back(acceptability_sample(school(), make_plan(0.01, 99, {}, s, 500)));
  }
  const auto doc = result_set_to_json(runs);
  EXPECT_EQ(doc["runs"].size(), 3u);
  EXPECT_EQ(doc["summary"]["runs"], 3);
  EXPECT_EQ(results_from_json(doc), runs);
}

TEST(ResultIo, EnumeratedTableShowsCounts) {
  const auto text = render_table(acceptability_enumerate(school()));
  EXPECT_NE(text.find("0.51 (483246)"), std::string::npos);
  EXPECT_NE(text.find("0.09 (89721)"), std::string::npos);
  EXPECT_NE(text.find("0.80 (752841)"), std::string::npos);
  EXPECT_NE(text.find("3rd"), std::string::npos);
}

TEST(ResultIo, MalformedDocument) {
  EXPECT_THROW(result_from_json(Json::parse(R"({"mode": "enumerated"})")), Error);
  EXPECT_THROW(result_from_json(Json::parse(R"({"mode": "guessed"})")), Error);
}
