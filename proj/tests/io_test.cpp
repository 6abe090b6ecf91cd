#include <gtest/gtest.h>

#include "padic_riesz/io.hpp"

using namespace padic_riesz;
using io::json;

TEST(SetJsonTest, RoundTrip) {
  auto s = normalize(3, {Ball(Rational{1, 9}, 3, -1), Ball(PRational(3, 4), 2)});
  json doc = io::set_to_json(s);
  EXPECT_EQ(doc["v"], 1);
  EXPECT_EQ(doc["p"], 3);
  EXPECT_EQ(io::set_from_json(doc), s);
  EXPECT_EQ(io::set_from_json(io::parse_document(doc.dump())), s);
}

TEST(SetJsonTest, CentersAsStringsOrIntegers) {
  auto doc = io::parse_document(R"({"p": 2, "balls": [{"center": 1, "scale": 2}, {"center": "0", "scale": 1}]})");
  auto s = io::set_from_json(doc);
  EXPECT_EQ(canonical_decomposition(s).residues, (std::vector<Int>{0, 1, 2}));
  // Denominators prime to p are inverted p-adically: 1/3 = 3 mod 4 in Z_2.
  auto third = io::set_from_json(io::parse_document(R"({"p": 2, "balls": [{"center": "1/3", "scale": 2}]})"));
  EXPECT_EQ(third.balls()[0].center(), PRational(2, 3));
}

TEST(SetJsonTest, OverlapNeedsNormalizeFlag) {
  const char* text = R"({"p": 2, "balls": [{"center": "0", "scale": 1}, {"center": "2", "scale": 2}]})";
  EXPECT_THROW(io::set_from_json(io::parse_document(text)), overlap_error);
  auto doc = io::parse_document(text);
  doc["normalize"] = true;
  EXPECT_EQ(io::set_from_json(doc), normalize(2, {Ball(PRational::zero(2), 1)}));
}

TEST(SetJsonTest, Errors) {
  EXPECT_THROW(io::parse_document("{\"p\": 2, "), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document("[1, 2]")), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"balls": []})")), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": 2})")), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": "two", "balls": []})")), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": 2, "balls": [{"center": "1"}]})")), io::format_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": 4, "balls": []})")), prime_error);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": 2, "balls": [{"center": "x", "scale": 1}]})")),
               usage_error);
}

TEST(DecompositionJsonTest, ExamplesAndPullBack) {
  auto zp = io::set_from_json(io::parse_document(R"({"p": 2, "balls": [{"center": "0", "scale": 0}]})"));
  auto norm = affine_normalize(zp);
  json doc = io::decomposition_to_json(canonical_decomposition(norm.set), norm.shift, norm.dilation);
  EXPECT_EQ(doc["gamma"], 0);
  EXPECT_EQ(doc["C"], json::array({0}));
  EXPECT_EQ(doc["pullback"]["e"], 0);

  auto off = normalize(3, {Ball(Rational{1, 9}, 3, -1), Ball(Rational{4, 9}, 3, 0)});
  auto n2 = affine_normalize(off);
  json d2 = io::decomposition_to_json(canonical_decomposition(n2.set), n2.shift, n2.dilation);
  // A decomposition document reads back as the original set.
  EXPECT_EQ(io::set_from_json(io::parse_document(d2.dump())), off);
  EXPECT_THROW(io::set_from_json(io::parse_document(R"({"p": 3, "gamma": 1, "C": [3]})")), io::format_error);
}

TEST(SpectrumJsonTest, Fields) {
  auto s = normalize(2, {Ball(PRational(2, 1), 2), Ball(PRational::zero(2), 1)});
  auto spec = build_spectrum(s, 1);
  json doc = io::spectrum_to_json(spec);
  EXPECT_EQ(doc["v"], 1);
  EXPECT_EQ(doc["gamma"], 2);
  EXPECT_EQ(doc["depth"], 1);
  EXPECT_EQ(doc["D"].size(), 3u);
  EXPECT_EQ(doc["lambda"].size(), 6u);
  EXPECT_EQ(doc["lambda"][0], "0");
  EXPECT_EQ(doc["pullback"]["a"], "0");
  for (const auto& l : doc["lambda"]) EXPECT_NO_THROW(PRational::parse(l.get<std::string>(), 2));
}

TEST(ReportJsonTest, Fields) {
  auto spec = build_spectrum(normalize(3, {Ball(PRational::zero(3), 0)}), 1);
  json doc = io::report_to_json(riesz_bounds(spec));
  for (const char* key : {"A", "B", "K", "depth", "rank_ok", "block_condition"}) EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_DOUBLE_EQ(doc["A"].get<double>(), 1.0);
  EXPECT_EQ(doc["rank_ok"], true);
}

TEST(CertificateJsonTest, Fields) {
  std::vector<Int> squares{1, 4, 9, 16};
  auto spec = build_counterexample(2, squares, 4);
  auto result = certify_nonexistence(spec, 1.5);
  json doc = io::nonexistence_to_json(result);
  EXPECT_EQ(doc["n"], 1);
  EXPECT_EQ(doc["subgroup_exp"], 1);
  EXPECT_EQ(doc["N"], 4);
  EXPECT_EQ(doc["method"], "coset-bound");
  EXPECT_DOUBLE_EQ(doc["K_refuted"].get<double>(), 1.5);
  EXPECT_EQ(doc["T"], json::array({"0", "2", "4", "6"}));

  auto none = io::nonexistence_to_json(certify_nonexistence(build_counterexample(2, {1, 2}, 2), 5.0));
  EXPECT_EQ(none["verdict"], "inconclusive");
  EXPECT_FALSE(none.contains("N"));

  auto counter = io::counterexample_to_json(spec);
  EXPECT_EQ(counter["balls"].size(), 4u);
  EXPECT_EQ(counter["exponents"], json::array({1, 4, 9, 16}));
}
