#pragma once

// JSON documents for sets, decompositions, spectra, reports and certificates.
// Every emitted document carries "v": 1.

#include <string>
#include <vector>

#include <json.hpp>

#include "coset.hpp"
#include "gram.hpp"
#include "packing.hpp"
#include "padic.hpp"
#include "spectrum.hpp"

namespace padic_riesz::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or schema-violating input document.
class format_error : public usage_error {
 public:
  using usage_error::usage_error;
};

namespace detail {

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw format_error(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw format_error(std::string("field '") + key + "' has the wrong type");
  }
}

inline std::string rational_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<Int>());
  throw format_error("expected a rational string or integer");
}

}  // namespace detail

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw format_error(std::string("malformed JSON: ") + e.what());
  }
}

inline json pullback_json(const PRational& shift, Int dilation) {
  return {{"a", shift.to_string()}, {"e", dilation}};
}

/// {"p": p, "balls": [{"center": "<rational>", "scale": m}, ...]}.
inline json set_to_json(const CompactOpenSet& s) {
  json balls = json::array();
  for (const auto& b : s.balls()) balls.push_back({{"center", b.center().to_string()}, {"scale", b.scale()}});
  return {{"v", kSchemaVersion}, {"p", s.p()}, {"balls", balls}};
}

/// Reads a set document. Overlapping balls are rejected unless "normalize" is
/// true. A decomposition document ({"gamma", "C", "pullback"}) is also
/// accepted and mapped back through its pull-back.
inline CompactOpenSet set_from_json(const json& doc) {
  if (!doc.is_object()) throw format_error("set document must be a JSON object");
  const Int p = require_prime(detail::field<Int>(doc, "p"));
  if (doc.contains("gamma") && doc.contains("C")) {
    CanonicalDecomposition dec{p, detail::field<Int>(doc, "gamma"), detail::field<std::vector<Int>>(doc, "C")};
    if (dec.gamma < 0) throw format_error("gamma must be non-negative");
    const Int modulus = padic_riesz::detail::ipow(p, dec.gamma);
    for (Int c : dec.residues)
      if (c < 0 || c >= modulus) throw format_error("residue outside [0, p^gamma)");
    CompactOpenSet s = dec.reconstruct();
    if (doc.contains("pullback")) {
      const auto& pb = doc.at("pullback");
      PRational a = PRational::parse(detail::rational_text(pb.at("a")), p);
      Int e = detail::field<Int>(pb, "e");
      s = translate(dilate(s, -e), -a);
    }
    return s;
  }
  const json& balls = doc.contains("balls") ? doc.at("balls") : throw format_error("missing field 'balls'");
  if (!balls.is_array()) throw format_error("'balls' must be an array");
  std::vector<Ball> out;
  for (const auto& b : balls) {
    if (!b.is_object()) throw format_error("each ball must be an object");
    Rational center = Rational::parse(detail::rational_text(b.contains("center") ? b.at("center") : json("0")));
    out.emplace_back(center, p, detail::field<Int>(b, "scale"));
  }
  const bool merge = doc.value("normalize", false);
  return merge ? normalize(p, std::move(out)) : CompactOpenSet::from_disjoint(p, std::move(out));
}

inline json decomposition_to_json(const CanonicalDecomposition& dec, const PRational& shift, Int dilation) {
  return {{"v", kSchemaVersion}, {"p", dec.p}, {"gamma", dec.gamma}, {"C", dec.residues},
          {"pullback", pullback_json(shift, dilation)}};
}

/// {"gamma", "D", "depth", "pullback", "lambda"}; lambda is the spectrum of
/// the original set, in the order l-major, d-minor.
inline json spectrum_to_json(const SpectrumSpec& spec) {
  json lambda = json::array();
  for (const auto& l : spec.pulled_back()) lambda.push_back(l.to_string());
  return {{"v", kSchemaVersion},
          {"p", spec.p},
          {"gamma", spec.gamma},
          {"C", spec.C},
          {"D", spec.D},
          {"depth", spec.depth},
          {"pullback", pullback_json(spec.shift, spec.dilation)},
          {"lambda", lambda}};
}

inline json report_to_json(const RieszReport& r) {
  return {{"v", kSchemaVersion},       {"A", r.A},
          {"B", r.B},                  {"K", r.K},
          {"depth", r.depth},          {"rank_ok", r.rank_ok},
          {"block_condition", r.block_condition}, {"dimension", r.dimension},
          {"rank", r.rank},            {"full_checked", r.full_checked},
          {"consistent", r.consistent}, {"ok", r.ok}};
}

inline json certificate_to_json(const TranslationCertificate& c) {
  json T = json::array();
  for (const auto& t : c.translations) T.push_back(t.to_string());
  json doc{{"v", kSchemaVersion},
           {"p", c.p},
           {"n", c.witness_n ? json(*c.witness_n) : json(nullptr)},
           {"subgroup_exp", c.subgroup_exp},
           {"resolution", c.resolution},
           {"N", c.count},
           {"method", to_string(c.method)},
           {"budget_exceeded", c.budget_exceeded},
           {"K_refuted", c.K_refuted ? json(*c.K_refuted) : json(nullptr)},
           {"T", T}};
  return doc;
}

inline json nonexistence_to_json(const NonexistenceResult& r) {
  json doc = r.certificate ? certificate_to_json(*r.certificate) : json{{"v", kSchemaVersion}};
  doc["verdict"] = r.conclusive ? "no Riesz basis with constant <= K" : "inconclusive";
  doc["K"] = r.K;
  doc["threshold"] = r.threshold;
  doc["searched_up_to"] = r.searched_up_to;
  return doc;
}

inline json counterexample_to_json(const CounterexampleSpec& spec) {
  json doc = set_to_json(spec.set());
  doc["exponents"] = std::vector<Int>(spec.exponents.begin(), spec.exponents.begin() + spec.n_max);
  doc["n_max"] = spec.n_max;
  doc["measure"] = spec.measure().to_string();
  return doc;
}

}  // namespace padic_riesz::io
