#pragma once

// End-to-end acceptance checks shared by the acceptance binary and the
// `selftest` command. Each check returns {"id", "name", "pass", "details"};
// details hold only deterministic quantities (no timings).

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "coset.hpp"
#include "gram.hpp"
#include "oracle.hpp"
#include "packing.hpp"
#include "padic.hpp"
#include "spectrum.hpp"

namespace padic_riesz::acceptance {

using nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

namespace detail {

inline json result(int id, const char* name, bool pass, json details) {
  return {{"id", id}, {"name", name}, {"pass", pass}, {"details", std::move(details)}};
}

inline Int draw(std::mt19937_64& rng, Int lo, Int hi) {
  return lo + static_cast<Int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random nonempty union of level-gamma balls in Z_p, normalised.
inline CompactOpenSet random_set(std::mt19937_64& rng, Int p, Int gamma, unsigned density = 2) {
  const Int modulus = padic_riesz::detail::ipow(p, gamma);
  std::vector<Ball> balls;
  while (balls.empty())
    for (Int r = 0; r < modulus; ++r)
      if (rng() % density == 0) balls.emplace_back(PRational(p, r), gamma);
  return normalize(p, std::move(balls));
}

struct Case {
  CompactOpenSet omega;
  Int p;
};

// The ten sets shared by the block-structure, rank and sampling checks.
inline std::vector<Case> random_cases(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (int i = 0; i < 10; ++i) {
    const Int p = i % 2 == 0 ? 2 : 3;
    const Int gamma = draw(rng, 1, 3);
    out.push_back({random_set(rng, p, gamma), p});
  }
  return out;
}

inline double max_entry(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// Gram matrix of L^(M) on Z_p is the identity.
inline json orthonormality() {
  double worst = 0;
  json runs = json::array();
  bool pass = true;
  for (Int p : {2, 3, 5})
    for (Int depth = 0; depth <= 3; ++depth) {
      CompactOpenSet zp = normalize(p, {Ball(PRational::zero(p), 0)});
      SpectrumSpec spec = build_spectrum(zp, depth);
      auto lambdas = spec.lambdas();
      GramMatrix g = gram_matrix(lambdas, spec.decomposition());
      const auto n = static_cast<Eigen::Index>(lambdas.size());
      const double err = detail::max_entry(g.values - Eigen::MatrixXcd::Identity(n, n));
      worst = std::max(worst, err);
      pass = pass && err <= 1e-9 && lambdas == enumerate_L_gamma(p, 0, depth);
      runs.push_back({{"p", p}, {"depth", depth}, {"dimension", n}});
    }
  return detail::result(1, "orthonormality on Z_p", pass, {{"max_abs_error", worst}, {"runs", runs}});
}

/// Exact identical-block structure and depth-independent bounds.
inline json block_structure(std::uint64_t seed) {
  bool pass = true;
  json cases = json::array();
  for (const auto& c : detail::random_cases(seed + 2)) {
    json depths = json::array();
    double A0 = 0, B0 = 0;
    bool first = true;
    SpectrumSpec base = build_spectrum(c.omega, 0);
    // Independent eigen route on the block: Jacobi rotations.
    auto jacobi = oracle::jacobi_eigenvalues(gram_block(base));
    for (Int depth = 1; depth <= 3; ++depth) {
      SpectrumSpec spec = build_spectrum(c.omega, depth);
      auto lambdas = spec.lambdas();
      GramMatrix g = gram_matrix(lambdas, spec.decomposition());
      const bool blocks =
          has_identical_block_structure(g, spec.D.size(), static_cast<std::size_t>(padic_riesz::detail::ipow(c.p, depth)));
      RieszReport r = riesz_bounds(spec);
      if (first) {
        A0 = r.A;
        B0 = r.B;
        first = false;
      }
      const double scale = std::max(1.0, r.B);
      const bool stable = std::abs(r.A - A0) <= 1e-9 * scale && std::abs(r.B - B0) <= 1e-9 * scale;
      const bool oracle_ok =
          std::abs(jacobi.front() - r.A) <= 1e-9 * scale && std::abs(jacobi.back() - r.B) <= 1e-9 * scale;
      const bool ok = blocks && stable && oracle_ok && r.full_checked && r.consistent && r.ok;
      pass = pass && ok;
      depths.push_back({{"depth", depth}, {"dimension", r.dimension}, {"block_identical", blocks},
                        {"consistent", r.consistent}, {"ok", ok}});
    }
    cases.push_back({{"p", c.p}, {"gamma", base.gamma}, {"C_size", base.C.size()}, {"A", A0}, {"B", B0},
                     {"depths", depths}});
  }
  return detail::result(2, "block structure and depth independence", pass, {{"cases", cases}});
}

/// Rank of the depth-M Gram equals |C| p^M.
inline json completeness(std::uint64_t seed) {
  bool pass = true;
  json cases = json::array();
  for (const auto& c : detail::random_cases(seed + 2)) {
    for (Int depth = 1; depth <= 3; ++depth) {
      SpectrumSpec spec = build_spectrum(c.omega, depth);
      RieszReport r = riesz_bounds(spec);
      const std::size_t expected = spec.C.size() * static_cast<std::size_t>(padic_riesz::detail::ipow(c.p, depth));
      const bool ok = r.full_checked && r.rank == expected && r.rank_ok;
      pass = pass && ok;
      cases.push_back({{"p", c.p}, {"gamma", spec.gamma}, {"depth", depth}, {"rank", r.rank}, {"expected", expected}});
    }
  }
  return detail::result(3, "rank equals |C| p^M", pass, {{"cases", cases}});
}

/// (1/K) |a|^2 <= ||sum a chi||^2 <= K |a|^2 on random coefficient vectors.
inline json riesz_sampling(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 4);
  std::normal_distribution<double> normal;
  int violations = 0, samples = 0;
  json cases = json::array();
  for (const auto& c : detail::random_cases(seed + 2)) {
    SpectrumSpec spec = build_spectrum(c.omega, 1);
    RieszReport r = riesz_bounds(spec);
    auto lambdas = spec.lambdas();
    GramMatrix g = gram_matrix(lambdas, spec.decomposition());
    double worst_ratio = 0;
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXcd a(g.values.rows());
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {normal(rng), normal(rng)};
      const double norm2 = a.squaredNorm();
      const double synth = synthesis_norm_squared(g.values, a);
      ++samples;
      if (norm2 / r.K > synth * (1 + 1e-12) || synth > r.K * norm2 * (1 + 1e-12)) ++violations;
      worst_ratio = std::max(worst_ratio, std::max(synth / norm2, norm2 / synth) / r.K);
    }
    cases.push_back({{"p", c.p}, {"K", r.K}, {"worst_ratio_over_K", worst_ratio}});
  }
  return detail::result(4, "Riesz inequality sampling", violations == 0,
                        {{"samples", samples}, {"violations", violations}, {"cases", cases}});
}

/// Translation and dilation by p^(+-1) with the pulled-back spectrum.
inline json affine_stability(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 5);
  bool pass = true;
  double worst = 0;
  json cases = json::array();
  for (int i = 0; i < 6; ++i) {
    const Int p = i % 2 == 0 ? 2 : 3;
    CompactOpenSet omega = detail::random_set(rng, p, detail::draw(rng, 1, 2));
    SpectrumSpec spec = build_spectrum(omega, 1);
    RieszReport report = riesz_bounds(spec);
    auto lambdas = spec.pulled_back();
    Bounds base = eigen_range(gram_matrix(lambdas, omega));
    PRational a(p, detail::draw(rng, 1, 200), -detail::draw(rng, 0, 3));
    Bounds moved = eigen_range(gram_matrix(lambdas, translate(omega, a)));
    double err = std::max({std::abs(base.A - report.A), std::abs(base.B - report.B), std::abs(moved.A - base.A),
                           std::abs(moved.B - base.B)});
    for (Int e : {1, -1}) {
      std::vector<PRational> scaled;
      for (const auto& l : lambdas) scaled.push_back(l.scaled(-e));
      Bounds d = eigen_range(gram_matrix(scaled, dilate(omega, e)));
      const double factor = std::pow(static_cast<double>(p), static_cast<double>(-e));
      err = std::max({err, std::abs(d.A - base.A * factor), std::abs(d.B - base.B * factor)});
      // Same check through the normalising pipeline on the dilated set.
      SpectrumSpec rebuilt = build_spectrum(translate(dilate(omega, e), a), 1);
      Bounds via = eigen_range(gram_matrix(rebuilt.pulled_back(), translate(dilate(omega, e), a)));
      RieszReport rr = riesz_bounds(rebuilt);
      const double jac = std::pow(static_cast<double>(p), static_cast<double>(rebuilt.dilation));
      err = std::max({err, std::abs(via.A - rr.A * jac), std::abs(via.B - rr.B * jac)});
    }
    worst = std::max(worst, err);
    pass = pass && err <= 1e-12;
    cases.push_back({{"p", p}, {"shift", a.to_string()}, {"A", base.A}, {"B", base.B}, {"max_abs_error", err}});
  }
  return detail::result(5, "affine stability", pass, {{"max_abs_error", worst}, {"cases", cases}});
}

/// Exact vanishing of integrals over Z_p and agreement with Riemann sums.
inline json integral_identity(std::uint64_t seed) {
  bool pass = true;
  int zeros = 0;
  for (Int p : {2, 3, 5})
    for (Int n = 1; n <= 5; ++n) {
      const Int top = padic_riesz::detail::ipow(p, n);
      for (Int k = 1; k < top; ++k) {
        if (k % p == 0) continue;
        BallIntegral b = ball_integral_char(Frequency(p, k, n), PRational::zero(p), 0);
        pass = pass && b.zero && b.to_complex() == std::complex<double>(0.0, 0.0);
        ++zeros;
      }
    }
  std::mt19937_64 rng(seed + 6);
  double worst = 0;
  const Int primes[] = {2, 3, 5};
  for (int t = 0; t < 50; ++t) {
    const Int p = primes[rng() % 3];
    const Int n = detail::draw(rng, 1, p == 5 ? 3 : 4);
    const Int top = padic_riesz::detail::ipow(p, n);
    Int k = detail::draw(rng, 1, top - 1);
    if (k % p == 0) ++k;
    const Frequency lambda(p, k, n);
    const Int m = detail::draw(rng, n, n + 1);
    const PRational center(p, detail::draw(rng, 0, 500));
    BallIntegral exact = ball_integral_char(lambda, PAdicScalar::from(center), m);
    if (exact.zero) pass = false;
    // Cells of p^(n+2) Z_p inside the ball.
    const auto riemann = oracle::riemann_sum(lambda.value(), center, m, n + 2 - m);
    worst = std::max(worst, std::abs(exact.to_complex() - riemann));
  }
  pass = pass && worst <= 1e-12;
  return detail::result(6, "exact integral identity", pass,
                        {{"exact_zero_cases", zeros}, {"riemann_cases", 50}, {"max_abs_error", worst}});
}

/// Exact translation numbers against exhaustive search, plus monotonicity.
inline json packing_oracle(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 7);
  bool pass = true;
  int mismatches = 0, monotonicity_failures = 0, unsound = 0;
  json cases = json::array();
  struct Shape {
    Int p, span;
  };
  const Shape shapes[] = {{2, 3}, {3, 2}, {11, 1}, {2, 2}, {5, 1}};
  for (int i = 0; i < 25; ++i) {
    const Shape sh = shapes[i % 5];
    const Int m = detail::draw(rng, 0, 1);
    CompactOpenSet s = detail::random_set(rng, sh.p, m + sh.span, 3);
    CompactOpenSet larger = unite(s, detail::random_set(rng, sh.p, m + sh.span, 3));
    TranslationCertificate cert = translation_number(s, m, PackingMode::exact);
    const Int vertices = padic_riesz::detail::ipow(sh.p, cert.resolution - m);
    const Int brute = oracle::max_translation_set(s, m);
    if (cert.count != brute || vertices > 12) ++mismatches;
    if (!verify_translation_set(s, m, cert.translations)) ++unsound;
    const Int n_larger = translation_number(larger, m, PackingMode::exact).count;
    const Int n_finer = translation_number(s, m + 1, PackingMode::exact).count;
    if (n_larger > cert.count || n_finer > cert.count) ++monotonicity_failures;
    cases.push_back({{"p", sh.p}, {"m", m}, {"vertices", vertices}, {"N", cert.count}, {"brute_force", brute},
                     {"N_superset", n_larger}, {"N_subgroup", n_finer}});
  }
  pass = mismatches == 0 && monotonicity_failures == 0 && unsound == 0;
  return detail::result(7, "packing oracle", pass,
                        {{"mismatches", mismatches}, {"monotonicity_failures", monotonicity_failures},
                         {"unsound", unsound}, {"cases", cases}});
}

/// Growth of translation numbers on the m_n = n^2 family and certificates.
inline json counterexample_growth() {
  bool pass = true;
  const std::vector<Int> squares{1, 4, 9, 16, 25, 36};
  CounterexampleSpec spec = build_counterexample(2, squares, 6);
  json bounds = json::array();
  for (Int n = 1; n <= 5; ++n) {
    TranslationCertificate cert = tail_certificate(spec, n);
    const Int expected = Int{1} << (squares[static_cast<std::size_t>(n)] - squares[static_cast<std::size_t>(n - 1)] - 1);
    pass = pass && cert.count == expected;
    bounds.push_back({{"n", n}, {"N", cert.count}, {"expected", expected}, {"method", to_string(cert.method)}});
  }
  // Exact confirmation on the two-ball truncation of the tails.
  json exact = json::array();
  for (Int n = 1; n <= 2; ++n) {
    CounterexampleSpec truncated = build_counterexample(2, squares, n + 2);
    CompactOpenSet tail = truncated.tail(n);
    const Int m = squares[static_cast<std::size_t>(n - 1)];
    TranslationCertificate cert = translation_number(tail, m, PackingMode::exact);
    const Int coset = tail_certificate(spec, n).count;
    const bool ok = !cert.budget_exceeded && cert.method == PackingMode::exact && cert.count == coset &&
                    verify_translation_set(tail, m, cert.translations);
    pass = pass && ok;
    exact.push_back({{"n", n}, {"resolution", cert.resolution}, {"N_exact", cert.count}, {"ok", ok}});
  }
  NonexistenceResult k15 = certify_nonexistence(spec, 1.5);
  NonexistenceResult k3 = certify_nonexistence(spec, 3.0);
  const bool certified = k15.conclusive && k15.certificate->witness_n == 1 && k15.certificate->count == 4 &&
                         k3.conclusive && *k3.certificate->witness_n <= 3;
  pass = pass && certified;
  json certs = json::array();
  for (const auto* r : {&k15, &k3})
    certs.push_back({{"K", r->K},
                     {"conclusive", r->conclusive},
                     {"n", r->certificate ? json(*r->certificate->witness_n) : json(nullptr)},
                     {"N", r->certificate ? json(r->certificate->count) : json(nullptr)}});
  return detail::result(8, "counterexample growth and certificates", pass,
                        {{"coset_bounds", bounds}, {"exact", exact}, {"certificates", certs}});
}

/// Runs the checks in order; `each` sees every result as it completes.
inline json run_selftest(std::uint64_t seed = kDefaultSeed, const std::function<void(const json&)>& each = {}) {
  json criteria = json::array();
  bool pass = true;
  const std::function<json()> checks[] = {
      [] { return orthonormality(); },
      [&] { return block_structure(seed); },
      [&] { return completeness(seed); },
      [&] { return riesz_sampling(seed); },
      [&] { return affine_stability(seed); },
      [&] { return integral_identity(seed); },
      [&] { return packing_oracle(seed); },
      [] { return counterexample_growth(); },
  };
  for (const auto& check : checks) {
    json r = check();
    pass = pass && r["pass"].get<bool>();
    if (each) each(r);
    criteria.push_back(std::move(r));
  }
  return {{"v", 1}, {"seed", seed}, {"criteria", criteria}, {"pass", pass}};
}

}  // namespace padic_riesz::acceptance
