#pragma once

// Riesz-basis frequency sets Lambda = D + L_gamma for compact open sets.
//
// For Omega = union of c + p^gamma Z_p (c in C) inside Z_p, a set D of
// residues d (read as frequencies d / p^gamma) with an invertible character
// matrix (exp(2 pi i c d / p^gamma))_{c,d} combined with the orthogonal
// system L_gamma of p^gamma Z_p gives a Riesz basis of L^2(Omega).

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "coset.hpp"
#include "padic.hpp"

namespace padic_riesz {

enum class SelectionStrategy { greedy, exhaustive };

inline std::string to_string(SelectionStrategy s) { return s == SelectionStrategy::greedy ? "greedy" : "exhaustive"; }

inline SelectionStrategy parse_strategy(std::string_view s) {
  if (s == "greedy") return SelectionStrategy::greedy;
  if (s == "exhaustive") return SelectionStrategy::exhaustive;
  throw usage_error("unknown strategy '" + std::string(s) + "'");
}

/// Entries chi_d(c) = exp(2 pi i c d / p^gamma), rows c in C, columns d in D.
struct CharacterMatrix {
  Int p = 2;
  Int gamma = 0;
  std::vector<Int> rows;
  std::vector<Int> cols;
  std::vector<UnitRootPhase> phases;  // row-major

  const UnitRootPhase& at(std::size_t r, std::size_t c) const { return phases[r * cols.size() + c]; }

  Eigen::MatrixXcd to_complex() const {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = at(r, c).to_complex();
    return m;
  }
};

inline CharacterMatrix character_matrix(Int p, Int gamma, std::span<const Int> C, std::span<const Int> D) {
  CharacterMatrix m{p, gamma, {C.begin(), C.end()}, {D.begin(), D.end()}, {}};
  m.phases.reserve(C.size() * D.size());
  const Int modulus = detail::ipow(p, gamma);
  for (Int c : C)
    for (Int d : D) m.phases.emplace_back(p, detail::mulmod(c, d, modulus), gamma);
  return m;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
}

inline double smallest_singular_value(const Eigen::MatrixXcd& a) {
  auto s = singular_values(a);
  return s.size() == 0 ? 0.0 : s.minCoeff();
}

/// Invertibility threshold on the smallest singular value.
inline double singularity_threshold(std::size_t n) { return 1e-9 * static_cast<double>(n); }

/// Subset budget for the exhaustive strategy.
inline constexpr double kExhaustiveBudget = 65536;

namespace detail {

inline double binomial(Int n, Int k) {
  double r = 1;
  for (Int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline Eigen::MatrixXcd columns_of(Int p, Int gamma, std::span<const Int> C, std::span<const Int> D) {
  return character_matrix(p, gamma, C, D).to_complex();
}

inline std::vector<Int> select_greedy(std::span<const Int> C, Int p, Int gamma) {
  const Int modulus = ipow(p, gamma);
  const auto n = C.size();
  if (static_cast<Int>(n) == modulus) {
    std::vector<Int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Int>(i);
    return all;
  }
  std::vector<Int> all(static_cast<std::size_t>(modulus));
  for (Int d = 0; d < modulus; ++d) all[static_cast<std::size_t>(d)] = d;
  Eigen::MatrixXcd candidates = columns_of(p, gamma, C, all);

  std::vector<Int> chosen;
  std::vector<bool> used(static_cast<std::size_t>(modulus), false);
  Eigen::MatrixXcd current(static_cast<Eigen::Index>(n), 0);
  double ceiling = std::numeric_limits<double>::infinity();
  while (chosen.size() < n) {
    Int best = -1;
    double best_sigma = -1;
    Eigen::MatrixXcd trial(static_cast<Eigen::Index>(n), current.cols() + 1);
    trial.leftCols(current.cols()) = current;
    for (Int d = 0; d < modulus; ++d) {
      if (used[static_cast<std::size_t>(d)]) continue;
      trial.col(current.cols()) = candidates.col(d);
      double sigma = smallest_singular_value(trial);
      if (sigma > best_sigma * (1 + 1e-12)) {
        best = d;
        best_sigma = sigma;
      }
      // Appending a column never raises the smallest singular value.
      if (sigma >= ceiling * (1 - 1e-12)) break;
    }
    if (best < 0) throw internal_error("select_D: candidates exhausted");
    used[static_cast<std::size_t>(best)] = true;
    chosen.push_back(best);
    current.conservativeResize(Eigen::NoChange, current.cols() + 1);
    current.col(current.cols() - 1) = candidates.col(best);
    ceiling = best_sigma;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

inline std::vector<Int> select_exhaustive(std::span<const Int> C, Int p, Int gamma) {
  const Int modulus = ipow(p, gamma);
  const auto n = static_cast<Int>(C.size());
  if (binomial(modulus, n) > kExhaustiveBudget)
    throw budget_error("select_D: exhaustive search over " + std::to_string(binomial(modulus, n)) +
                       " subsets exceeds the budget");
  std::vector<Int> all(static_cast<std::size_t>(modulus));
  for (Int d = 0; d < modulus; ++d) all[static_cast<std::size_t>(d)] = d;
  Eigen::MatrixXcd candidates = columns_of(p, gamma, C, all);

  std::vector<Int> subset(static_cast<std::size_t>(n));
  for (Int i = 0; i < n; ++i) subset[static_cast<std::size_t>(i)] = i;
  std::vector<Int> best;
  double best_condition = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd trial(n, n);
  while (true) {
    for (Int i = 0; i < n; ++i) trial.col(i) = candidates.col(subset[static_cast<std::size_t>(i)]);
    auto s = singular_values(trial);
    double smin = s.minCoeff();
    if (smin > singularity_threshold(C.size())) {
      double condition = s.maxCoeff() / smin;
      if (condition < best_condition * (1 - 1e-12)) {
        best_condition = condition;
        best = subset;
      }
    }
    // Next subset in lexicographic order.
    Int i = n - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == modulus - n + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (Int j = i + 1; j < n; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (best.empty()) throw internal_error("select_D: no invertible subset found");
  return best;
}

}  // namespace detail

/// Chooses |C| residues D in [0, p^gamma) whose character matrix on C is
/// invertible. Greedy adds, at each step, the lowest residue maximising the
/// smallest singular value of the selected columns; exhaustive minimises the
/// condition number over all subsets (ties go to the lexicographically
/// smallest subset). The result is sorted and independent of the order of C.
inline std::vector<Int> select_D(std::span<const Int> C, Int p, Int gamma,
                                 SelectionStrategy strategy = SelectionStrategy::greedy) {
  require_prime(p);
  if (C.empty()) throw usage_error("select_D: empty residue set");
  const Int modulus = detail::ipow(p, gamma);
  std::vector<Int> sorted(C.begin(), C.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw usage_error("select_D: repeated residue");
  if (sorted.front() < 0 || sorted.back() >= modulus) throw usage_error("select_D: residue outside [0, p^gamma)");

  std::vector<Int> D = strategy == SelectionStrategy::greedy ? detail::select_greedy(sorted, p, gamma)
                                                             : detail::select_exhaustive(sorted, p, gamma);
  double smin = smallest_singular_value(detail::columns_of(p, gamma, sorted, D));
  if (!(smin > singularity_threshold(sorted.size())))
    throw internal_error("select_D: selected character matrix is singular");
  return D;
}

/// L_gamma truncated to denominators p^(gamma+m), m <= depth:
/// 0 followed by k / p^(gamma+m), 1 <= k < p^m, p not dividing k.
/// Exactly p^depth elements.
inline std::vector<Frequency> enumerate_L_gamma(Int p, Int gamma, Int depth) {
  require_prime(p);
  if (depth < 0) throw usage_error("enumerate_L_gamma: negative depth");
  if (gamma < 0) throw usage_error("enumerate_L_gamma: negative gamma");
  std::vector<Frequency> out;
  out.reserve(static_cast<std::size_t>(detail::ipow(p, depth)));
  out.emplace_back(p);
  for (Int m = 1; m <= depth; ++m) {
    const Int top = detail::ipow(p, m);
    for (Int k = 1; k < top; ++k)
      if (k % p != 0) out.emplace_back(p, k, gamma + m);
  }
  return out;
}

/// Lambda_M = { d / p^gamma + l : d in D, l in L_gamma truncated at depth M }
/// for the affine-normalised set, plus the map back to the original set.
struct SpectrumSpec {
  Int p = 2;
  Int gamma = 0;
  std::vector<Int> C;
  std::vector<Int> D;
  Int depth = 0;
  PRational shift;    // S' = p^dilation (S + shift)
  Int dilation = 0;

  std::size_t size() const { return D.size() * static_cast<std::size_t>(detail::ipow(p, depth)); }

  CanonicalDecomposition decomposition() const { return {p, gamma, C}; }

  /// Frequencies for the normalised set, grouped by l: index = l_index * |D| + d_index.
  std::vector<Frequency> lambdas() const {
    std::vector<Frequency> out;
    out.reserve(size());
    for (const auto& l : enumerate_L_gamma(p, gamma, depth))
      for (Int d : D) out.push_back(Frequency::of(PRational(p, d, -gamma) + l.value()));
    return out;
  }

  /// Spectrum of the original set: lambda -> p^dilation * lambda.
  std::vector<PRational> pulled_back() const {
    std::vector<PRational> out;
    out.reserve(size());
    for (const auto& l : lambdas()) out.push_back(l.value().scaled(dilation));
    return out;
  }
};

inline SpectrumSpec build_spectrum(const CompactOpenSet& s, Int depth,
                                   SelectionStrategy strategy = SelectionStrategy::greedy) {
  if (s.empty()) throw usage_error("build_spectrum: empty set");
  if (depth < 0) throw usage_error("build_spectrum: negative depth");
  AffineNormalization norm = affine_normalize(s);
  CanonicalDecomposition dec = canonical_decomposition(norm.set);
  std::vector<Int> D = select_D(dec.residues, dec.p, dec.gamma, strategy);
  return {dec.p, dec.gamma, std::move(dec.residues), std::move(D), depth, norm.shift, norm.dilation};
}

}  // namespace padic_riesz
