#pragma once

// Independent reference computations used by the test suites and `selftest`.
// None of these share the fast paths they are used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "coset.hpp"
#include "padic.hpp"

namespace padic_riesz::oracle {

/// Riemann sum of chi_lambda over center + p^m Z_p on the p^depth cosets of
/// p^(m + depth) Z_p, sampling each coset at its representative.
inline std::complex<double> riemann_sum(const PRational& lambda, const PRational& center, Int m, Int depth) {
  const Int p = lambda.p();
  const Int cells = detail::ipow(p, depth);
  std::complex<double> sum{0.0, 0.0};
  for (Int j = 0; j < cells; ++j) {
    PRational x = center + PRational(p, j, m);
    sum += char_eval(lambda, x).to_complex();
  }
  return sum * std::pow(static_cast<double>(p), static_cast<double>(-(m + depth)));
}

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi rotations
/// on the real symmetric embedding [[Re, -Im], [Im, Re]]; every eigenvalue of
/// the embedding appears twice, and one copy of each pair is returned.
inline std::vector<double> jacobi_eigenvalues(const Eigen::MatrixXcd& h, int max_sweeps = 100) {
  const Eigen::Index n = h.rows();
  const Eigen::Index N = 2 * n;
  std::vector<double> a(static_cast<std::size_t>(N * N));
  auto at = [&](Eigen::Index i, Eigen::Index j) -> double& { return a[static_cast<std::size_t>(i * N + j)]; };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      at(i, j) = h(i, j).real();
      at(i + n, j + n) = h(i, j).real();
      at(i, j + n) = -h(i, j).imag();
      at(i + n, j) = h(i, j).imag();
    }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0;
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = i + 1; j < N; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < N; ++p)
      for (Eigen::Index q = p + 1; q < N; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < N; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < N; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> diag(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) diag[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(diag.begin(), diag.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < diag.size(); i += 2) out.push_back(diag[i]);
  return out;
}

/// Largest translation set of S inside p^m Z_p by exhaustive search over all
/// subsets of the residues of p^m Z_p mod p^L that contain 0. Disjointness is
/// decided by intersecting the translated sets directly.
inline Int max_translation_set(const CompactOpenSet& s, Int subgroup_exp) {
  const Int p = s.p();
  const Int resolution = std::max(subgroup_exp, s.max_scale());
  const auto n = static_cast<std::size_t>(detail::ipow(p, resolution - subgroup_exp));
  if (n > 20) throw budget_error("oracle::max_translation_set: too many residues for exhaustive search");
  std::vector<CompactOpenSet> translates;
  for (std::size_t j = 0; j < n; ++j) translates.push_back(translate(s, PRational(p, static_cast<Int>(j), subgroup_exp)));
  std::vector<std::vector<char>> disjoint(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) disjoint[i][j] = i != j && intersect(translates[i], translates[j]).empty();

  Int best = 1;
  const std::size_t others = n - 1;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << others); ++mask) {
    std::vector<std::size_t> members{0};
    for (std::size_t b = 0; b < others; ++b)
      if (mask >> b & 1U) members.push_back(b + 1);
    if (static_cast<Int>(members.size()) <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < members.size() && ok; ++i)
      for (std::size_t j = i + 1; j < members.size() && ok; ++j) ok = disjoint[members[i]][members[j]];
    if (ok) best = static_cast<Int>(members.size());
  }
  return best;
}

/// Whether x lies in S, by scanning residues of S's decomposition level.
inline bool member_by_residues(const std::vector<Int>& residues, Int p, Int gamma, Int x) {
  const Int r = detail::floor_mod(x, detail::ipow(p, gamma));
  return std::binary_search(residues.begin(), residues.end(), r);
}

}  // namespace padic_riesz::oracle
