#pragma once

// Inner products of characters over Omega, truncated Gram matrices and
// Riesz / frame bound extraction.
//
// For Omega inside Z_p with decomposition (gamma, C),
//   <chi_l, chi_l'> = integral over Omega of chi_{l - l'}
//                   = p^-gamma * sum_{c in C} chi_{l - l'}(c)   if |l - l'|_p <= p^gamma,
//                   = 0                                         otherwise.
// On Lambda_M the Gram matrix is therefore block diagonal over L_gamma with
// p^M identical |D| x |D| blocks, so the bounds are read off one block.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "coset.hpp"
#include "padic.hpp"
#include "spectrum.hpp"

namespace padic_riesz {

using cdouble = std::complex<double>;

/// Eigenvalues of a Hermitian matrix in ascending order.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw internal_error("hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

/// <chi_l, chi_l'> over Omega as an exact sum p^-scale * sum(terms).
struct ExactInnerProduct {
  bool structural_zero = true;
  Frequency integrand;  // {l - l'}
  std::vector<UnitRootPhase> terms;
  Int scale = 0;

  cdouble value() const {
    if (structural_zero) return {0.0, 0.0};
    cdouble sum{0.0, 0.0};
    for (const auto& t : terms) sum += t.to_complex();
    return sum * std::pow(static_cast<double>(integrand.p()), static_cast<double>(-scale));
  }
};

inline ExactInnerProduct inner_product(const Frequency& l, const Frequency& l2, const CanonicalDecomposition& dec) {
  require_same_prime(l.p(), dec.p);
  require_same_prime(l2.p(), dec.p);
  ExactInnerProduct r;
  r.integrand = l - l2;
  r.scale = dec.gamma;
  if (r.integrand.exponent() > dec.gamma) return r;
  r.structural_zero = false;
  r.terms.reserve(dec.residues.size());
  for (Int c : dec.residues) r.terms.push_back(char_eval(r.integrand, PRational(dec.p, c)));
  return r;
}

/// <chi_l, chi_l'> over an arbitrary compact open set, ball by ball.
inline cdouble inner_product(const PRational& l, const PRational& l2, const CompactOpenSet& omega) {
  cdouble sum{0.0, 0.0};
  const PRational diff = l - l2;
  for (const auto& b : omega.balls()) sum += ball_integral_char(diff, b.center(), b.scale()).to_complex();
  return sum;
}

/// Gram matrix G[i][j] = <chi_{lambda_i}, chi_{lambda_j}> with the exact
/// integrand frequency of every entry kept alongside the complex value.
struct GramMatrix {
  Int p = 2;
  std::vector<Frequency> integrand;  // row-major, {lambda_i - lambda_j}
  std::vector<char> structural_zero;  // row-major
  Eigen::MatrixXcd values;

  std::size_t dimension() const { return static_cast<std::size_t>(values.rows()); }
};

inline GramMatrix gram_matrix(std::span<const Frequency> lambdas, const CanonicalDecomposition& dec) {
  const std::size_t n = lambdas.size();
  GramMatrix g{dec.p, {}, {}, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  g.integrand.reserve(n * n);
  g.structural_zero.reserve(n * n);
  // Entries depend only on the integrand frequency; evaluate each once.
  std::map<Frequency, cdouble> cache;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Frequency mu = lambdas[i] - lambdas[j];
      const bool zero = mu.exponent() > dec.gamma;
      g.integrand.push_back(mu);
      g.structural_zero.push_back(zero ? 1 : 0);
      if (zero) continue;
      auto it = cache.find(mu);
      if (it == cache.end()) {
        // Keep the matrix exactly Hermitian: the value at -mu is the conjugate.
        auto mirror = cache.find(Frequency(dec.p) - mu);
        cdouble v = mirror != cache.end() ? std::conj(mirror->second) : inner_product(lambdas[i], lambdas[j], dec).value();
        it = cache.emplace(mu, v).first;
      }
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = it->second;
    }
  }
  return g;
}

/// Gram matrix over any compact open set for arbitrary frequencies in Q_p.
inline Eigen::MatrixXcd gram_matrix(std::span<const PRational> lambdas, const CompactOpenSet& omega) {
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = inner_product(lambdas[static_cast<std::size_t>(i)], lambdas[static_cast<std::size_t>(j)], omega);
  return g;
}

/// p^-gamma * conj(M^H M): the |D| x |D| diagonal block, M the character matrix.
inline Eigen::MatrixXcd gram_block(const SpectrumSpec& spec) {
  Eigen::MatrixXcd m = character_matrix(spec.p, spec.gamma, spec.C, spec.D).to_complex();
  Eigen::MatrixXcd block = (m.adjoint() * m).conjugate();
  return block * std::pow(static_cast<double>(spec.p), static_cast<double>(-spec.gamma));
}

/// Checks that g is block diagonal with `blocks` identical diagonal blocks of
/// size `block_size`: off-block entries are structural zeros and diagonal
/// blocks agree in integrand frequency and bit for bit in value.
inline bool has_identical_block_structure(const GramMatrix& g, std::size_t block_size, std::size_t blocks) {
  const std::size_t n = g.dimension();
  if (n != block_size * blocks) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bi = i / block_size, bj = j / block_size;
      const std::size_t k = i * n + j;
      if (bi != bj) {
        if (!g.structural_zero[k]) return false;
        continue;
      }
      const std::size_t r = i % block_size, c = j % block_size;
      const std::size_t k0 = r * n + c;
      if (g.integrand[k] != g.integrand[k0] || g.structural_zero[k] != g.structural_zero[k0]) return false;
      const cdouble a = g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const cdouble b = g.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (a.real() != b.real() || a.imag() != b.imag()) return false;
    }
  }
  return true;
}

/// Full-matrix verification is skipped above this dimension.
inline constexpr std::size_t kFullCheckLimit = 1024;

struct RieszReport {
  double A = 0;                // lower Riesz / frame bound
  double B = 0;                // upper bound
  double K = 0;                // max(B, 1/A)
  Int depth = 0;
  std::size_t dimension = 0;   // |D| p^M
  std::size_t rank = 0;
  bool rank_ok = false;        // rank == |C| p^M
  double block_condition = 0;  // B / A
  bool full_checked = false;   // full Gram assembled and eigensolved
  bool consistent = false;     // block and full results agree within 1e-9
  bool ok = false;             // block nonsingular
};

/// Riesz bounds of E(Lambda_M) on L^2(Omega) for the normalised set.
inline RieszReport riesz_bounds(const SpectrumSpec& spec, std::size_t full_check_limit = kFullCheckLimit) {
  RieszReport r;
  r.depth = spec.depth;
  r.dimension = spec.size();
  Eigen::VectorXd block_eigs = hermitian_eigenvalues(gram_block(spec));
  r.A = block_eigs.minCoeff();
  r.B = block_eigs.maxCoeff();
  r.ok = r.A > 1e-9 * r.B;
  r.K = std::max(r.B, 1.0 / r.A);
  r.block_condition = r.B / r.A;
  const double threshold = 1e-9 * r.B;
  const auto block_rank = static_cast<std::size_t>((block_eigs.array() > threshold).count());
  const std::size_t copies = static_cast<std::size_t>(detail::ipow(spec.p, spec.depth));

  if (r.dimension <= full_check_limit) {
    auto lambdas = spec.lambdas();
    GramMatrix g = gram_matrix(lambdas, spec.decomposition());
    if (!has_identical_block_structure(g, spec.D.size(), copies))
      throw internal_error("riesz_bounds: Gram matrix lost its block structure");
    Eigen::VectorXd eigs = hermitian_eigenvalues(g.values);
    r.full_checked = true;
    r.rank = static_cast<std::size_t>((eigs.array() > threshold).count());
    const double scale = std::max(1.0, r.B);
    r.consistent = std::abs(eigs.minCoeff() - r.A) <= 1e-9 * scale && std::abs(eigs.maxCoeff() - r.B) <= 1e-9 * scale;
  } else {
    r.rank = block_rank * copies;
    r.consistent = true;
  }
  r.rank_ok = r.rank == spec.C.size() * copies;
  return r;
}

/// Extreme eigenvalues of a Gram matrix.
struct Bounds {
  double A = 0;
  double B = 0;
};

inline Bounds eigen_range(const Eigen::MatrixXcd& g) {
  Eigen::VectorXd e = hermitian_eigenvalues(g);
  return {e.minCoeff(), e.maxCoeff()};
}

/// ||sum a_lambda chi_lambda||^2 = a^T G conj(a).
inline double synthesis_norm_squared(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& a) {
  return (a.transpose() * gram * a.conjugate()).value().real();
}

/// A function on Omega constant on the cosets of p^resolution Z_p.
struct StepFunction {
  Int p = 2;
  Int resolution = 0;
  std::vector<Int> residues;  // representatives mod p^resolution inside Omega, sorted
  std::vector<cdouble> values;

  /// ||f||^2 = p^-resolution * sum |f(r)|^2.
  double norm_squared() const {
    double s = 0;
    for (const auto& v : values) s += std::norm(v);
    return s * std::pow(static_cast<double>(p), static_cast<double>(-resolution));
  }
};

/// Residues modulo p^resolution of the cosets making up Omega (resolution >= gamma).
inline std::vector<Int> residues_at(const CanonicalDecomposition& dec, Int resolution) {
  if (resolution < dec.gamma) throw usage_error("residues_at: resolution below gamma");
  const Int step = detail::ipow(dec.p, dec.gamma);
  const Int copies = detail::ipow(dec.p, resolution - dec.gamma);
  std::vector<Int> out;
  out.reserve(dec.residues.size() * static_cast<std::size_t>(copies));
  for (Int c : dec.residues)
    for (Int j = 0; j < copies; ++j) out.push_back(c + j * step);
  std::sort(out.begin(), out.end());
  return out;
}

inline StepFunction zero_step_function(const CanonicalDecomposition& dec, Int depth) {
  StepFunction f{dec.p, dec.gamma + depth, residues_at(dec, dec.gamma + depth), {}};
  f.values.assign(f.residues.size(), cdouble{0.0, 0.0});
  return f;
}

/// <f, chi_lambda> for each lambda; every lambda must be constant on the cosets of f.
inline std::vector<cdouble> analysis_coefficients(const StepFunction& f, std::span<const Frequency> lambdas) {
  const double cell = std::pow(static_cast<double>(f.p), static_cast<double>(-f.resolution));
  std::vector<cdouble> out;
  out.reserve(lambdas.size());
  for (const auto& l : lambdas) {
    if (l.exponent() > f.resolution) throw usage_error("analysis: frequency finer than the step function resolution");
    cdouble s{0.0, 0.0};
    for (std::size_t i = 0; i < f.residues.size(); ++i)
      s += f.values[i] * std::conj(char_eval(l, PRational(f.p, f.residues[i])).to_complex());
    out.push_back(s * cell);
  }
  return out;
}

struct FrameSandwich {
  double lhs = 0;  // A ||f||^2
  double mid = 0;  // sum |<f, chi_lambda>|^2
  double rhs = 0;  // B ||f||^2
  bool holds = false;
};

/// Evaluates A||f||^2 <= sum |<f, chi_lambda>|^2 <= B||f||^2 on Lambda_M.
inline FrameSandwich frame_sandwich_test(const StepFunction& f, const SpectrumSpec& spec, const RieszReport& report) {
  require_same_prime(f.p, spec.p);
  if (f.resolution != spec.gamma + spec.depth || f.residues != residues_at(spec.decomposition(), f.resolution))
    throw usage_error("frame_sandwich_test: step function resolution does not match the spectrum depth");
  auto lambdas = spec.lambdas();
  FrameSandwich s;
  for (const auto& c : analysis_coefficients(f, lambdas)) s.mid += std::norm(c);
  const double norm2 = f.norm_squared();
  s.lhs = report.A * norm2;
  s.rhs = report.B * norm2;
  const double slack = 1e-9 * std::max(s.rhs, 1e-300);
  s.holds = s.lhs <= s.mid + slack && s.mid <= s.rhs + slack;
  return s;
}

}  // namespace padic_riesz
