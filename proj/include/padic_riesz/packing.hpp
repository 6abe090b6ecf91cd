#pragma once

// Difference sets, B-translation numbers and non-existence certificates.
//
// For S inside Z_p and B = p^m Z_p, translates S + t and S + t' are disjoint
// (up to measure zero) iff t - t' is outside Delta(S). If every ball of S has
// scale <= L, S + p^L Z_p = S, so only residues of B modulo p^L matter and
// distinct residues are required. N_B(S) is then the clique number of the
// Cayley graph on those p^(L-m) residues with connection set outside Delta(S).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coset.hpp"
#include "padic.hpp"

namespace padic_riesz {

/// Delta(S) = { delta : mu(S cap (S + delta)) > 0 }
///          = union over ball pairs of c_j - c_i + p^min(m_i, m_j) Z_p.
inline CompactOpenSet difference_set(const CompactOpenSet& s) {
  if (s.empty()) throw usage_error("difference_set: empty set");
  std::vector<Ball> out;
  out.reserve(s.size() * s.size());
  for (const auto& a : s.balls())
    for (const auto& b : s.balls()) out.emplace_back(b.center() - a.center(), std::min(a.scale(), b.scale()));
  return normalize(s.p(), std::move(out));
}

enum class PackingMode { exact, greedy, coset };

inline std::string to_string(PackingMode m) {
  switch (m) {
    case PackingMode::exact: return "exact";
    case PackingMode::greedy: return "greedy";
    case PackingMode::coset: return "coset-bound";
  }
  return "?";
}

inline PackingMode parse_packing_mode(std::string_view s) {
  if (s == "exact") return PackingMode::exact;
  if (s == "greedy") return PackingMode::greedy;
  if (s == "coset" || s == "coset-bound") return PackingMode::coset;
  throw usage_error("unknown mode '" + std::string(s) + "'");
}

struct TranslationCertificate {
  Int p = 2;
  Int subgroup_exp = 0;  // B = p^m Z_p
  Int resolution = 0;    // L
  std::vector<PRational> translations;  // T, contains 0
  Int count = 0;                        // N = |T|
  PackingMode method = PackingMode::exact;
  bool budget_exceeded = false;
  std::optional<Int> witness_n;      // index n of the tail, for certificates from certify_nonexistence
  std::optional<double> K_refuted;
};

/// True if 0 is in T, T is inside p^m Z_p and the translates S + t are
/// pairwise disjoint, checked by exact ball membership in Delta(S).
inline bool verify_translation_set(const CompactOpenSet& s, Int subgroup_exp, std::span<const PRational> T) {
  if (T.empty() || !T.front().is_zero()) return false;
  CompactOpenSet delta = difference_set(s);
  for (const auto& t : T)
    if (t.valuation() < subgroup_exp) return false;
  for (std::size_t i = 0; i < T.size(); ++i)
    for (std::size_t j = i + 1; j < T.size(); ++j)
      if (member(delta, T[j] - T[i])) return false;
  return true;
}

/// Vertex budget for the exact clique search.
inline constexpr std::size_t kExactVertexBudget = 4096;
/// Largest translation set the coset bound will list.
inline constexpr Int kMaxListedTranslations = Int{1} << 20;

namespace detail {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  /// Clears every bit set in o.
  void subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  /// Index of the lowest set bit at or after `from`, or npos.
  std::size_t next(std::size_t from) const {
    for (std::size_t w = from / 64; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      if (w == from / 64) word &= ~std::uint64_t{0} << (from % 64);
      if (word != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(word));
    }
    return npos;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::uint64_t> words_;
};

// Branch and bound over candidate sets in increasing vertex order with a
// greedy colouring bound. Branches are pruned only when they cannot beat the
// incumbent strictly, so the first maximum clique found is the
// lexicographically smallest one.
class CliqueSearch {
 public:
  explicit CliqueSearch(std::vector<Bitset> adjacency) : adj_(std::move(adjacency)) {}

  std::vector<std::size_t> run_with_root(std::size_t root) {
    // Seed: first-fit clique, which is the first leaf of the search.
    std::vector<std::size_t> seed{root};
    Bitset cand = adj_[root];
    for (std::size_t v = cand.next(0); v != Bitset::npos; v = cand.next(v + 1)) {
      seed.push_back(v);
      cand = cand & adj_[v];
    }
    best_ = seed;
    std::vector<std::size_t> current{root};
    expand(current, adj_[root]);
    return best_;
  }

 private:
  std::vector<Bitset> adj_;
  std::vector<std::size_t> best_;

  std::size_t colour_bound(const Bitset& cand) const {
    Bitset uncoloured = cand;
    std::size_t colours = 0;
    while (!uncoloured.none()) {
      ++colours;
      Bitset available = uncoloured;
      for (std::size_t v = available.next(0); v != Bitset::npos; v = available.next(v + 1)) {
        uncoloured.reset(v);
        // Vertices adjacent to v cannot share its colour.
        available.subtract(adj_[v]);
      }
    }
    return colours;
  }

  void expand(std::vector<std::size_t>& current, const Bitset& cand) {
    if (cand.none()) {
      if (current.size() > best_.size()) best_ = current;
      return;
    }
    if (current.size() + colour_bound(cand) <= best_.size()) return;
    Bitset remaining = cand;
    for (std::size_t v = remaining.next(0); v != Bitset::npos; v = remaining.next(v + 1)) {
      if (current.size() + remaining.count() <= best_.size()) return;
      current.push_back(v);
      expand(current, remaining & adj_[v]);
      current.pop_back();
      remaining.reset(v);
    }
  }
};

}  // namespace detail

/// N_B(S) for B = p^m Z_p, S inside Z_p. Exact mode falls back to the greedy
/// certificate (flagged) when the residue graph exceeds the vertex budget.
inline TranslationCertificate translation_number(const CompactOpenSet& s, Int subgroup_exp, PackingMode mode,
                                                 std::size_t budget = kExactVertexBudget) {
  if (s.empty()) throw usage_error("translation_number: empty set");
  if (!s.in_Zp()) throw domain_error("translation_number: set must lie in Z_p");
  if (subgroup_exp < 0) throw usage_error("translation_number: negative subgroup exponent");
  const Int p = s.p();
  TranslationCertificate cert;
  cert.p = p;
  cert.subgroup_exp = subgroup_exp;
  cert.resolution = std::max(subgroup_exp, s.max_scale());
  cert.method = mode;

  if (mode == PackingMode::coset) {
    // S + p^m j for j < p^(r - m) lie in distinct cosets of p^r Z_p, where
    // p^r Z_p + c0 is the smallest ball containing S.
    const Int r = enclosing_ball(s).scale();
    const Int n = r > subgroup_exp ? detail::ipow(p, r - subgroup_exp) : 1;
    if (n > kMaxListedTranslations) throw budget_error("translation_number: coset bound too large to list");
    for (Int j = 0; j < n; ++j) cert.translations.push_back(PRational(p, j, subgroup_exp));
    cert.count = n;
    return cert;
  }

  const Int vertex_count_i = detail::ipow(p, cert.resolution - subgroup_exp);
  const auto n = static_cast<std::size_t>(vertex_count_i);
  const CompactOpenSet delta = difference_set(s);
  // compatible[k]: translates differing by p^m k are disjoint.
  std::vector<char> compatible(n);
  for (std::size_t k = 0; k < n; ++k)
    compatible[k] = member(delta, PRational(p, static_cast<Int>(k), subgroup_exp)) ? 0 : 1;

  auto chosen_to_cert = [&](const std::vector<std::size_t>& clique) {
    for (auto v : clique) cert.translations.push_back(PRational(p, static_cast<Int>(v), subgroup_exp));
    cert.count = static_cast<Int>(clique.size());
  };

  if (mode == PackingMode::greedy || n > budget) {
    cert.method = PackingMode::greedy;
    cert.budget_exceeded = mode == PackingMode::exact;
    std::vector<std::size_t> clique{0};
    for (std::size_t v = 1; v < n; ++v) {
      bool ok = std::all_of(clique.begin(), clique.end(), [&](std::size_t u) {
        return compatible[(v - u) % n] && compatible[(u + n - v) % n];
      });
      if (ok) clique.push_back(v);
    }
    chosen_to_cert(clique);
    return cert;
  }

  std::vector<detail::Bitset> adjacency(n, detail::Bitset(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && compatible[(i + n - j) % n] && compatible[(j + n - i) % n]) adjacency[i].set(j);
  // Vertex transitive, so a maximum clique through 0 is a maximum clique.
  detail::CliqueSearch search(std::move(adjacency));
  chosen_to_cert(search.run_with_root(0));
  return cert;
}

/// The set union over n <= n_max of p^(m_n - 1) + p^(m_n) Z_p.
struct CounterexampleSpec {
  Int p = 2;
  std::vector<Int> exponents;  // m_1 < m_2 < ..., at least n_max of them
  Int n_max = 0;

  Ball ball(Int n) const {
    const Int m = exponents.at(static_cast<std::size_t>(n - 1));
    return {PRational(p, 1, m - 1), m};
  }

  CompactOpenSet set() const { return tail(0); }

  /// Omega_n: balls n+1 .. n_max.
  CompactOpenSet tail(Int n) const {
    std::vector<Ball> balls;
    for (Int k = n + 1; k <= n_max; ++k) balls.push_back(ball(k));
    return CompactOpenSet::from_disjoint(p, std::move(balls));
  }

  PRational measure() const { return padic_riesz::measure(set()); }
};

inline CounterexampleSpec build_counterexample(Int p, std::vector<Int> exponents, Int n_max) {
  require_prime(p);
  if (n_max < 1) throw usage_error("build_counterexample: n_max must be at least 1");
  if (static_cast<Int>(exponents.size()) < n_max)
    throw usage_error("build_counterexample: need at least n_max exponents");
  if (exponents.front() < 1) throw usage_error("build_counterexample: exponents must be positive");
  for (std::size_t i = 1; i < exponents.size(); ++i)
    if (exponents[i] <= exponents[i - 1])
      throw usage_error("build_counterexample: exponents must be strictly increasing");
  CounterexampleSpec spec{p, std::move(exponents), n_max};
  (void)spec.set();  // validates disjointness
  return spec;
}

/// Coset-bound certificate for the full tail Omega_n inside p^(m_{n+1} - 1) Z_p
/// with B = p^(m_n) Z_p: N >= p^(m_{n+1} - m_n - 1). Needs n < n_max.
inline TranslationCertificate tail_certificate(const CounterexampleSpec& spec, Int n) {
  if (n < 1 || n >= spec.n_max) throw usage_error("tail_certificate: need 1 <= n < n_max");
  const Int m = spec.exponents[static_cast<std::size_t>(n - 1)];
  const Int container = spec.exponents[static_cast<std::size_t>(n)] - 1;
  TranslationCertificate cert;
  cert.p = spec.p;
  cert.subgroup_exp = m;
  cert.resolution = container;
  cert.method = PackingMode::coset;
  cert.witness_n = n;
  const Int count = container > m ? detail::ipow(spec.p, container - m) : 1;
  if (count > kMaxListedTranslations) throw budget_error("tail_certificate: translation set too large to list");
  for (Int j = 0; j < count; ++j) cert.translations.push_back(PRational(spec.p, j, m));
  cert.count = count;
  if (!verify_translation_set(spec.tail(n), m, cert.translations))
    throw internal_error("tail_certificate: translation set failed verification");
  return cert;
}

struct NonexistenceResult {
  bool conclusive = false;
  double K = 1;
  double threshold = 1;  // K^3
  Int searched_up_to = 0;
  std::optional<TranslationCertificate> certificate;
};

/// Looks for a tail with N_{p^(m_n) Z_p}(Omega_n) > K^3.
///
/// A Riesz basis with constant K gives sum |c_lambda|^2 <= K for the
/// expansion of the indicator of the n-th ball, while the disjoint translates
/// force the same sum to be at least N / K^2; N > K^3 is a contradiction.
inline NonexistenceResult certify_nonexistence(const CounterexampleSpec& spec, double K) {
  if (!(K >= 1.0)) throw usage_error("certify_nonexistence: K must be at least 1");
  NonexistenceResult result;
  result.K = K;
  result.threshold = K * K * K;
  for (Int n = 1; n < spec.n_max; ++n) {
    result.searched_up_to = n;
    const Int gap = spec.exponents[static_cast<std::size_t>(n)] - spec.exponents[static_cast<std::size_t>(n - 1)] - 1;
    if (std::pow(static_cast<double>(spec.p), static_cast<double>(gap)) <= result.threshold) continue;
    TranslationCertificate cert = tail_certificate(spec, n);
    if (static_cast<double>(cert.count) > result.threshold) {
      cert.K_refuted = K;
      result.certificate = std::move(cert);
      result.conclusive = true;
      return result;
    }
  }
  return result;
}

}  // namespace padic_riesz
