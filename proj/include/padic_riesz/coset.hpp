#pragma once

// Compact open subsets of Q_p as finite disjoint unions of balls
// c + p^m Z_p, their uniform-radius decomposition and affine images.

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "padic.hpp"

namespace padic_riesz {

/// Raised when a ball list that should be disjoint is not.
class overlap_error : public usage_error {
 public:
  using usage_error::usage_error;
};

namespace detail {

// Representative of c modulo p^m Z_p in [0, p^m).
inline PRational reduce_mod(const PRational& c, Int m) {
  if (c.valuation() >= m) return PRational::zero(c.p());
  const Int v = c.valuation();
  const Int modulus = ipow(c.p(), m - v);
  return {c.p(), floor_mod(c.unit(), modulus), v};
}

// Representative of num/den modulo p^m Z_p in [0, p^m); den may contain
// factors prime to p (they are inverted p-adically).
inline PRational reduce_mod(const Rational& r, Int p, Int m) {
  if (r.num == 0) return PRational::zero(p);
  Int num = r.num, den = r.den;
  const Int v = strip_p(num, p) - strip_p(den, p);
  if (v >= m) return PRational::zero(p);
  const Int modulus = ipow(p, m - v);
  return {p, mulmod(num, inverse_mod(den, modulus), modulus), v};
}

}  // namespace detail

/// The ball center + p^scale Z_p (radius p^-scale). The centre is kept as the
/// unique representative in [0, p^scale), so equal sets have equal fields.
class Ball {
 public:
  Ball(PRational center, Int scale) : center_(detail::reduce_mod(center, scale)), scale_(scale) {}
  Ball(const Rational& center, Int p, Int scale) : center_(detail::reduce_mod(center, p, scale)), scale_(scale) {}

  Int p() const { return center_.p(); }
  const PRational& center() const { return center_; }
  Int scale() const { return scale_; }

  bool contains(const PRational& x) const { return (x - center_).valuation() >= scale_; }
  bool contains(const Ball& b) const { return b.scale_ >= scale_ && contains(b.center_); }
  bool intersects(const Ball& b) const { return contains(b) || b.contains(*this); }

  /// Haar measure p^-scale.
  PRational measure() const { return {p(), 1, -scale_}; }
  Ball parent() const { return {center_, scale_ - 1}; }
  bool in_Zp() const { return scale_ >= 0 && center_.in_Zp(); }

  friend bool operator==(const Ball&, const Ball&) = default;

  /// Canonical order: by scale, then by centre residue.
  friend bool canonical_less(const Ball& a, const Ball& b) {
    if (a.scale_ != b.scale_) return a.scale_ < b.scale_;
    return compare_real(a.center_, b.center_) < 0;
  }

  std::string to_string() const {
    return center_.to_string() + " + " + std::to_string(p()) + "^" + std::to_string(scale_) + " Z_" +
           std::to_string(p());
  }

 private:
  PRational center_;
  Int scale_;
};

/// A finite disjoint union of balls, sorted canonically.
class CompactOpenSet {
 public:
  explicit CompactOpenSet(Int p) : p_(require_prime(p)) {}

  /// Wraps balls that are already pairwise disjoint; throws overlap_error otherwise.
  /// The list is sorted but not merged.
  static CompactOpenSet from_disjoint(Int p, std::vector<Ball> balls) {
    CompactOpenSet s(p);
    for (const auto& b : balls) require_same_prime(p, b.p());
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j)
        if (balls[i].intersects(balls[j]))
          throw overlap_error("balls " + balls[i].to_string() + " and " + balls[j].to_string() + " overlap");
    std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) { return canonical_less(a, b); });
    s.balls_ = std::move(balls);
    return s;
  }

  Int p() const { return p_; }
  const std::vector<Ball>& balls() const { return balls_; }
  bool empty() const { return balls_.empty(); }
  std::size_t size() const { return balls_.size(); }

  Int max_scale() const {
    Int m = std::numeric_limits<Int>::min();
    for (const auto& b : balls_) m = std::max(m, b.scale());
    return m;
  }
  Int min_scale() const {
    Int m = std::numeric_limits<Int>::max();
    for (const auto& b : balls_) m = std::min(m, b.scale());
    return m;
  }

  bool in_Zp() const {
    return std::all_of(balls_.begin(), balls_.end(), [](const Ball& b) { return b.in_Zp(); });
  }

  friend bool operator==(const CompactOpenSet&, const CompactOpenSet&) = default;

 private:
  Int p_;
  std::vector<Ball> balls_;
};

/// Removes nested balls, merges complete sibling families into their parent
/// and sorts. The result is the same set in its unique coarsest form.
inline CompactOpenSet normalize(Int p, std::vector<Ball> balls) {
  require_prime(p);
  for (const auto& b : balls) require_same_prime(p, b.p());

  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) { return canonical_less(a, b); });
  std::vector<Ball> kept;
  for (const auto& b : balls) {
    bool nested = std::any_of(kept.begin(), kept.end(), [&](const Ball& k) { return k.contains(b); });
    if (!nested) kept.push_back(b);
  }

  auto key = [](const Ball& b) {
    return std::tuple{b.scale(), b.center().unit(), b.center().valuation()};
  };
  for (bool merged = true; merged;) {
    merged = false;
    std::map<std::tuple<Int, Int, Int>, std::vector<std::size_t>> families;
    for (std::size_t i = 0; i < kept.size(); ++i) families[key(kept[i].parent())].push_back(i);
    std::vector<bool> drop(kept.size(), false);
    std::vector<Ball> parents;
    for (const auto& [k, members] : families) {
      if (static_cast<Int>(members.size()) != p) continue;
      for (auto i : members) drop[i] = true;
      parents.push_back(kept[members.front()].parent());
      merged = true;
    }
    if (!merged) break;
    std::vector<Ball> next;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (!drop[i]) next.push_back(kept[i]);
    next.insert(next.end(), parents.begin(), parents.end());
    kept = std::move(next);
  }
  std::sort(kept.begin(), kept.end(), [](const Ball& a, const Ball& b) { return canonical_less(a, b); });
  return CompactOpenSet::from_disjoint(p, std::move(kept));
}

inline CompactOpenSet normalize(const CompactOpenSet& s) { return normalize(s.p(), s.balls()); }

inline PRational measure(const CompactOpenSet& s) {
  PRational total = PRational::zero(s.p());
  for (const auto& b : s.balls()) total = total + b.measure();
  return total;
}

inline bool member(const CompactOpenSet& s, const PRational& x) {
  require_same_prime(s.p(), x.p());
  return std::any_of(s.balls().begin(), s.balls().end(), [&](const Ball& b) { return b.contains(x); });
}

/// Membership for a finite-precision scalar. Decided when x - c has a known
/// nonzero digit below the ball scale, or is known modulo p^scale.
inline bool member(const CompactOpenSet& s, const PAdicScalar& x) {
  require_same_prime(s.p(), x.p());
  bool undecided = false;
  for (const auto& b : s.balls()) {
    PAdicScalar diff = x - PAdicScalar::from(b.center());
    if (!diff.is_zero() && diff.valuation() < b.scale()) continue;
    if (diff.precision() >= b.scale()) return true;
    undecided = true;
  }
  if (undecided) throw precision_error("member: scalar too coarse to decide membership");
  return false;
}

inline CompactOpenSet intersect(const CompactOpenSet& a, const CompactOpenSet& b) {
  require_same_prime(a.p(), b.p());
  std::vector<Ball> out;
  for (const auto& x : a.balls())
    for (const auto& y : b.balls()) {
      if (x.contains(y)) out.push_back(y);
      else if (y.contains(x)) out.push_back(x);
    }
  return normalize(a.p(), std::move(out));
}

inline CompactOpenSet unite(const CompactOpenSet& a, const CompactOpenSet& b) {
  require_same_prime(a.p(), b.p());
  std::vector<Ball> out = a.balls();
  out.insert(out.end(), b.balls().begin(), b.balls().end());
  return normalize(a.p(), std::move(out));
}

/// True if every point of a lies in b.
inline bool subset(const CompactOpenSet& a, const CompactOpenSet& b) { return intersect(a, b) == normalize(a); }

inline CompactOpenSet translate(const CompactOpenSet& s, const PRational& a) {
  std::vector<Ball> out;
  out.reserve(s.size());
  for (const auto& b : s.balls()) out.emplace_back(b.center() + a, b.scale());
  return normalize(s.p(), std::move(out));
}

/// The image p^e * S.
inline CompactOpenSet dilate(const CompactOpenSet& s, Int e) {
  std::vector<Ball> out;
  out.reserve(s.size());
  for (const auto& b : s.balls()) out.emplace_back(b.center().scaled(e), b.scale() + e);
  return normalize(s.p(), std::move(out));
}

/// The smallest ball containing a nonempty set.
inline Ball enclosing_ball(const CompactOpenSet& s) {
  if (s.empty()) throw usage_error("enclosing_ball: empty set");
  const auto& first = s.balls().front();
  Int r = s.min_scale();
  for (const auto& b : s.balls()) r = std::min(r, (b.center() - first.center()).valuation());
  return {first.center(), r};
}

/// S' = p^dilation * (S + shift) with S' inside Z_p.
struct AffineNormalization {
  CompactOpenSet set;
  PRational shift;
  Int dilation = 0;
};

/// Moves S into Z_p with the least dilation: the enclosing ball
/// c0 + p^r Z_p is shifted by -{c0} and scaled by p^max(0, -r).
inline AffineNormalization affine_normalize(const CompactOpenSet& s) {
  if (s.empty()) throw usage_error("affine_normalize: empty set");
  Ball hull = enclosing_ball(s);
  const auto [k, n] = detail::fractional_part(hull.center());
  PRational shift = -PRational(s.p(), k, -n);
  Int e = std::max<Int>(0, -hull.scale());
  CompactOpenSet moved = dilate(translate(s, shift), e);
  if (!moved.in_Zp()) throw internal_error("affine_normalize: image not inside Z_p");
  return {std::move(moved), shift, e};
}

/// Omega = disjoint union over c in C of c + p^gamma Z_p.
struct CanonicalDecomposition {
  Int p = 2;
  Int gamma = 0;
  std::vector<Int> residues;

  CompactOpenSet reconstruct() const {
    std::vector<Ball> balls;
    balls.reserve(residues.size());
    for (Int c : residues) balls.emplace_back(PRational(p, c), gamma);
    return normalize(p, std::move(balls));
  }

  PRational measure() const { return {p, static_cast<Int>(residues.size()), -gamma}; }

  friend bool operator==(const CanonicalDecomposition&, const CanonicalDecomposition&) = default;
};

/// Residue enumeration is capped to keep the decomposition materialisable.
inline constexpr std::size_t kMaxResidues = std::size_t{1} << 22;

inline CanonicalDecomposition canonical_decomposition(const CompactOpenSet& s) {
  if (s.empty()) throw usage_error("canonical_decomposition: empty set");
  if (!s.in_Zp()) throw domain_error("canonical_decomposition: set is not inside Z_p; apply affine_normalize first");
  CompactOpenSet norm = normalize(s);
  CanonicalDecomposition dec{norm.p(), norm.max_scale(), {}};
  PRational count = measure(norm).scaled(dec.gamma);
  if (static_cast<std::size_t>(count.to_integer()) > kMaxResidues)
    throw budget_error("canonical_decomposition: too many residues at level gamma = " + std::to_string(dec.gamma));
  for (const auto& b : norm.balls()) {
    const Int step = detail::ipow(dec.p, b.scale());
    const Int copies = detail::ipow(dec.p, dec.gamma - b.scale());
    const Int base = b.center().to_integer();
    for (Int j = 0; j < copies; ++j) dec.residues.push_back(base + j * step);
  }
  std::sort(dec.residues.begin(), dec.residues.end());
  return dec;
}

}  // namespace padic_riesz
