#pragma once

// Finite-precision arithmetic in Q_p and exact evaluation of additive
// characters chi_lambda(x) = exp(2 pi i {lambda x}) as roots of unity.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace padic_riesz {

using Int = std::int64_t;

// Error taxonomy. The CLI maps each to a stable exit code.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class prime_error : public usage_error {
 public:
  using usage_error::usage_error;
};
class precision_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw domain_error("value outside the int64 range (addition)");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw domain_error("value outside the int64 range (multiplication)");
  return r;
}

inline Int ipow(Int base, Int exp) {
  if (exp < 0) throw usage_error("ipow: negative exponent");
  Int r = 1;
  for (Int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

inline Int mulmod(Int a, Int b, Int m) {
  auto r = static_cast<__int128>(floor_mod(a, m)) * floor_mod(b, m) % m;
  return static_cast<Int>(r);
}

// Inverse of a modulo m, gcd(a, m) = 1 required.
inline Int inverse_mod(Int a, Int m) {
  Int g = m, x = 0, r = floor_mod(a, m), y = 1;
  while (r != 0) {
    Int q = g / r;
    std::tie(g, r) = std::pair{r, g - q * r};
    std::tie(x, y) = std::pair{y, x - q * y};
  }
  if (g != 1) throw usage_error("inverse_mod: not invertible");
  return floor_mod(x, m);
}

// Largest e with p^e | n, n != 0.
inline Int strip_p(Int& n, Int p) {
  Int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

inline Int parse_int(std::string_view s) {
  Int v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw usage_error("malformed integer '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

inline bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Largest supported prime bound; digit products must fit comfortably in 64 bits.
inline constexpr Int kMaxPrime = 65535;

inline Int require_prime(Int p) {
  if (!is_prime(p)) throw prime_error("p = " + std::to_string(p) + " is not prime");
  if (p > kMaxPrime) throw prime_error("p = " + std::to_string(p) + " exceeds the supported bound");
  return p;
}

inline void require_same_prime(Int p, Int q) {
  if (p != q)
    throw usage_error("mismatched primes " + std::to_string(p) + " and " + std::to_string(q));
}

/// Working digit count for values whose expansion does not terminate.
/// Defaults to 64, overridden by PADIC_RIESZ_PRECISION.
inline Int default_precision() {
  static const Int value = [] {
    if (const char* env = std::getenv("PADIC_RIESZ_PRECISION")) {
      try {
        Int v = detail::parse_int(env);
        if (v >= 1 && v <= 100000) return v;
      } catch (const usage_error&) {
      }
    }
    return Int{64};
  }();
  return value;
}

/// A rational with numerator and denominator as written, e.g. "-3/4".
struct Rational {
  Int num = 0;
  Int den = 1;

  /// Accepts "a", "a/b" and "a/q^e".
  static Rational parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return {detail::parse_int(s), 1};
    Int num = detail::parse_int(s.substr(0, slash));
    auto den_text = s.substr(slash + 1);
    Int den;
    if (auto caret = den_text.find('^'); caret != std::string_view::npos) {
      den = detail::ipow(detail::parse_int(den_text.substr(0, caret)),
                         detail::parse_int(den_text.substr(caret + 1)));
    } else {
      den = detail::parse_int(den_text);
    }
    if (den == 0) throw usage_error("zero denominator in '" + std::string(s) + "'");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return {num, den};
  }
};

// ---------------------------------------------------------------------------
// PRational: an exact element u * p^v of Z[1/p] with p not dividing u.
// Ball centres, translations, measures and frequencies all live here.
// ---------------------------------------------------------------------------
class PRational {
 public:
  static constexpr Int kInfiniteValuation = std::numeric_limits<Int>::max();

  PRational() = default;
  PRational(Int p, Int unit, Int exponent = 0) : p_(require_prime(p)), unit_(unit), exp_(exponent) {
    if (unit_ == 0) {
      exp_ = 0;
    } else {
      exp_ = detail::checked_add(exp_, detail::strip_p(unit_, p_));
    }
  }

  static PRational zero(Int p) { return {p, 0, 0}; }

  /// Parses "a", "a/b", "a/p^e"; the denominator must be a power of p.
  static PRational parse(std::string_view s, Int p) {
    Rational r = Rational::parse(s);
    Int den = r.den;
    Int e = detail::strip_p(den, require_prime(p));
    if (den != 1)
      throw usage_error("'" + std::string(s) + "' is not of the form a/p^e for p = " + std::to_string(p));
    return {p, r.num, -e};
  }

  Int p() const { return p_; }
  Int unit() const { return unit_; }
  bool is_zero() const { return unit_ == 0; }
  Int valuation() const { return is_zero() ? kInfiniteValuation : exp_; }
  bool in_Zp() const { return is_zero() || exp_ >= 0; }

  /// Multiplication by p^e.
  PRational scaled(Int e) const {
    if (is_zero()) return *this;
    return {p_, unit_, detail::checked_add(exp_, e)};
  }

  PRational operator-() const { return {p_, -unit_, exp_}; }

  friend PRational operator+(const PRational& a, const PRational& b) {
    require_same_prime(a.p_, b.p_);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Int lo = std::min(a.exp_, b.exp_);
    Int ua = detail::checked_mul(a.unit_, detail::ipow(a.p_, a.exp_ - lo));
    Int ub = detail::checked_mul(b.unit_, detail::ipow(b.p_, b.exp_ - lo));
    return {a.p_, detail::checked_add(ua, ub), lo};
  }
  friend PRational operator-(const PRational& a, const PRational& b) { return a + (-b); }
  friend PRational operator*(const PRational& a, const PRational& b) {
    require_same_prime(a.p_, b.p_);
    if (a.is_zero() || b.is_zero()) return zero(a.p_);
    return {a.p_, detail::checked_mul(a.unit_, b.unit_), detail::checked_add(a.exp_, b.exp_)};
  }

  friend bool operator==(const PRational& a, const PRational& b) {
    return a.p_ == b.p_ && a.unit_ == b.unit_ && a.exp_ == b.exp_;
  }

  /// Order as real numbers.
  friend std::strong_ordering compare_real(const PRational& a, const PRational& b) {
    require_same_prime(a.p_, b.p_);
    if (a.is_zero() || b.is_zero()) {
      Int sa = a.unit_ > 0 ? 1 : (a.unit_ < 0 ? -1 : 0);
      Int sb = b.unit_ > 0 ? 1 : (b.unit_ < 0 ? -1 : 0);
      return sa <=> sb;
    }
    Int lo = std::min(a.exp_, b.exp_);
    auto ua = static_cast<__int128>(a.unit_) * detail::ipow(a.p_, a.exp_ - lo);
    auto ub = static_cast<__int128>(b.unit_) * detail::ipow(b.p_, b.exp_ - lo);
    return ua <=> ub;
  }

  /// Integer value; throws if not an integer.
  Int to_integer() const {
    if (is_zero()) return 0;
    if (exp_ < 0) throw domain_error(to_string() + " is not an integer");
    return detail::checked_mul(unit_, detail::ipow(p_, exp_));
  }

  double to_double() const { return static_cast<double>(unit_) * std::pow(static_cast<double>(p_), exp_); }

  /// "n" for integers, otherwise "n/p^e".
  std::string to_string() const {
    if (is_zero()) return "0";
    if (exp_ >= 0) return std::to_string(to_integer());
    return std::to_string(unit_) + "/" + std::to_string(p_) + "^" + std::to_string(-exp_);
  }

 private:
  Int p_ = 2;
  Int unit_ = 0;
  Int exp_ = 0;
};

namespace detail {

// Reduces u * p^v modulo Z_p to k / p^n with 0 <= k < p^n, n minimal.
struct FracParts {
  Int k = 0;
  Int n = 0;
};

inline FracParts fractional_part(const PRational& x) {
  if (x.in_Zp()) return {};
  Int n = -x.valuation();
  Int modulus = ipow(x.p(), n);
  return {floor_mod(x.unit(), modulus), n};
}

inline void canonical_fraction(Int p, Int& k, Int& n) {
  if (n < 0) throw usage_error("negative denominator exponent");
  Int modulus = ipow(p, n);
  k = floor_mod(k, modulus);
  if (k == 0) {
    n = 0;
    return;
  }
  while (k % p == 0) {
    k /= p;
    --n;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Frequency: an element k/p^m of the representative set of Q_p / Z_p.
// ---------------------------------------------------------------------------
class Frequency {
 public:
  Frequency() = default;
  explicit Frequency(Int p) : p_(require_prime(p)) {}
  Frequency(Int p, Int k, Int m) : p_(require_prime(p)), k_(k), m_(m) { detail::canonical_fraction(p_, k_, m_); }

  /// The fractional part {x}.
  static Frequency of(const PRational& x) {
    auto [k, n] = detail::fractional_part(x);
    return {x.p(), k, n};
  }

  static Frequency parse(std::string_view s, Int p) { return of(PRational::parse(s, p)); }

  Int p() const { return p_; }
  Int numerator() const { return k_; }
  /// Denominator exponent; |lambda|_p = p^m for nonzero lambda.
  Int exponent() const { return m_; }
  bool is_zero() const { return k_ == 0; }

  PRational value() const { return {p_, k_, -m_}; }

  friend Frequency operator+(const Frequency& a, const Frequency& b) { return of(a.value() + b.value()); }
  friend Frequency operator-(const Frequency& a, const Frequency& b) { return of(a.value() - b.value()); }

  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend auto operator<=>(const Frequency& a, const Frequency& b) {
    if (auto c = a.m_ <=> b.m_; c != 0) return c;
    return a.k_ <=> b.k_;
  }

  std::string to_string() const {
    if (k_ == 0) return "0";
    return std::to_string(k_) + "/" + std::to_string(p_) + "^" + std::to_string(m_);
  }

 private:
  Int p_ = 2;
  Int k_ = 0;
  Int m_ = 0;
};

// ---------------------------------------------------------------------------
// UnitRootPhase: exp(2 pi i k / p^n), kept as an exact fraction mod 1.
// ---------------------------------------------------------------------------
class UnitRootPhase {
 public:
  UnitRootPhase() = default;
  explicit UnitRootPhase(Int p) : p_(require_prime(p)) {}
  UnitRootPhase(Int p, Int k, Int n) : p_(require_prime(p)), k_(k), n_(n) { detail::canonical_fraction(p_, k_, n_); }

  /// exp(2 pi i {x}).
  static UnitRootPhase of(const PRational& x) {
    auto [k, n] = detail::fractional_part(x);
    return {x.p(), k, n};
  }

  Int p() const { return p_; }
  Int numerator() const { return k_; }
  Int exponent() const { return n_; }
  bool is_one() const { return k_ == 0; }

  PRational angle() const { return {p_, k_, -n_}; }

  friend UnitRootPhase operator*(const UnitRootPhase& a, const UnitRootPhase& b) {
    return of(a.angle() + b.angle());
  }
  UnitRootPhase conj() const { return of(-angle()); }

  friend bool operator==(const UnitRootPhase&, const UnitRootPhase&) = default;

  std::complex<double> to_complex() const {
    if (k_ == 0) return {1.0, 0.0};
    // Reduce the angle to [-1/2, 1/2) turns before converting.
    long double modulus = std::pow(static_cast<long double>(p_), static_cast<long double>(n_));
    long double turns = static_cast<long double>(k_) / modulus;
    if (turns >= 0.5L) turns -= 1.0L;
    if (turns == -0.5L) return {-1.0, 0.0};
    if (turns == 0.25L) return {0.0, 1.0};
    if (turns == -0.25L) return {0.0, -1.0};
    long double theta = 2.0L * std::numbers::pi_v<long double> * turns;
    return {static_cast<double>(std::cos(theta)), static_cast<double>(std::sin(theta))};
  }

  std::string to_string() const {
    if (k_ == 0) return "e^{0}";
    return "e^{2pi i " + std::to_string(k_) + "/" + std::to_string(p_) + "^" + std::to_string(n_) + "}";
  }

 private:
  Int p_ = 2;
  Int k_ = 0;
  Int n_ = 0;
};

// ---------------------------------------------------------------------------
// PAdicScalar: sum_{i} digits[i] p^(valuation+i), known modulo p^precision.
//
// A scalar is either exact (a finite non-negative expansion, precision is
// infinite) or known modulo p^N. Sums keep the smaller absolute precision and
// products keep min(v(x) + N(y), v(y) + N(x)); cancellation therefore loses
// relative digits automatically and no result claims more than its inputs.
// ---------------------------------------------------------------------------
class PAdicScalar {
 public:
  static constexpr Int kExact = std::numeric_limits<Int>::max();

  /// Exact zero.
  explicit PAdicScalar(Int p) : p_(require_prime(p)), valuation_(kExact), precision_(kExact) {}

  /// Exact finite expansion from little-endian digits.
  PAdicScalar(Int p, Int valuation, std::vector<std::uint32_t> digits)
      : p_(require_prime(p)), valuation_(valuation), digits_(std::move(digits)), precision_(kExact) {
    for (auto d : digits_)
      if (d >= static_cast<std::uint32_t>(p_)) throw usage_error("digit out of range for p");
    canonicalize();
  }

  /// Zero known modulo p^precision.
  static PAdicScalar zero_mod(Int p, Int precision) {
    PAdicScalar z(p);
    z.valuation_ = precision;
    z.precision_ = precision;
    return z;
  }

  static PAdicScalar from_integer(Int p, Int n, Int precision = default_precision()) {
    return from_rational(p, n, 1, precision);
  }

  /// num/den expanded in base p. Terminates (exact) iff the value lies in
  /// Z[1/p] and is non-negative; otherwise `relative_digits` digits are kept.
  static PAdicScalar from_rational(Int p, Int num, Int den, Int relative_digits = default_precision()) {
    require_prime(p);
    if (den == 0) throw usage_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return PAdicScalar(p);
    Int v = detail::strip_p(num, p) - detail::strip_p(den, p);
    // num/den is now a p-adic unit; long division digit by digit.
    Int den_inv = detail::inverse_mod(den, p);
    std::vector<std::uint32_t> digits;
    Int n = num;
    while (n != 0 && static_cast<Int>(digits.size()) < relative_digits) {
      Int d = detail::mulmod(n, den_inv, p);
      digits.push_back(static_cast<std::uint32_t>(d));
      n = (n - d * den) / p;
    }
    PAdicScalar x(p);
    x.valuation_ = v;
    x.digits_ = std::move(digits);
    x.precision_ = n == 0 ? kExact : v + relative_digits;
    x.canonicalize();
    return x;
  }

  static PAdicScalar from(const PRational& r, Int relative_digits = default_precision()) {
    if (r.is_zero()) return PAdicScalar(r.p());
    Int v = r.valuation();
    return from_rational(r.p(), r.unit(), 1, relative_digits).shifted(v);
  }

  /// Parses "digits@valuation" (little-endian, comma-separated when p > 10)
  /// or a rational "a", "a/b", "a/p^e".
  static PAdicScalar parse(std::string_view s, Int p) {
    require_prime(p);
    auto at = s.find('@');
    if (at == std::string_view::npos) {
      Rational r = Rational::parse(s);
      return from_rational(p, r.num, r.den);
    }
    Int v = detail::parse_int(s.substr(at + 1));
    auto body = s.substr(0, at);
    std::vector<std::uint32_t> digits;
    if (body.find(',') != std::string_view::npos || p > 10) {
      while (!body.empty()) {
        auto comma = body.find(',');
        digits.push_back(static_cast<std::uint32_t>(detail::parse_int(body.substr(0, comma))));
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
      }
    } else {
      for (char c : body) {
        if (c < '0' || c > '9') throw usage_error("malformed digit string '" + std::string(s) + "'");
        digits.push_back(static_cast<std::uint32_t>(c - '0'));
      }
    }
    return {p, v, std::move(digits)};
  }

  Int p() const { return p_; }
  bool is_exact() const { return precision_ == kExact; }
  bool is_zero() const { return digits_.empty(); }
  /// v_p(x). For a zero known modulo p^N this is N (a lower bound).
  Int valuation() const { return valuation_; }
  /// Absolute precision N: the value is known modulo p^N.
  Int precision() const { return precision_; }
  const std::vector<std::uint32_t>& digits() const { return digits_; }

  /// Digit at absolute index i; throws if i is beyond the known precision.
  std::uint32_t digit(Int i) const {
    if (i >= precision_) throw precision_error("digit index beyond known precision");
    if (is_zero() || i < valuation_ || i - valuation_ >= static_cast<Int>(digits_.size())) return 0;
    return digits_[static_cast<std::size_t>(i - valuation_)];
  }

  /// |x|_p as a double; 0 for zero.
  double abs() const {
    if (is_zero()) return 0.0;
    return std::pow(static_cast<double>(p_), static_cast<double>(-valuation_));
  }

  /// Multiplication by p^e (exact).
  PAdicScalar shifted(Int e) const {
    PAdicScalar r = *this;
    if (r.valuation_ != kExact) r.valuation_ += e;
    if (r.precision_ != kExact) r.precision_ += e;
    return r;
  }

  PAdicScalar operator-() const { return PAdicScalar(p_).sub(*this); }
  friend PAdicScalar operator+(const PAdicScalar& a, const PAdicScalar& b) { return a.add_signed(b, +1); }
  friend PAdicScalar operator-(const PAdicScalar& a, const PAdicScalar& b) { return a.sub(b); }

  friend PAdicScalar operator*(const PAdicScalar& a, const PAdicScalar& b) {
    require_same_prime(a.p_, b.p_);
    const Int p = a.p_;
    if ((a.is_zero() && a.is_exact()) || (b.is_zero() && b.is_exact())) return PAdicScalar(p);
    const Int v = a.valuation_ + b.valuation_;
    if (a.is_exact() && b.is_exact()) {
      std::vector<std::uint64_t> acc(a.digits_.size() + b.digits_.size() + 1, 0);
      for (std::size_t i = 0; i < a.digits_.size(); ++i)
        for (std::size_t j = 0; j < b.digits_.size(); ++j) acc[i + j] += std::uint64_t{a.digits_[i]} * b.digits_[j];
      return from_accumulator(p, v, acc, kExact);
    }
    auto sat_add = [](Int x, Int y) { return (x == kExact || y == kExact) ? kExact : x + y; };
    const Int precision = std::min(sat_add(a.valuation_, b.precision_), sat_add(b.valuation_, a.precision_));
    if (a.is_zero() || b.is_zero() || precision <= v) return zero_mod(p, precision);
    const auto len = static_cast<std::size_t>(precision - v);
    std::vector<std::uint64_t> acc(len, 0);
    for (std::size_t i = 0; i < a.digits_.size() && i < len; ++i) {
      for (std::size_t j = 0; j < b.digits_.size() && i + j < len; ++j)
        acc[i + j] += std::uint64_t{a.digits_[i]} * b.digits_[j];
      // Keep the accumulators bounded.
      if ((i & 1023) == 1023) carry_through(p, acc);
    }
    return from_accumulator(p, v, acc, precision);
  }

  /// Equality of the known information: same prime, precision and digits.
  friend bool operator==(const PAdicScalar&, const PAdicScalar&) = default;

  /// True if both values agree modulo p^min(precision).
  friend bool congruent(const PAdicScalar& a, const PAdicScalar& b) {
    auto d = a - b;
    return d.is_zero();
  }

  std::string to_string() const {
    if (is_zero()) return "0@0";
    std::string out;
    const bool wide = p_ > 10;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (wide && i > 0) out += ',';
      out += std::to_string(digits_[i]);
    }
    return out + "@" + std::to_string(valuation_);
  }

 private:
  Int p_;
  Int valuation_;
  std::vector<std::uint32_t> digits_;
  Int precision_;

  static void carry_through(Int p, std::vector<std::uint64_t>& acc) {
    std::uint64_t carry = 0;
    for (auto& x : acc) {
      x += carry;
      carry = x / static_cast<std::uint64_t>(p);
      x %= static_cast<std::uint64_t>(p);
    }
  }

  static PAdicScalar from_accumulator(Int p, Int v, std::vector<std::uint64_t>& acc, Int precision) {
    std::uint64_t carry = 0;
    for (auto& x : acc) {
      x += carry;
      carry = x / static_cast<std::uint64_t>(p);
      x %= static_cast<std::uint64_t>(p);
    }
    while (precision == kExact && carry != 0) {
      acc.push_back(carry % static_cast<std::uint64_t>(p));
      carry /= static_cast<std::uint64_t>(p);
    }
    PAdicScalar r(p);
    r.valuation_ = v;
    r.precision_ = precision;
    r.digits_.assign(acc.begin(), acc.end());
    r.canonicalize();
    return r;
  }

  // Restores digits_[0] != 0, trims trailing zeros of exact values and
  // truncates digits beyond the precision.
  void canonicalize() {
    if (precision_ != kExact && valuation_ != kExact) {
      Int keep = std::max<Int>(0, precision_ - valuation_);
      if (static_cast<Int>(digits_.size()) > keep) digits_.resize(static_cast<std::size_t>(keep));
      if (static_cast<Int>(digits_.size()) < keep) digits_.resize(static_cast<std::size_t>(keep), 0);
    }
    auto first = std::find_if(digits_.begin(), digits_.end(), [](auto d) { return d != 0; });
    if (first == digits_.end()) {
      digits_.clear();
      valuation_ = precision_;
      return;
    }
    valuation_ += first - digits_.begin();
    digits_.erase(digits_.begin(), first);
    if (precision_ == kExact) {
      while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
    }
  }

  PAdicScalar sub(const PAdicScalar& b) const { return add_signed(b, -1); }

  PAdicScalar add_signed(const PAdicScalar& b, int sign) const {
    require_same_prime(p_, b.p_);
    const Int p = p_;
    const Int precision = std::min(precision_, b.precision_);
    auto lowest = [](const PAdicScalar& x) { return x.is_zero() ? x.precision_ : x.valuation_; };
    Int lo = std::min(lowest(*this), lowest(b));
    if (lo == kExact) return PAdicScalar(p);  // both exact zero
    auto end_of = [](const PAdicScalar& x) {
      return x.is_zero() ? Int{0} : x.valuation_ + static_cast<Int>(x.digits_.size());
    };
    Int hi = precision != kExact ? precision : std::max(end_of(*this), end_of(b));
    if (precision != kExact && hi <= lo) return zero_mod(p, precision);

    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(std::max<Int>(0, hi - lo)) + 1);
    Int carry = 0;
    auto at = [](const PAdicScalar& x, Int i) -> Int {
      if (x.is_zero() || i < x.valuation_) return 0;
      Int j = i - x.valuation_;
      return j < static_cast<Int>(x.digits_.size()) ? x.digits_[static_cast<std::size_t>(j)] : 0;
    };
    for (Int i = lo; i < hi; ++i) {
      Int s = at(*this, i) + sign * at(b, i) + carry;
      carry = s < 0 ? -1 : (s >= p ? 1 : 0);
      out.push_back(static_cast<std::uint32_t>(s - carry * p));
    }
    PAdicScalar r(p);
    r.valuation_ = lo;
    r.precision_ = precision;
    if (precision == kExact) {
      if (carry == 1) out.push_back(1);
      if (carry == -1) {
        // Negative result: the borrow propagates forever as digits p-1.
        Int digits = std::max<Int>(default_precision(), hi - lo + 1);
        while (static_cast<Int>(out.size()) < digits) out.push_back(static_cast<std::uint32_t>(p - 1));
        r.precision_ = lo + digits;
      }
    }
    r.digits_ = std::move(out);
    r.canonicalize();
    return r;
  }
};

/// The fractional part {x} = sum_{i<0} x_i p^i as an element of Q_p / Z_p.
inline Frequency frac_part(const PAdicScalar& x) {
  const Int p = x.p();
  if (x.is_zero()) {
    if (x.precision() < 0) throw precision_error("frac_part: zero known only modulo a negative power of p");
    return Frequency(p);
  }
  if (x.valuation() >= 0) return Frequency(p);
  if (x.precision() < 0)
    throw precision_error("frac_part: digits below index 0 are not known (precision " +
                          std::to_string(x.precision()) + ")");
  const Int m = -x.valuation();
  Int k = 0;
  for (Int i = -1; i >= x.valuation(); --i) k = detail::checked_add(detail::checked_mul(k, p), x.digit(i));
  return {p, k, m};
}

inline PAdicScalar to_scalar(const Frequency& lambda) { return PAdicScalar::from(lambda.value()); }

/// chi_lambda(x) = exp(2 pi i {lambda x}), computed digit by digit.
/// Throws precision_error unless x is known modulo p^m where lambda = k/p^m.
inline UnitRootPhase char_eval(const Frequency& lambda, const PAdicScalar& x) {
  require_same_prime(lambda.p(), x.p());
  Frequency f = frac_part(to_scalar(lambda) * x);
  return {f.p(), f.numerator(), f.exponent()};
}

/// chi_lambda(x) for exact arguments (modular arithmetic route).
inline UnitRootPhase char_eval(const PRational& lambda, const PRational& x) { return UnitRootPhase::of(lambda * x); }
inline UnitRootPhase char_eval(const Frequency& lambda, const PRational& x) { return char_eval(lambda.value(), x); }

/// Exact value of an integral: phase * p^(-scale), or structural zero.
struct BallIntegral {
  bool zero = true;
  UnitRootPhase phase;
  Int scale = 0;

  std::complex<double> to_complex() const {
    if (zero) return {0.0, 0.0};
    return phase.to_complex() * std::pow(static_cast<double>(phase.p()), static_cast<double>(-scale));
  }
};

/// Integral of chi_lambda over center + p^m Z_p with mu(Z_p) = 1.
/// The zero branch is decided by comparing |lambda|_p with p^m.
inline BallIntegral ball_integral_char(const PRational& lambda, const PRational& center, Int m) {
  require_same_prime(lambda.p(), center.p());
  if (!lambda.is_zero() && -lambda.valuation() > m) return {true, UnitRootPhase(lambda.p()), m};
  return {false, char_eval(lambda, center), m};
}

inline BallIntegral ball_integral_char(const Frequency& lambda, const PRational& center, Int m) {
  return ball_integral_char(lambda.value(), center, m);
}

inline BallIntegral ball_integral_char(const Frequency& lambda, const PAdicScalar& center, Int m) {
  require_same_prime(lambda.p(), center.p());
  if (!lambda.is_zero() && lambda.exponent() > m) return {true, UnitRootPhase(lambda.p()), m};
  return {false, char_eval(lambda, center), m};
}

}  // namespace padic_riesz
