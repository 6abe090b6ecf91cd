#include <gtest/gtest.h>

#include <random>

#include "padic_riesz/oracle.hpp"
#include "padic_riesz/padic.hpp"

using namespace padic_riesz;

namespace {

// Base-p digits of num/den modulo p^k, found by searching for the residue x
// with den * x = num (mod p^k). Independent of the long-division code path.
std::vector<std::uint32_t> digits_by_congruence(Int num, Int den, Int p, Int k) {
  Int modulus = 1;
  for (Int i = 0; i < k; ++i) modulus *= p;
  Int x = 0;
  while (((den * x - num) % modulus + modulus) % modulus != 0) ++x;
  std::vector<std::uint32_t> out;
  for (Int i = 0; i < k; ++i) {
    out.push_back(static_cast<std::uint32_t>(x % p));
    x /= p;
  }
  return out;
}

PRational random_prational(std::mt19937_64& rng, Int p, Int span = 200, Int min_exp = -4, Int max_exp = 4) {
  Int unit = static_cast<Int>(rng() % static_cast<std::uint64_t>(2 * span + 1)) - span;
  Int exp = min_exp + static_cast<Int>(rng() % static_cast<std::uint64_t>(max_exp - min_exp + 1));
  return {p, unit, exp};
}

}  // namespace

// =============================================================================
// Arithmetic
// =============================================================================

TEST(PAdicScalarTest, AdditionCarries) {
  auto x = PAdicScalar::from_integer(3, 1) + PAdicScalar::from_integer(3, 2);
  EXPECT_TRUE(x.is_exact());
  EXPECT_EQ(x.valuation(), 1);
  EXPECT_EQ(x.digits(), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(x.to_string(), "1@1");
  EXPECT_EQ(x, PAdicScalar::from_integer(3, 3));
}

TEST(PAdicScalarTest, AdditiveIdentity) {
  auto x = PAdicScalar::parse("2101@-2", 3);
  auto y = x + PAdicScalar(3);
  EXPECT_EQ(y, x);
  EXPECT_EQ(y.digits(), x.digits());
}

TEST(PAdicScalarTest, ValuationsAddUnderMultiplication) {
  auto half = PAdicScalar::from_rational(2, 1, 2);
  auto q = half * half;
  EXPECT_TRUE(q.is_exact());
  EXPECT_EQ(q.valuation(), -2);
  EXPECT_EQ(q, PAdicScalar::from(PRational(2, 1, -2)));
}

TEST(PAdicScalarTest, MismatchedPrimesRejected) {
  EXPECT_THROW(PAdicScalar::from_integer(3, 1) + PAdicScalar::from_integer(5, 1), usage_error);
  EXPECT_THROW(PAdicScalar::from_integer(3, 1) * PAdicScalar::from_integer(5, 1), usage_error);
}

TEST(PAdicScalarTest, NonPrimeRejected) {
  EXPECT_THROW(PAdicScalar(4), prime_error);
  EXPECT_THROW(PRational(1, 1), prime_error);
  EXPECT_THROW(Frequency(9, 1, 1), prime_error);
}

TEST(PAdicScalarTest, ExactSubtraction) {
  auto a = PAdicScalar::from_integer(5, 7);
  auto b = PAdicScalar::from_integer(5, 3);
  auto d = a - b;
  EXPECT_TRUE(d.is_exact());
  EXPECT_EQ(d, PAdicScalar::from_integer(5, 4));

  // Negative results have no finite expansion.
  auto n = b - a;
  EXPECT_FALSE(n.is_exact());
  EXPECT_EQ(n.precision(), default_precision());
  EXPECT_TRUE(congruent(n, PAdicScalar::from_integer(5, -4)));
  EXPECT_EQ(n.digit(0), 1u);
  EXPECT_EQ(n.digit(1), 4u);
}

TEST(PAdicScalarTest, NegationCancels) {
  auto x = PAdicScalar::from_rational(7, 3, 49);
  auto z = x + (-x);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.precision(), -x.valuation() + default_precision() - 4);
}

TEST(PAdicScalarTest, LongDivisionMatchesCongruenceOracle) {
  for (Int p : {2, 3, 5, 7}) {
    for (Int den : {3, 7, 11, 13}) {
      if (den % p == 0) continue;
      for (Int num : {1, -1, 5, -17}) {
        auto x = PAdicScalar::from_rational(p, num, den, 8);
        EXPECT_EQ(x.precision(), x.valuation() + 8);
        auto expected = digits_by_congruence(num, den, p, 8);
        for (Int i = 0; i < 8; ++i) EXPECT_EQ(x.digit(i), expected[static_cast<std::size_t>(i)]) << p << " " << num << "/" << den;
      }
    }
  }
}

TEST(PAdicScalarTest, PrecisionFollowsInputs) {
  auto coarse = PAdicScalar::from_rational(3, 1, 2, 5);   // known mod 3^5
  auto fine = PAdicScalar::from_rational(3, 1, 4, 20);    // known mod 3^20
  EXPECT_EQ((coarse + fine).precision(), 5);
  EXPECT_EQ((coarse - fine).precision(), 5);
  // v(coarse) = 0, v(3^2) = 2: product known mod 3^(2 + 5).
  EXPECT_EQ((coarse * PAdicScalar::from_integer(3, 9)).precision(), 7);
  EXPECT_EQ((coarse * fine).precision(), 5);
  // Exact times exact stays exact.
  EXPECT_TRUE((PAdicScalar::from_integer(3, 10) * PAdicScalar::from_integer(3, 12)).is_exact());
}

TEST(PAdicScalarTest, ParseDigitsAndRationals) {
  auto x = PAdicScalar::parse("21@-1", 3);
  EXPECT_TRUE(x.is_exact());
  EXPECT_EQ(x, PAdicScalar::from_rational(3, 5, 3));
  EXPECT_EQ(PAdicScalar::parse("1/3^2", 3), PAdicScalar::from_rational(3, 1, 9));
  EXPECT_EQ(PAdicScalar::parse("01@0", 3), PAdicScalar::from_integer(3, 3));
  EXPECT_EQ(PAdicScalar::parse("12,3@0", 13), PAdicScalar::from_integer(13, 12 + 3 * 13));
  EXPECT_THROW(PAdicScalar::parse("29@0", 3), usage_error);
  EXPECT_THROW(PAdicScalar::parse("1/0", 3), usage_error);
  EXPECT_EQ(PAdicScalar::parse(x.to_string(), 3), x);
}

// =============================================================================
// Properties
// =============================================================================

TEST(PAdicScalarProperty, UltrametricAndMultiplicative) {
  std::mt19937_64 rng(11);
  for (Int p : {2, 3, 5}) {
    for (int trial = 0; trial < 300; ++trial) {
      PRational a = random_prational(rng, p), b = random_prational(rng, p);
      auto x = PAdicScalar::from(a), y = PAdicScalar::from(b);
      auto sum = x + y;
      if (!x.is_zero() && !y.is_zero()) {
        if (!sum.is_zero()) {
          EXPECT_GE(sum.valuation(), std::min(x.valuation(), y.valuation()));
        }
        if (x.valuation() != y.valuation()) {
          EXPECT_EQ(sum.valuation(), std::min(x.valuation(), y.valuation()));
        }
        EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
        EXPECT_DOUBLE_EQ((x * y).abs(), x.abs() * y.abs());
      }
      // Digit arithmetic agrees with exact rational arithmetic.
      EXPECT_TRUE(congruent(sum, PAdicScalar::from(a + b)));
      EXPECT_TRUE(congruent(x * y, PAdicScalar::from(a * b)));
      EXPECT_TRUE(congruent(x - y, PAdicScalar::from(a - b)));
    }
  }
}

TEST(PAdicScalarProperty, FracPartVanishesExactlyOnZp) {
  std::mt19937_64 rng(12);
  for (Int p : {2, 3, 7}) {
    for (int trial = 0; trial < 300; ++trial) {
      PRational a = random_prational(rng, p);
      auto f = frac_part(PAdicScalar::from(a));
      EXPECT_EQ(f.is_zero(), a.in_Zp()) << a.to_string();
      EXPECT_EQ(f, Frequency::of(a));
    }
  }
}

// =============================================================================
// Fractional part and characters
// =============================================================================

TEST(FracPartTest, Examples) {
  EXPECT_TRUE(frac_part(PAdicScalar::from_integer(5, 17)).is_zero());
  EXPECT_TRUE(frac_part(PAdicScalar::from_integer(5, -17)).is_zero());
  EXPECT_EQ(frac_part(PAdicScalar::from_rational(3, 1, 3)), Frequency(3, 1, 1));
  // 1/2 = 2 + 1*3 + 1*3^2 + ... lies in Z_3.
  auto half = PAdicScalar::from_rational(3, 1, 2);
  EXPECT_EQ(half.digit(0), 2u);
  EXPECT_EQ(half.digit(1), 1u);
  EXPECT_EQ(half.digit(2), 1u);
  EXPECT_TRUE(frac_part(half).is_zero());
  // 7/12 = 7/(3 * 4) in Q_3: {7/12} = 1/3 since 7/4 = 1 mod 3.
  EXPECT_EQ(frac_part(PAdicScalar::from_rational(3, 7, 12)), Frequency(3, 1, 1));
}

TEST(FracPartTest, InsufficientPrecision) {
  // 1/(9 * 2) known only to one relative digit: modulo 3^-1.
  auto coarse = PAdicScalar::from_rational(3, 1, 18, 1);
  EXPECT_EQ(coarse.precision(), -1);
  EXPECT_THROW(frac_part(coarse), precision_error);
  EXPECT_THROW(frac_part(PAdicScalar::zero_mod(3, -2)), precision_error);
  EXPECT_TRUE(frac_part(PAdicScalar::zero_mod(3, 0)).is_zero());
}

TEST(CharEvalTest, Examples) {
  for (Int p : {2, 3, 5}) {
    auto phase = char_eval(Frequency(p, 1, 1), PAdicScalar::from_integer(p, 1));
    EXPECT_EQ(phase, UnitRootPhase(p, 1, 1));
    const double angle = 2 * std::numbers::pi / static_cast<double>(p);
    EXPECT_NEAR(std::abs(phase.to_complex() - std::polar(1.0, angle)), 0.0, 1e-15);
  }
  // |lambda x|_p <= 1 gives the trivial phase.
  EXPECT_TRUE(char_eval(Frequency(3, 2, 2), PAdicScalar::from_integer(3, 9)).is_one());
  EXPECT_TRUE(char_eval(Frequency(3, 1, 1), PAdicScalar::from_rational(3, 3, 7)).is_one());
  auto minus_one = char_eval(Frequency(2, 1, 2), PAdicScalar::from_integer(2, 2));
  EXPECT_EQ(minus_one, UnitRootPhase(2, 1, 1));
  EXPECT_NEAR(std::abs(minus_one.to_complex() - std::complex<double>(-1, 0)), 0.0, 1e-15);
}

TEST(CharEvalTest, RefusesToGuessPhase) {
  // lambda = 1/27 needs x modulo 3^3; x is known modulo 3^2.
  auto x = PAdicScalar::from_rational(3, 1, 2, 2);
  EXPECT_THROW(char_eval(Frequency(3, 1, 3), x), precision_error);
  EXPECT_NO_THROW(char_eval(Frequency(3, 1, 2), x));
}

TEST(CharEvalProperty, DigitRouteMatchesExactRoute) {
  std::mt19937_64 rng(13);
  for (Int p : {2, 3, 5}) {
    for (int trial = 0; trial < 300; ++trial) {
      Int m = static_cast<Int>(rng() % 6);
      Int k = static_cast<Int>(rng() % static_cast<std::uint64_t>(detail::ipow(p, m)));
      Frequency lambda(p, k, m);
      PRational x = random_prational(rng, p, 500, -2, 3);
      EXPECT_EQ(char_eval(lambda, PAdicScalar::from(x)), char_eval(lambda, x));
    }
  }
}

TEST(CharEvalProperty, Homomorphism) {
  std::mt19937_64 rng(14);
  for (Int p : {2, 3, 5}) {
    for (int trial = 0; trial < 300; ++trial) {
      Frequency lambda = Frequency::of(random_prational(rng, p, 100, -5, 0));
      auto x = PAdicScalar::from(random_prational(rng, p));
      auto y = PAdicScalar::from_rational(p, static_cast<Int>(rng() % 1000) - 500, 1 + static_cast<Int>(rng() % 50) * p + 1);
      EXPECT_EQ(char_eval(lambda, x) * char_eval(lambda, y), char_eval(lambda, x + y));
    }
  }
}

TEST(UnitRootPhaseTest, ExactMultiplication) {
  UnitRootPhase a(3, 1, 2), b(3, 8, 2);
  EXPECT_TRUE((a * b).is_one());
  EXPECT_EQ(a * a, UnitRootPhase(3, 2, 2));
  EXPECT_EQ(UnitRootPhase(3, 3, 2), UnitRootPhase(3, 1, 1));
  EXPECT_EQ(a.conj() * a, UnitRootPhase(3));
}

TEST(FrequencyTest, Canonical) {
  EXPECT_EQ(Frequency(3, 3, 2), Frequency(3, 1, 1));
  EXPECT_EQ(Frequency(3, 9, 2), Frequency(3));
  EXPECT_EQ(Frequency(2, -1, 2), Frequency(2, 3, 2));
  EXPECT_EQ(Frequency(2, 3, 2).to_string(), "3/2^2");
  EXPECT_EQ(Frequency::parse("3/2^2", 2), Frequency(2, 3, 2));
  EXPECT_EQ(Frequency::parse("7/4", 2), Frequency(2, 3, 2));
}

// =============================================================================
// Integrals over balls
// =============================================================================

TEST(BallIntegralTest, Examples) {
  auto trivial = ball_integral_char(Frequency(5), PAdicScalar::from_integer(5, 3), 2);
  EXPECT_FALSE(trivial.zero);
  EXPECT_NEAR(std::abs(trivial.to_complex() - std::complex<double>(1.0 / 25, 0)), 0.0, 1e-15);

  auto vanishing = ball_integral_char(Frequency(3, 1, 1), PAdicScalar(3), 0);
  EXPECT_TRUE(vanishing.zero);
  EXPECT_EQ(vanishing.to_complex(), std::complex<double>(0, 0));

  auto phase = ball_integral_char(Frequency(3, 1, 1), PAdicScalar::from_integer(3, 1), 1);
  EXPECT_FALSE(phase.zero);
  EXPECT_EQ(phase.phase, UnitRootPhase(3, 1, 1));
  const auto expected = std::polar(1.0, 2 * std::numbers::pi / 3) / 3.0;
  EXPECT_NEAR(std::abs(phase.to_complex() - expected), 0.0, 1e-15);
  // Riemann sum over the three sub-cosets of 9 Z_3 inside 1 + 3 Z_3.
  auto riemann = oracle::riemann_sum(PRational(3, 1, -1), PRational(3, 1), 1, 1);
  EXPECT_NEAR(std::abs(riemann - expected), 0.0, 1e-12);
}

TEST(BallIntegralProperty, AgreesWithRiemannSums) {
  std::mt19937_64 rng(15);
  for (Int p : {2, 3, 5}) {
    for (int trial = 0; trial < 60; ++trial) {
      Int n = 1 + static_cast<Int>(rng() % 4);
      Int k = static_cast<Int>(rng() % static_cast<std::uint64_t>(detail::ipow(p, n)));
      Frequency lambda(p, k, n);
      Int m = static_cast<Int>(rng() % 4) - 1;
      PRational center = random_prational(rng, p, 50, 0, 2);
      auto exact = ball_integral_char(lambda, PAdicScalar::from(center), m);
      auto same = ball_integral_char(lambda, center, m);
      EXPECT_EQ(exact.zero, same.zero);
      for (Int depth : {n + 1, n + 2}) {
        auto riemann = oracle::riemann_sum(lambda.value(), center, m, std::max<Int>(depth - m, 1));
        EXPECT_NEAR(std::abs(exact.to_complex() - riemann), 0.0, 1e-12);
      }
    }
  }
}

TEST(PRationalTest, ArithmeticAndText) {
  PRational a(3, 5, -2), b(3, 4, -1);  // 5/9, 4/3
  EXPECT_EQ(a + b, PRational(3, 17, -2));
  EXPECT_EQ(a * b, PRational(3, 20, -3));
  EXPECT_EQ(PRational(3, 9, 0), PRational(3, 1, 2));
  EXPECT_EQ(PRational(3, 9, 0).valuation(), 2);
  EXPECT_EQ(a.to_string(), "5/3^2");
  EXPECT_EQ(PRational::parse("5/3^2", 3), a);
  EXPECT_EQ(PRational::parse("-6/27", 3), PRational(3, -2, -2));
  EXPECT_THROW(PRational::parse("1/2", 3), usage_error);
  EXPECT_TRUE(compare_real(a, b) < 0);
}
