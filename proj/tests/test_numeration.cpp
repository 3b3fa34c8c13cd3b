#include <doctest.h>

#include <cmath>
#include <random>

#include "pisotmw/numeration.hpp"

using namespace pisotmw;

namespace {

DigitWord w(const char* text) { return DigitWord::parse(text); }

}  // namespace

TEST_CASE("make_basis accepts the three built-in systems") {
  auto fib = PisotBasis::fibonacci();
  CHECK(fib.beta_double() == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
  CHECK(fib.onset() == 0);
  REQUIRE(fib.conjugates().size() == 1);
  CHECK(static_cast<double>(fib.conjugates()[0].real()) == doctest::Approx(-0.6180339887498949));

  // 50 digits: beta^2 - beta - 1 vanishes far below double precision.
  HighFloat b = fib.beta();
  CHECK(abs(b * b - b - 1) < HighFloat("1e-45"));

  auto trib = PisotBasis::tribonacci();
  CHECK(trib.beta_double() == doctest::Approx(1.839286755214161));
  CHECK(trib.onset() == 0);

  auto small = PisotBasis::smallest_pisot();
  CHECK(small.beta_double() == doctest::Approx(1.324717957244746));
  // U_3 = 4 and U_4 = 6 break U_k = U_{k-2} + U_{k-3} below index 5.
  CHECK(small.onset() == 2);
  CHECK(small.term(5) == 7);
  CHECK(small.term(6) == 10);
}

TEST_CASE("make_basis rejects invalid inputs") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code_of([] { PisotBasis::make({-3, 0, 1}, {1, 2}); }) == ErrorCode::NotPisot);
  CHECK(code_of([] { PisotBasis::make({-2, 0, 1}, {1, 2}); }) == ErrorCode::NotPisot);
  CHECK(code_of([] { PisotBasis::make({-1, -1, 1}, {2, 3}); }) == ErrorCode::BadFirstTerm);
  CHECK(code_of([] { PisotBasis::make({-1, -1, 1}, {1, 1}); }) == ErrorCode::NotIncreasing);
  CHECK(code_of([] { PisotBasis::make({-1, -1, 1}, {1}); }) == ErrorCode::InsufficientTerms);
  CHECK(code_of([] { PisotBasis::make({0, -1, 1}, {1, 2}); }) == ErrorCode::NotPisot);
}

TEST_CASE("term") {
  auto fib = PisotBasis::fibonacci();
  CHECK(fib.term(0) == 1);
  CHECK(fib.term(5) == 13);
  CHECK(PisotBasis::tribonacci().term(4) == 13);
  CHECK(fib.term(90) == fib.term(89) + fib.term(88));

  // U_k / (c beta^k) -> 1 with c fitted at k = 60.
  double c = fib.fitted_constant();
  for (int k = 40; k <= 80; ++k) {
    HighFloat ratio = HighFloat(fib.term(k)) / (c * pow(fib.beta(), k));
    CHECK(abs(ratio - 1) < 1e-6);
  }
  // The fitted constant agrees with the one solved from the recurrence.
  CHECK(c == doctest::Approx(fib.recurrence_constants()[0].real()).epsilon(1e-9));
}

TEST_CASE("value_U") {
  auto fib = PisotBasis::fibonacci();
  CHECK(fib.value_u(w("101")) == 4);
  CHECK(fib.value_u(w("0")) == 0);
  CHECK(fib.value_u(DigitWord()) == 0);
  CHECK(fib.value_u(w("100-1")) == 4);
  CHECK(fib.value_u(w("000101")) == 4);
}

TEST_CASE("value_beta and ring operations") {
  auto fib = PisotBasis::fibonacci();
  CHECK(fib.value_beta(w("1-1-1")).is_zero());
  CHECK(fib.value_beta(DigitWord()).is_zero());
  CHECK(fib.value_beta(w("11")).coeffs() == std::vector<std::int64_t>{1, 1});
  CHECK(fib.value_beta(w("11")) == fib.value_beta(w("100")));

  auto one = fib.algebraic({1, 0});
  CHECK(one.mul_by_beta().coeffs() == std::vector<std::int64_t>{0, 1});
  CHECK(fib.algebraic({0, 1}).mul_by_beta().coeffs() == std::vector<std::int64_t>{1, 1});

  auto x = fib.algebraic({3, -2});
  auto y = fib.algebraic({-1, 5});
  CHECK((x + y) - y == x);
  CHECK(x + (-x) == AlgebraicInt::zero(fib.ring()));
  CHECK((x * y) * one == x * y);
  CHECK(x * (y + one) == x * y + x);

  auto trib = PisotBasis::tribonacci();
  CHECK_THROWS_AS((void)(trib.algebraic({1, 0, 0}) == x), Error);
}

TEST_CASE("value_beta is additive on digitwise sums") {
  std::mt19937 rng(7);
  for (const auto& basis : {PisotBasis::fibonacci(), PisotBasis::tribonacci(), PisotBasis::smallest_pisot()}) {
    std::uniform_int_distribution<int> len(0, 10), dig(-3, 3);
    for (int trial = 0; trial < 300; ++trial) {
      int n = len(rng);
      DigitWord a, b, s;
      for (int i = 0; i < n; ++i) {
        a.digits.push_back(dig(rng));
        b.digits.push_back(dig(rng));
        s.digits.push_back(a.digits.back() + b.digits.back());
      }
      CHECK(basis.value_beta(s) == basis.value_beta(a) + basis.value_beta(b));
      CHECK(basis.value_u(s) == basis.value_u(a) + basis.value_u(b));
    }
  }
}

TEST_CASE("embed") {
  auto fib = PisotBasis::fibonacci();
  CHECK(static_cast<double>(fib.embed(fib.algebraic({0, 1}), 2).real()) == doctest::Approx(-0.6180339887));
  CHECK(abs(fib.embed(AlgebraicInt::zero(fib.ring()), 2)) == 0);
  CHECK(static_cast<double>(fib.embed(fib.algebraic({1, 1}), 1).real()) == doctest::Approx(2.6180339887));

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coeff(-1000, 1000);
  for (const auto& basis : {PisotBasis::fibonacci(), PisotBasis::tribonacci(), PisotBasis::smallest_pisot()}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::int64_t> c(basis.degree());
      for (auto& v : c) v = coeff(rng);
      auto a = basis.algebraic(c);
      for (int i = 1; i <= basis.degree(); ++i) {
        HighComplex lhs = basis.embed(a.mul_by_beta(), i);
        HighComplex rhs = basis.roots()[i - 1] * basis.embed(a, i);
        if (abs(rhs) > 0) CHECK(abs(lhs - rhs) / abs(rhs) < HighFloat("1e-30"));
      }
    }
  }
}

TEST_CASE("greedy_expansion") {
  auto fib = PisotBasis::fibonacci();
  CHECK(fib.greedy_expansion(std::int64_t{4}).compact() == "101");
  CHECK(fib.greedy_expansion(std::int64_t{6}).compact() == "1001");
  CHECK(fib.greedy_expansion(std::int64_t{10}).compact() == "10010");
  CHECK(fib.greedy_expansion(std::int64_t{0}).compact() == "0");
  CHECK(fib.greedy_expansion(BigInt(10)).compact() == "10010");

  for (const auto& basis : {PisotBasis::fibonacci(), PisotBasis::tribonacci(), PisotBasis::smallest_pisot()}) {
    for (std::int64_t n = 0; n <= 20000; ++n) {
      auto g = basis.greedy_expansion(n);
      REQUIRE(basis.value_u64(g) == n);
      REQUIRE(basis.is_greedy(g));
    }
  }
  CHECK_FALSE(fib.is_greedy(w("11")));
  CHECK_FALSE(fib.is_greedy(w("100-1")));
}

TEST_CASE("digit word rendering") {
  CHECK(w("100-1").digits == std::vector<int>{1, 0, 0, -1});
  CHECK(w("1,0,-2").digits == std::vector<int>{1, 0, -2});
  CHECK(DigitWord({1, 0, 0, -1}).compact() == "100-1");
  CHECK(DigitWord({1, 0, 0, -1}).csv() == "1,0,0,-1");
  CHECK(DigitWord({0, 0, 1, -1}).stripped().compact() == "1-1");
  CHECK(DigitWord().compact() == "0");
  CHECK_THROWS_AS(DigitWord::parse("1x"), Error);
  CHECK(Alphabet::parse("-2..3") == Alphabet(-2, 3));
  CHECK_THROWS_AS(Alphabet::parse("1..3"), Error);
}

TEST_CASE("basis config round trip") {
  auto fib = PisotBasis::fibonacci();
  auto again = PisotBasis::from_config(fib.to_config());
  CHECK(again.to_config() == fib.to_config());
  CHECK(again.term(10) == fib.term(10));
  CHECK_THROWS_AS(PisotBasis::from_config("min_poly = -1,-1,1\ninitial_terms = 1,2\ncolour = red\n"), Error);
  auto custom = PisotBasis::from_config("# tribonacci\nname = t\nmin_poly = -1, -1, -1, 1\ninitial_terms = 1, 2, 4\n");
  CHECK(custom.term(4) == 13);
}
