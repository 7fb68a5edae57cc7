#include "epsforms/arith.hpp"
#include "epsforms/discform.hpp"
#include "epsforms/error.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace epsforms;

TEST_CASE("kronecker agrees with mpz_kronecker") {
  for (std::int64_t a = -60; a <= 60; ++a)
    for (std::int64_t b = -60; b <= 60; ++b) {
      const int ref = mpz_kronecker(Integer(static_cast<long>(a)).get_mpz_t(), Integer(static_cast<long>(b)).get_mpz_t());
      REQUIRE_MESSAGE(kronecker(a, b) == ref, a << " " << b);
    }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> big(-1'000'000'007, 1'000'000'007);
  for (int i = 0; i < 2000; ++i) {
    const auto a = big(rng), b = big(rng);
    const int ref = mpz_kronecker(Integer(static_cast<long>(a)).get_mpz_t(), Integer(static_cast<long>(b)).get_mpz_t());
    REQUIRE(kronecker(a, b) == ref);
  }
}

TEST_CASE("kronecker is multiplicative in both arguments") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> d(-3000, 3000);
  for (int i = 0; i < 10000; ++i) {
    const auto a = d(rng), b = d(rng), c = d(rng);
    CHECK(kronecker(a * b, c) == kronecker(a, c) * kronecker(b, c));
    CHECK(kronecker(a, b * c) == kronecker(a, b) * kronecker(a, c));
  }
}

TEST_CASE("s values") {
  CHECK(s_value(0, 12) == 4);
  CHECK(s_value(6, 12) == 4);
  CHECK(s_value(2, 12) == 2);
  CHECK(s_value(3, 12) == 2);
  CHECK(s_value(7, 15) == 1);
  CHECK(s_value(-45, 15) == 4);
}

TEST_CASE("full parts") {
  CHECK(divisors_full_parts(15) == std::vector<std::int64_t>{1, 3, 5, 15});
  CHECK(divisors_full_parts(12) == std::vector<std::int64_t>{1, 3, 4, 12});
  CHECK(divisors_full_parts(3) == std::vector<std::int64_t>{1, 3});
  CHECK(full_part(12, 2) == 4);
}

TEST_CASE("rationals print in lowest terms") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-4/2")) == "-2");
  CHECK(is_integral(parse_rational("10/5")));
  CHECK_FALSE(is_integral(parse_rational("1/2")));
}

TEST_CASE("generalized Bernoulli numbers and L-values") {
  CHECK(gen_bernoulli(1, QuadChar()) == Rational(-1, 2));
  CHECK(gen_bernoulli(3, QuadChar::for_level(15)) == 48);
  CHECK(l_value(3, QuadChar::for_level(15)) == -16);
  CHECK(l_value(2, QuadChar()) == Rational(-1, 12));
}

TEST_CASE("Bernoulli numbers agree with the power-series oracle for w <= 12, N <= 24") {
  int checked = 0;
  for (std::int64_t N = 1; N <= 24; ++N)
    for (const auto& chi : quadratic_characters_dividing(N))
      for (int w = 1; w <= 12; ++w) {
        if (chi.is_trivial() && w == 1) continue; // B_1 sign convention differs
        REQUIRE_MESSAGE(gen_bernoulli(w, chi) == fixtures::bernoulli_oracle(w, chi), chi.label() << " w=" << w);
        ++checked;
      }
  CHECK(checked > 100);
}

TEST_CASE("chi(-1) matches the signature parity") {
  for (std::int64_t N : {3, 5, 7, 12, 15, 20, 21, 24, 35, 40, 105}) {
    const auto primes = prime_divisors(N);
    for (std::size_t mask = 0; mask < (1u << primes.size()); ++mask) {
      SignVector eps;
      for (std::size_t i = 0; i < primes.size(); ++i) eps[primes[i]] = (mask >> i) & 1 ? 1 : -1;
      DiscriminantForm D;
      try {
        D = DiscriminantForm::build_from(N, eps);
      } catch (const InputError&) {
        continue;
      }
      const int r = D.signature();
      CHECK(char_eval(D.chi(), D.chi().modulus(), -1) == ((r / 2) % 2 == 0 ? 1 : -1));
    }
  }
}

TEST_CASE("unsupported level shapes are rejected") {
  CHECK_THROWS_AS(QuadChar::for_level(9), InputError);
  CHECK_THROWS_AS(QuadChar::for_level(16), InputError);
  CHECK_NOTHROW(QuadChar::for_level(24));
}
