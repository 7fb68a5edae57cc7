#include "epsforms/error.hpp"
#include "epsforms/genforms.hpp"
#include "epsforms/qseries.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace epsforms;
using fixtures::S;

namespace {

QSeries random_series(std::mt19937_64& rng, std::int64_t lower, std::int64_t trunc) {
  std::uniform_int_distribution<int> c(1, 5), sign(0, 1), keep(0, 2);
  std::vector<std::pair<std::int64_t, Rational>> ts;
  for (std::int64_t e = lower; e < trunc; ++e)
    if (e == lower || keep(rng) == 0) {
      Rational x(sign(rng) ? c(rng) : -c(rng), 1 + keep(rng));
      x.canonicalize();
      ts.emplace_back(e, x);
    }
  return QSeries::from_terms(ts, trunc);
}

} // namespace

TEST_CASE("product window") {
  const auto x = S({{-1, "1"}, {0, "1"}}, 5);
  const auto y = S({{1, "1"}, {2, "-1"}}, 7);
  const auto z = x * y;
  CHECK(z.trunc() == std::min<std::int64_t>(5 + 1, 7 - 1));
  CHECK(z.coeff(0) == 1);
  CHECK(z.coeff(1) == 0);
  CHECK(z.coeff(2) == -1);
}

TEST_CASE("invert") {
  const auto geo = invert(S({{0, "1"}, {1, "-1"}}, 20));
  for (std::int64_t n = 0; n < 20; ++n) CHECK(geo.coeff(n) == 1);
  const auto d = delta_series(30);
  const auto di = invert(d);
  CHECK(di.lower() == -1);
  CHECK(di.coeff(-1) == 1);
  CHECK(di.coeff(0) == 24);
  const auto one = d * di;
  CHECK(one.coeff(0) == 1);
  for (std::int64_t n = 1; n < one.trunc(); ++n) CHECK(one.coeff(n) == 0);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_series(rng, -2, 12);
    const auto xx = invert(invert(x));
    REQUIRE(xx.trunc() >= x.lower());
    CHECK(xx == x.truncate(xx.trunc()));
  }
}

TEST_CASE("ring axioms on random truncated series") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_series(rng, -2, 10), b = random_series(rng, 0, 12), c = random_series(rng, 1, 9);
    const auto l = (a * b) * c, r = a * (b * c);
    const std::int64_t t = std::min(l.trunc(), r.trunc());
    CHECK(l.truncate(t) == r.truncate(t));
    const auto d1 = a * (b + c), d2 = a * b + a * c;
    const std::int64_t t2 = std::min(d1.trunc(), d2.trunc());
    CHECK(d1.truncate(t2) == d2.truncate(t2));
  }
}

TEST_CASE("truncation soundness") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_series(rng, -1, 30), b = random_series(rng, 0, 30);
    const auto lo = a.truncate(12) * b.truncate(15);
    const auto hi = a * b;
    CHECK(hi.truncate(lo.trunc()) == lo);
  }
}

TEST_CASE("rescale and U") {
  const auto j = j_series(10);
  const auto j3 = rescale(j, 3);
  CHECK(j3.lower() == -3);
  CHECK(j3.coeff(-3) == 1);
  CHECK(j3.coeff(0) == 744);
  CHECK(j3.coeff(-2) == 0);
  CHECK(rescale(j, 1) == j);
  CHECK(rescale(rescale(j, 2), 3) == rescale(j, 6));

  const auto x = S({{-3, "1"}, {0, "-2"}, {2, "3"}, {12, "6"}}, 15);
  const auto u = u_operator(x, 3);
  CHECK(u == S({{-1, "1"}, {0, "-2"}, {4, "6"}}, 5));
  CHECK(u_operator(x, 1) == x);
  for (std::int64_t m : {2, 3, 5, 7}) CHECK(u_operator(rescale(j, m), m) == j);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(invert(QSeries::zero(5)), std::exception);
  CHECK_THROWS_AS(S({{0, "1"}}, 5).truncate(6), PrecisionError);
}

TEST_CASE("rendering") {
  CHECK(S({{-3, "1/2"}, {0, "-1/2"}, {2, "3"}}, 15).to_string() == "1/2 q^-3 - 1/2 + 3q^2 + O(q^15)");
}
