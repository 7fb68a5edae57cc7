#include "epsforms/error.hpp"
#include "epsforms/spaces.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>

using namespace epsforms;
using namespace fixtures;

namespace {

Engine& engine() {
  static Engine e;
  return e;
}

} // namespace

TEST_CASE("space specs") {
  const auto s = SpaceSpec::make(15, -1, eps1);
  CHECK(s.label() == "N=15 k=-1 eps=(-1,-1)");
  const auto d = s.dual();
  CHECK(d.k == 3);
  CHECK(d.eps == eps2);
  CHECK(dual_sign(15, eps3) == eps4);
  CHECK_THROWS_AS(SpaceSpec::make(15, 1, eps1), InputError);
  CHECK_THROWS_AS(SpaceSpec::make(15, 0, eps1), InputError); // parity
  CHECK_THROWS_AS(SpaceSpec::make(9, 0, {{3, 1}}), InputError);
  CHECK(is_eps_integer(-3, 15, eps1));
  CHECK_FALSE(is_eps_integer(-1, 15, eps1));
}

TEST_CASE("epsilon subspaces of the level 15 weight 3 cusp forms") {
  const std::vector<QSeries> span{g1(), g2()};
  const auto e4 = epsilon_subspace(span, 15, eps4, 14, 14);
  REQUIRE(e4.size() == 1);
  CHECK(echelonize(e4, 15).at(1) == g1());
  const auto e1 = epsilon_subspace(span, 15, eps1, 14, 14);
  REQUIRE(e1.size() == 1);
  CHECK(echelonize(e1, 15).at(2) == g2());
  CHECK(epsilon_subspace(span, 15, eps2, 14, 14).empty());
  CHECK(epsilon_subspace(span, 15, eps3, 14, 14).empty());

  const std::vector<QSeries> eis{E1(), E2(), E3(), E4()};
  for (const auto& e : {eps1, eps2, eps3, eps4}) CHECK(epsilon_subspace(eis, 15, e, 14, 14).size() == 1);
}

TEST_CASE("echelonize") {
  const auto b = echelonize({E4(), g1()}, 15);
  CHECK(b.at(1) == g1());
  CHECK(b.at(0) == f15_e4_0());
  CHECK(echelonize({g1() * Rational(7)}, 15).at(1) == g1());
  const auto perm = echelonize({g1() * Rational(-3), E4() + g1()}, 15);
  CHECK(perm == b);
  CHECK(echelonize({S({{-3, "5"}, {0, "1"}}, 10)}, 15).at(-3).leading() == Rational(1, 2));
}

TEST_CASE("holomorphic bases at level 15 weight 3") {
  const auto b4 = engine().holomorphic_eps_basis(15, 3, eps4, 15);
  CHECK(b4.size() == 2);
  CHECK(agrees(b4.at(1), f15_e4_1()));
  CHECK(agrees(b4.at(0), f15_e4_0()));
  const auto b1 = engine().holomorphic_eps_basis(15, 3, eps1, 15);
  CHECK(agrees(b1.at(2), g2()));
  const auto b2 = engine().holomorphic_eps_basis(15, 3, eps2, 15);
  REQUIRE(b2.size() == 1);
  CHECK(agrees(b2.at(0), E2()));
}

TEST_CASE("canonical bases reproduce the level 15 tables") {
  const auto s1 = SpaceSpec::make(15, -1, eps1);
  const auto b1 = engine().canonical_basis(s1, -7);
  CHECK(agrees(b1.at(-3), f15_e1_m3()));
  CHECK(agrees(b1.at(-7), f15_e1_m7()));
  const auto d1 = engine().canonical_basis(s1.dual(), -2);
  CHECK(agrees(d1.at(0), f15_e2_0()));
  CHECK(agrees(d1.at(-2), f15_e2_m2()));

  const auto s3 = SpaceSpec::make(15, -1, eps3);
  const auto b3 = engine().canonical_basis(s3, -9);
  CHECK(agrees(b3.at(-4), f15_e3_m4()));
  CHECK(agrees(b3.at(-6), f15_e3_m6()));
  CHECK(agrees(b3.at(-9), f15_e3_m9()));
  CHECK_FALSE(b3.has(-1));
  const auto d3 = engine().canonical_basis(s3.dual(), -5);
  CHECK(agrees(d3.at(1), f15_e4_1()));
  CHECK(agrees(d3.at(0), f15_e4_0()));
  CHECK(agrees(d3.at(-5), f15_e4_m5()));
}

TEST_CASE("canonical bases reproduce the level 3 tables") {
  const auto bm = engine().canonical_basis(SpaceSpec::make(3, -1, n3_minus, 9), -3);
  CHECK(agrees(bm.at(-1), f3_minus_m1()));
  CHECK(agrees(bm.at(-3), f3_minus_m3()));
  const auto bp = engine().canonical_basis(SpaceSpec::make(3, -1, n3_plus, 9), -3);
  CHECK(agrees(bp.at(-2), f3_plus_m2()));
  CHECK(agrees(bp.at(-3), f3_plus_m3()));
}

TEST_CASE("reduced basis invariants") {
  for (const auto& e : {eps1, eps2, eps3, eps4}) {
    const auto spec = SpaceSpec::make(15, -1, e, 40);
    const auto b = engine().canonical_basis(spec, -30);
    for (const auto& [m, f] : b.forms) {
      CHECK(f.lower() == m);
      CHECK(f.leading() == Rational(1, s_value(m, 15)));
      CHECK(satisfies_eps(f, 15, e));
      for (const auto& [m2, g] : b.forms)
        if (m2 != m) CHECK(f.coeff(m2) == 0);
    }
    for (std::int64_t m = -30; m < 0; ++m) CHECK(b.has(m) == engine().existence(spec, m).exists);
  }
}

TEST_CASE("positive weight forms have one non-positive term") {
  const auto spec = SpaceSpec::make(15, 3, eps4, 30);
  const auto b = engine().canonical_basis(spec, -12);
  for (const auto& [m, f] : b.forms) {
    if (m > 0) continue;
    for (std::int64_t n = f.lower() + 1; n <= 0; ++n) CHECK(f.coeff(n) == 0);
  }
}

TEST_CASE("raising the truncation keeps reported coefficients") {
  const auto lo = engine().canonical_basis(SpaceSpec::make(15, -1, eps3, 15), -9);
  const auto hi = engine().canonical_basis(SpaceSpec::make(15, -1, eps3, 60), -9);
  for (const auto& [m, f] : lo.forms) CHECK(hi.at(m).truncate(f.trunc()) == f);
}

TEST_CASE("dual cusp spaces") {
  CHECK(engine().dual_cusp_basis(SpaceSpec::make(15, -1, eps1)).forms.empty());
  CHECK(engine().m_epsilon(SpaceSpec::make(15, -1, eps1)) == 0);
  const auto d3 = engine().dual_cusp_basis(SpaceSpec::make(15, -1, eps3));
  CHECK(d3.orders() == std::vector<std::int64_t>{1});
  CHECK(agrees(d3.at(1), g1()));
  CHECK(engine().m_epsilon(SpaceSpec::make(15, -1, eps3)) == 1);
  for (const auto& e : {n3_plus, n3_minus}) {
    CHECK(engine().dual_cusp_basis(SpaceSpec::make(3, -1, e)).forms.empty());
    CHECK(engine().m_epsilon(SpaceSpec::make(3, -1, e)) == 0);
  }
}

TEST_CASE("existence at level 15") {
  const auto s1 = SpaceSpec::make(15, -1, eps1), s3 = SpaceSpec::make(15, -1, eps3);
  for (std::int64_t m = -30; m < 0; ++m) {
    const auto r = mod_floor(m, 15);
    CHECK(engine().existence(s1, m).exists == (r == 0 || r == 2 || r == 3 || r == 5 || r == 8 || r == 12));
    const bool e3 = (r == 0 || r == 5 || r == 6 || r == 9 || r == 11 || r == 14) && m != -1;
    CHECK(engine().existence(s3, m).exists == e3);
  }
  CHECK_FALSE(engine().existence(s3, -1).reason.empty());
}
