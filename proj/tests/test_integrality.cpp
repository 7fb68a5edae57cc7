#include "epsforms/error.hpp"
#include "epsforms/integrality.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <tuple>

using namespace epsforms;
using namespace fixtures;

namespace {

Engine& engine() {
  static Engine e;
  return e;
}

EtaQuotient eq(std::map<std::int64_t, std::int64_t> r) { return EtaQuotient(std::move(r)); }
EtaQuotient H1() { return eq({{1, -3}, {3, 9}}); }
EtaQuotient H2() { return eq({{1, 9}, {3, -3}}); }

} // namespace

TEST_CASE("Sturm bounds") {
  CHECK(sturm_bound(3, 5) == 4);
  CHECK(sturm_bound(3, 11) == 8);
  CHECK(sturm_bound(3, 2) == 2);
  CHECK(sturm_bound(1, 12) == 1);
  CHECK_THROWS_AS(sturm_bound(3, 0), InputError);
}

TEST_CASE("reduction ranges") {
  CHECK(reduction_range(engine(), SpaceSpec::make(3, -1, n3_plus)) == -3);
  CHECK(reduction_range(engine(), SpaceSpec::make(3, -1, n3_minus)) == -3);
  CHECK(reduction_range(engine(), SpaceSpec::make(15, -1, eps3)) == -16);
  CHECK(reduction_range(engine(), SpaceSpec::make(15, -1, eps1)) == -15);
}

TEST_CASE("clearing eta quotients") {
  for (const auto& h : {H1(), H2()}) {
    const auto x = h.expansion(200);
    CHECK(x.leading() == 1);
    for (const auto& [n, c] : x.terms()) CHECK(is_integral(c));
  }
  CHECK((H1().pow(3) * H2()).exponents() == eq({{3, 24}}).exponents());
  CHECK(H1().weight2() == 6);
}

TEST_CASE("cusp orders") {
  const auto f = f3_plus_m2();
  CHECK(cusp_order_of(f, 3, 3) == -2);
  CHECK(cusp_order_of(f, 3, 1) == 0); // first nonzero on 3Z is a(0)
  CHECK_THROWS_AS(cusp_order_of(f, 3, 2), InputError);
}

TEST_CASE("level 3 reports certify every order") {
  const auto rp = integrality_report(engine(), SpaceSpec::make(3, -1, n3_plus));
  CHECK(rp.ok());
  CHECK(rp.lowest == -3);
  REQUIRE(rp.verdicts.size() == 2);
  CHECK(rp.verdicts.at(-2).kind == VerdictKind::certified);
  CHECK(rp.verdicts.at(-2).clearing == H1().pow(2).label());
  CHECK(rp.verdicts.at(-2).product_weight == 5);
  CHECK(rp.verdicts.at(-2).sturm == 4);
  CHECK(rp.verdicts.at(-3).kind == VerdictKind::certified);
  CHECK(rp.verdicts.at(-3).product_weight == 11);
  CHECK(rp.verdicts.at(-3).sturm == 8);
  CHECK(rp.verdicts.at(-3).partner_prime == 3);

  const auto rm = integrality_report(engine(), SpaceSpec::make(3, -1, n3_minus));
  CHECK(rm.ok());
  CHECK(rm.verdicts.at(-1).kind == VerdictKind::certified);
  CHECK(rm.verdicts.at(-1).clearing == H1().label());
  CHECK(rm.verdicts.at(-1).product_weight == 2);
  CHECK(rm.verdicts.at(-3).kind == VerdictKind::certified);
}

TEST_CASE("q^45 coefficients of the order -3 forms") {
  const auto fp = engine().canonical_basis(SpaceSpec::make(3, -1, n3_plus, 46), -3).at(-3);
  const auto fm = engine().canonical_basis(SpaceSpec::make(3, -1, n3_minus, 46), -3).at(-3);
  for (const auto& f : {fp, fm}) {
    const Rational a = f.coeff(45);
    CHECK_FALSE(is_integral(a));
    CHECK(is_integral(a * 2));
    CHECK(is_integral(s_value(45, 3) * a));
  }
  CHECK(is_integral(fp.coeff(45) + fm.coeff(45)));
  const auto sum = fp + fm;
  for (const auto& [n, c] : sum.terms()) CHECK(is_integral(c));
}

TEST_CASE("orders below the reduction range follow from the j recursion") {
  for (const auto& [N, e, orders] : std::vector<std::tuple<std::int64_t, SignVector, std::vector<std::int64_t>>>{
           {3, n3_plus, {-5, -6, -9}}, {3, n3_minus, {-4, -7, -10}}, {15, eps3, {-19, -24}}}) {
    const auto spec = SpaceSpec::make(N, -1, e, 30);
    const auto direct = engine().canonical_basis(spec, orders.back());
    for (auto m : orders) {
      if (!direct.has(m)) continue;
      const auto viaj = reduce_via_j(engine(), spec, m);
      CHECK(viaj == direct.at(m).truncate(spec.trunc));
    }
  }
  CHECK_THROWS_AS(reduce_via_j(engine(), SpaceSpec::make(3, -1, n3_plus), -2), InputError);
}

TEST_CASE("the clearing search gives up on poles it cannot absorb") {
  CHECK_FALSE(find_clearing_form(15, -1, {S({{-40, "1"}}, 5)}, 2).has_value());
}
