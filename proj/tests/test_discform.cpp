#include "epsforms/discform.hpp"
#include "epsforms/error.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace epsforms;

namespace {

using Matrix = WeilGenerators::Matrix;

Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double dist(const Matrix& a, const Matrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

std::vector<SignVector> all_signs(std::int64_t N) {
  const auto ps = prime_divisors(N);
  std::vector<SignVector> out;
  for (std::size_t mask = 0; mask < (1u << ps.size()); ++mask) {
    SignVector e;
    for (std::size_t i = 0; i < ps.size(); ++i) e[ps[i]] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(e);
  }
  return out;
}

} // namespace

TEST_CASE("level 15 forms") {
  const auto D = DiscriminantForm::build_from(15, {{3, -1}, {5, -1}});
  CHECK(D.to_string() == "3^-1 + 5^-1");
  CHECK(D.signature() == 2);
  CHECK(D.order() == 15);
  CHECK(D.level() == 15);
  CHECK(D.chi() == QuadChar::for_level(15));
  CHECK(D.epsilon() == SignVector{{3, -1}, {5, -1}});
  CHECK(D.dual().epsilon() == SignVector{{3, 1}, {5, -1}});
  CHECK(D.elements_with_norms().size() == 15);
}

TEST_CASE("level 3 norms") {
  const auto D = DiscriminantForm::build_from(3, {{3, 1}});
  CHECK(D.to_string() == "3^-1");
  std::multiset<std::int64_t> res;
  for (const auto& g : D.elements_with_norms()) res.insert(g.residue);
  CHECK(res == std::multiset<std::int64_t>{0, 1, 1});
}

TEST_CASE("trivial and two-adic forms") {
  const DiscriminantForm T;
  CHECK(T.signature() == 0);
  CHECK(T.chi().is_trivial());
  CHECK(T.elements_with_norms().size() == 1);
  const auto E = DiscriminantForm::parse("2_2^+2");
  CHECK(E.signature() == 2);
  CHECK(E.chi() == QuadChar::two_adic(LocalChar::minus4));
  CHECK(DiscriminantForm::parse("3^-1 + 5^-1") == DiscriminantForm::build_from(15, {{3, -1}, {5, -1}}));
  CHECK_THROWS_AS(DiscriminantForm::parse("3^x"), InputError);
}

TEST_CASE("build_from round trips for every supported level up to 60") {
  int built = 0;
  for (std::int64_t N = 2; N <= 60; ++N) {
    try {
      (void)QuadChar::for_level(N);
    } catch (const InputError&) {
      continue;
    }
    for (const auto& eps : all_signs(N)) {
      DiscriminantForm D;
      try {
        D = DiscriminantForm::build_from(N, eps);
      } catch (const InputError&) {
        continue;
      }
      ++built;
      CHECK(D.epsilon() == eps);
      CHECK(D.level() == N);
      CHECK(D.dual().dual() == D);
      const int r = D.signature();
      CHECK(D.chi()(-1) == ((r / 2) % 2 == 0 ? 1 : -1));
    }
  }
  CHECK(built > 40);
}

TEST_CASE("Weil generators satisfy the modular relations") {
  for (const auto& [N, eps] : std::vector<std::pair<std::int64_t, SignVector>>{
           {3, {{3, 1}}}, {15, {{3, -1}, {5, 1}}}, {12, {{2, 1}, {3, -1}}}, {20, {{2, -1}, {5, -1}}}, {21, {{3, 1}, {7, 1}}}}) {
    const auto D = DiscriminantForm::build_from(N, eps);
    const auto W = D.weil_generators();
    const auto Sm = W.materialize_s(), Tm = W.materialize_t();
    const std::size_t n = Sm.size();
    Matrix Sh(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) Sh[i][j] = std::conj(Sm[j][i]);
    Matrix I(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    CHECK(dist(mul(Sm, Sh), I) < 1e-12);

    // S^2 = (-1)^{r/2} e_g -> e_{-g}
    const auto els = D.elements_with_norms();
    const auto mods = D.coordinate_moduli();
    Matrix Z(n, std::vector<std::complex<double>>(n));
    const double sign = (D.signature() / 2) % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t g = 0; g < n; ++g) {
      std::vector<std::int64_t> neg(els[g].coords.size());
      for (std::size_t c = 0; c < neg.size(); ++c) neg[c] = mod_floor(-els[g].coords[c], mods[c]);
      for (std::size_t h = 0; h < n; ++h)
        if (els[h].coords == neg) Z[h][g] = sign;
    }
    const auto S2 = mul(Sm, Sm);
    CHECK(dist(S2, Z) < 1e-12);
    const auto ST = mul(Sm, Tm);
    CHECK(dist(mul(ST, mul(ST, ST)), S2) < 1e-12);
  }
}
