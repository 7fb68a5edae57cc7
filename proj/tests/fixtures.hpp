#pragma once

// Reference q-expansions used as exact fixtures, plus independent oracles.

#include "epsforms/arith.hpp"
#include "epsforms/qseries.hpp"
#include "epsforms/discform.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using epsforms::QSeries;
using epsforms::Rational;
using epsforms::SignVector;

inline QSeries S(const std::vector<std::pair<std::int64_t, const char*>>& terms, std::int64_t trunc) {
  std::vector<std::pair<std::int64_t, Rational>> ts;
  for (const auto& [e, c] : terms) ts.emplace_back(e, epsforms::parse_rational(c));
  return QSeries::from_terms(ts, trunc);
}

/// True when f (integral lattice after coarsening) agrees with expected below expected.trunc().
inline bool agrees(const QSeries& f, const QSeries& expected) {
  const QSeries g = f.coarsen();
  if (g.denom() != 1 || g.trunc() < expected.trunc()) return false;
  for (std::int64_t n = std::min(g.lower(), expected.lower()); n < expected.trunc(); ++n)
    if (g.coeff(n) != expected.coeff(n)) return false;
  return true;
}

// Level 15, signs listed as (p=3, p=5).
inline const SignVector eps1{{3, -1}, {5, -1}};
inline const SignVector eps2{{3, 1}, {5, -1}};
inline const SignVector eps3{{3, -1}, {5, 1}};
inline const SignVector eps4{{3, 1}, {5, 1}};

inline QSeries g1() { return S({{1, "1"}, {4, "-3"}, {6, "-3"}, {9, "9"}, {10, "5"}}, 15); }
inline QSeries g2() { return S({{2, "1"}, {3, "-3"}, {5, "5"}, {8, "-7"}, {12, "9"}}, 15); }

inline QSeries E1() {
  return S({{0, "1/4"}, {2, "-5/8"}, {3, "-5/8"}, {5, "-13/8"}, {8, "-85/8"}, {12, "-105/8"}}, 15);
}
inline QSeries E2() { return S({{0, "1/4"}, {3, "1/2"}, {7, "6"}, {10, "15/2"}, {12, "21/2"}, {13, "21"}}, 15); }
inline QSeries E3() { return S({{0, "1/4"}, {5, "3/2"}, {6, "5/2"}, {9, "5"}, {11, "15"}, {14, "30"}}, 15); }
inline QSeries E4() {
  return S({{0, "1/4"}, {1, "-1/8"}, {4, "-21/8"}, {6, "-25/8"}, {9, "-41/8"}, {10, "-65/8"}}, 15);
}

// A^{eps1}(15, -1) and its dual A^{eps2}(15, 3)
inline QSeries f15_e1_m3() {
  return S({{-3, "1/2"}, {0, "-1/2"}, {2, "3"}, {3, "-1/2"}, {5, "-3"}, {8, "-3"}, {12, "6"}}, 15);
}
inline QSeries f15_e1_m7() {
  return S({{-7, "1"}, {0, "-6"}, {2, "12"}, {3, "33"}, {5, "39"}, {8, "-140"}, {12, "-144"}}, 15);
}
inline QSeries f15_e2_0() { return E2(); }
inline QSeries f15_e2_m2() {
  return S({{-2, "1"}, {3, "-3"}, {7, "-12"}, {10, "-45"}, {12, "36"}, {13, "146"}}, 15);
}

// A^{eps3}(15, -1) and its dual A^{eps4}(15, 3)
inline QSeries f15_e3_m4() {
  return S({{-4, "1"}, {-1, "3"}, {0, "3"}, {5, "-7"}, {6, "3"}, {9, "-21"}, {11, "-11"}, {14, "44"}}, 15);
}
inline QSeries f15_e3_m6() {
  return S({{-6, "1/2"}, {-1, "3"}, {0, "7/2"}, {5, "21"}, {6, "-49/2"}, {9, "19"}, {11, "-147"}, {14, "99"}}, 15);
}
inline QSeries f15_e3_m9() {
  return S({{-9, "1/2"}, {-1, "-9"}, {0, "4"}, {5, "99"}, {6, "48"}, {9, "-275"}, {11, "360"}, {14, "-2160"}}, 15);
}
inline QSeries f15_e4_1() { return g1(); }
inline QSeries f15_e4_0() { return S({{0, "1/4"}, {4, "-3"}, {6, "-7/2"}, {9, "-4"}, {10, "-15/2"}}, 15); }
inline QSeries f15_e4_m5() { return S({{-5, "1/2"}, {4, "7"}, {6, "-21"}, {9, "-99"}, {10, "67"}}, 15); }

// Level 3, weight -1; signs (p=3).
inline const SignVector n3_plus{{3, 1}};
inline const SignVector n3_minus{{3, -1}};

inline QSeries f3_minus_m1() {
  return S({{-1, "1"}, {0, "9"}, {2, "-82"}, {3, "189"}, {5, "-892"}, {6, "1782"}, {8, "-6234"}}, 9);
}
inline QSeries f3_plus_m2() {
  return S({{-2, "1"}, {0, "-27"}, {1, "328"}, {3, "-7128"}, {4, "24854"}, {6, "-221859"}, {7, "591632"}}, 9);
}
inline QSeries f3_plus_m3() {
  return S({{-3, "1/2"}, {0, "-36"}, {1, "-1701"}, {3, "-50058"}, {4, "-499608"}, {6, "-4023392"}, {7, "-27788508"}},
           9);
}
inline QSeries f3_minus_m3() {
  return S({{-3, "1/2"}, {0, "45"}, {2, "16038"}, {3, "50058"}, {5, "2125035"}, {6, "4023310"}, {8, "89099838"}}, 9);
}

/// prod_{n >= 1} (1 - q^{d n})^r below q^len, by repeated multiplication.
inline std::vector<epsforms::Integer> product_oracle(std::int64_t d, std::int64_t r, std::size_t len) {
  std::vector<epsforms::Integer> acc(len);
  acc[0] = 1;
  for (std::int64_t rep = 0; rep < (r < 0 ? -r : r); ++rep)
    for (std::size_t n = static_cast<std::size_t>(d); n < len; n += static_cast<std::size_t>(d)) {
      if (r > 0) {
        for (std::size_t i = len; i-- > n;) acc[i] -= acc[i - n];
      } else {
        for (std::size_t i = n; i < len; ++i) acc[i] += acc[i - n]; // divide by (1 - q^n)
      }
    }
  return acc;
}

/// B_{w,chi} as w! [t^w] sum_{a=1}^{f} chi(a) t e^{a t} / (e^{f t} - 1).
inline Rational bernoulli_oracle(int w, const epsforms::QuadChar& chi) {
  const std::int64_t f = chi.modulus();
  const int len = w + 1;
  // (e^{f t} - 1) / t = sum_j f^{j+1} t^j / (j+1)!
  std::vector<Rational> den(len), inv(len, Rational(0)), fact(len + 2, Rational(1));
  for (int i = 1; i < len + 2; ++i) fact[i] = fact[i - 1] * i;
  for (int j = 0; j < len; ++j) den[j] = Rational(epsforms::Integer(epsforms::ipow(f, j + 1))) / fact[j + 1];
  inv[0] = 1 / den[0];
  for (int n = 1; n < len; ++n) {
    Rational s = 0;
    for (int j = 1; j <= n; ++j) s += den[j] * inv[n - j];
    inv[n] = -s / den[0];
  }
  Rational total = 0;
  for (std::int64_t a = 1; a <= f; ++a) {
    const int c = chi(a);
    if (c == 0) continue;
    Rational coeff = 0; // [t^w] e^{a t} * inv
    for (int i = 0; i <= w; ++i)
      coeff += Rational(epsforms::Integer(epsforms::ipow(a, static_cast<unsigned>(i)))) / fact[i] * inv[w - i];
    total += c * coeff;
  }
  Rational out = total * fact[w];
  out.canonicalize();
  return out;
}

} // namespace fixtures
