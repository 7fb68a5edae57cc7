#pragma once

// Integrality of s(n) a_m(n): Sturm bounds, clearing eta quotients, reports.

#include "epsforms/genforms.hpp"
#include "epsforms/spaces.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epsforms {

/// ceil(w mu / 12) with mu = N^2 prod_{p | N} (1 - 1/p^2) (3 for N = 2, 1 for N = 1).
std::int64_t sturm_bound(std::int64_t N, int w);

/// -N - m_eps: integrality of every f_m reduces to the orders m >= this bound.
std::int64_t reduction_range(Engine& engine, const SpaceSpec& spec);

/// Order of f at the cusp 1/c of Gamma0(N) (c | N, c odd or 4 | c): the least
/// n with a(n N / c) != 0 among the known coefficients.
std::optional<std::int64_t> cusp_order_of(const QSeries& f, std::int64_t N, std::int64_t c);

/// Eta quotient h on the divisors of N (|r_delta| <= bound) making h f
/// holomorphic at every cusp for each f in forms, of weight k + wt(h) >= 1
/// with a quadratic character. Minimal weight wins, ties broken by the
/// lexicographically smallest exponent vector.
std::optional<EtaQuotient> find_clearing_form(std::int64_t N, int k, const std::vector<QSeries>& forms,
                                              int bound = 24);

enum class VerdictKind { certified, verified, violation };
std::string to_string(VerdictKind v);

struct OrderVerdict {
  std::int64_t m = 0;
  VerdictKind kind = VerdictKind::verified;
  std::string clearing;       // label of the clearing eta quotient, if any
  int product_weight = 0;
  std::int64_t sturm = 0;     // coefficients 0..sturm of the products were checked
  std::int64_t partner_prime = 0; // p > 0: certified with the sign flipped at p
  std::int64_t check_range = 0;   // s(n) a(n) scanned for n < check_range
  std::int64_t violation_n = 0;
  Rational violation_value;
};

struct IntegralityReport {
  SpaceSpec spec;
  std::int64_t lowest = 0; // reduction range
  std::int64_t m_epsilon = 0;
  std::map<std::int64_t, OrderVerdict> verdicts;

  bool ok() const;
};

/// Verdicts for every existing order in [-N - m_eps, 0); check_precision 0
/// picks max(100, 4 sturm_bound) automatically.
IntegralityReport integrality_report(Engine& engine, const SpaceSpec& spec, std::int64_t check_precision = 0);

/// f_{m'} for m' < -N - m_eps rebuilt as j(N tau)^l f_{m0} minus the reduced
/// forms of higher order, known below q^spec.trunc.
QSeries reduce_via_j(Engine& engine, const SpaceSpec& spec, std::int64_t m_prime);

} // namespace epsforms
