#pragma once

// Obstructions, lifting of principal parts, and the duality grids.

#include "epsforms/spaces.hpp"
#include "epsforms/vvmf.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epsforms {

/// Negative order n -> a(n).
struct PrincipalPart {
  std::map<std::int64_t, Rational> terms;

  static PrincipalPart of(const QSeries& f);
  bool empty() const { return terms.empty(); }
  std::int64_t lowest() const { return terms.empty() ? 0 : terms.begin()->first; }
};

/// Throws InputError unless every order is negative and an eps-integer.
void require_eps_polynomial(const SpaceSpec& spec, const PrincipalPart& P);

struct ObstructionResult {
  bool pass = true;
  std::int64_t witness_order = 0; // d of the dual form f'_d
  QSeries witness;
  Rational value;                 // sum_{n<0} s(n) a(n) b_d(-n)
};

ObstructionResult obstruction_test(Engine& engine, const SpaceSpec& spec, const PrincipalPart& P);

/// a(0) = -sum_{n<0} s(n) a(n) B(-n), B the coefficients of E^{eps*}(N, 2-k, chi).
Rational constant_term(const SpaceSpec& spec, const PrincipalPart& P);

/// The unique form of A^eps(N, k, chi) with principal part P, known below
/// q^spec.trunc. Throws ObstructionError when P is obstructed.
QSeries lift(Engine& engine, const SpaceSpec& spec, const PrincipalPart& P);

class ObstructionError : public std::runtime_error {
public:
  ObstructionError(const std::string& what, ObstructionResult r) : std::runtime_error(what), result(std::move(r)) {}
  ObstructionResult result;
};

struct DualityIdentity {
  std::int64_t m, d;
  Rational a;         // a_m(-d)
  Rational b;         // b_d(-m)
  bool holds;         // a == -b
};

struct DualityIssue {
  std::string kind;   // "grid", "vanishing", "cross-existence"
  std::int64_t m, d, n;
  std::string detail;
};

struct DualityReport {
  SpaceSpec spec;
  std::int64_t m_lo, m_hi, d_lo, d_hi;
  std::vector<std::int64_t> f_orders;    // existing f_m in range
  std::vector<std::int64_t> dual_orders; // existing f'_d in range
  std::vector<DualityIdentity> identities;
  std::size_t vanishing_checked = 0;
  std::size_t cross_checked = 0;
  std::vector<DualityIssue> issues;

  bool ok() const { return issues.empty(); }
};

/// Checks a_m(-d) = -b_d(-m) for all existing pairs with m in [m_lo, m_hi]
/// (m < 0) and d in [d_lo, d_hi], the vanishing a_m(-n) b_d(n) = 0 for
/// d < n < -m, and cross-existence of both grids.
DualityReport duality_check(Engine& engine, const SpaceSpec& spec, std::int64_t m_lo, std::int64_t m_hi,
                            std::int64_t d_lo, std::int64_t d_hi);

} // namespace epsforms
