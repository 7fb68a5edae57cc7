#pragma once

#include "epsforms/arith.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace epsforms {

/// Truncated Laurent series in q^{1/u} with exact rational coefficients.
///
/// Coefficients are stored densely for lattice exponents in [lower, trunc);
/// the exponent of index i is i/u. `lower` is the true valuation (leading
/// zeros are stripped), so the zero series is represented by lower == trunc.
/// Every operation tracks how far its result is justified by its inputs and
/// never reports coefficients beyond that.
class QSeries {
public:
  QSeries() = default;
  QSeries(std::int64_t denom, std::int64_t lower, std::int64_t trunc, std::vector<Rational> coeffs);

  static QSeries zero(std::int64_t trunc, std::int64_t denom = 1);
  static QSeries one(std::int64_t trunc);
  /// c * q^{e/u} + O(q^{trunc/u}).
  static QSeries monomial(const Rational& c, std::int64_t e, std::int64_t trunc, std::int64_t denom = 1);
  /// Exact (finite) polynomial: terms (exponent, coeff), known up to trunc.
  static QSeries from_terms(const std::vector<std::pair<std::int64_t, Rational>>& terms, std::int64_t trunc,
                            std::int64_t denom = 1);

  std::int64_t denom() const { return denom_; }
  std::int64_t lower() const { return lower_; }
  std::int64_t trunc() const { return trunc_; }
  bool is_zero() const { return lower_ >= trunc_; }
  /// Coefficient at lattice index e; zero below the valuation.
  /// Throws PrecisionError for e >= trunc.
  Rational coeff(std::int64_t e) const;
  const Rational& leading() const;
  std::span<const Rational> window() const { return coeffs_; }

  /// Same series re-expressed on the lattice (1/new_denom)Z; new_denom must be
  /// a multiple of denom().
  QSeries refine(std::int64_t new_denom) const;
  /// Coarsest lattice that carries all nonzero terms (and the truncation).
  QSeries coarsen() const;
  /// Drop everything at index >= t (t <= trunc()).
  QSeries truncate(std::int64_t t) const;
  /// Multiply by q^{e/u}.
  QSeries shift(std::int64_t e) const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& y);
  QSeries& operator-=(const QSeries& y);
  QSeries& operator*=(const Rational& c);
  friend QSeries operator+(QSeries x, const QSeries& y) { return x += y; }
  friend QSeries operator-(QSeries x, const QSeries& y) { return x -= y; }
  friend QSeries operator*(QSeries x, const Rational& c) { return x *= c; }
  friend QSeries operator*(const Rational& c, QSeries x) { return x *= c; }
  friend QSeries operator*(const QSeries& x, const QSeries& y);

  /// x + c*y, without temporaries.
  void add_scaled(const Rational& c, const QSeries& y);

  bool operator==(const QSeries& other) const;

  /// Terms with nonzero coefficient, ascending.
  std::vector<std::pair<std::int64_t, Rational>> terms() const;

  /// Human-readable "1/2 q^-3 - 1/2 + 3q^2 + ... + O(q^15)".
  std::string to_string(bool with_order = true) const;

private:
  void normalize();

  std::int64_t denom_ = 1;
  std::int64_t lower_ = 0;
  std::int64_t trunc_ = 0;
  std::vector<Rational> coeffs_;
};

QSeries invert(const QSeries& x);
QSeries pow(const QSeries& x, std::int64_t n);
/// f(tau) -> f(m tau): exponent n -> m n.
QSeries rescale(const QSeries& x, std::int64_t m);
/// sum_n a(m n) q^n (u = 1 only).
QSeries u_operator(const QSeries& x, std::int64_t m);

} // namespace epsforms
