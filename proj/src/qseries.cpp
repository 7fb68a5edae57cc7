#include "epsforms/qseries.hpp"

#include "epsforms/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace epsforms {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Common denominator of a block of rationals and the scaled integer numerators.
Integer to_integers(std::span<const Rational> xs, std::vector<Integer>& out) {
  Integer den = 1;
  for (const auto& x : xs)
    if (x != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) {
      out[i] = 0;
      continue;
    }
    mpz_divexact(out[i].get_mpz_t(), den.get_mpz_t(), xs[i].get_den_mpz_t());
    out[i] *= xs[i].get_num();
  }
  return den;
}

} // namespace

QSeries::QSeries(std::int64_t denom, std::int64_t lower, std::int64_t trunc, std::vector<Rational> coeffs)
    : denom_(denom), lower_(lower), trunc_(trunc), coeffs_(std::move(coeffs)) {
  if (denom_ < 1) throw InputError("lattice denominator must be positive");
  if (trunc_ < lower_) lower_ = trunc_;
  coeffs_.resize(static_cast<std::size_t>(trunc_ - lower_));
  normalize();
}

QSeries QSeries::zero(std::int64_t trunc, std::int64_t denom) { return QSeries(denom, trunc, trunc, {}); }

QSeries QSeries::one(std::int64_t trunc) { return monomial(1, 0, trunc); }

QSeries QSeries::monomial(const Rational& c, std::int64_t e, std::int64_t trunc, std::int64_t denom) {
  if (e >= trunc) return zero(trunc, denom);
  std::vector<Rational> cs(static_cast<std::size_t>(trunc - e));
  cs[0] = c;
  return QSeries(denom, e, trunc, std::move(cs));
}

QSeries QSeries::from_terms(const std::vector<std::pair<std::int64_t, Rational>>& terms, std::int64_t trunc,
                            std::int64_t denom) {
  std::int64_t lo = trunc;
  for (const auto& [e, c] : terms)
    if (c != 0 && e < lo) lo = e;
  std::vector<Rational> cs(static_cast<std::size_t>(trunc - lo));
  for (const auto& [e, c] : terms)
    if (e < trunc) cs[static_cast<std::size_t>(e - lo)] += c;
  return QSeries(denom, lo, trunc, std::move(cs));
}

void QSeries::normalize() {
  std::size_t first = 0;
  while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
  if (first > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    lower_ += static_cast<std::int64_t>(first);
  }
}

Rational QSeries::coeff(std::int64_t e) const {
  if (e >= trunc_)
    throw PrecisionError("coefficient at index " + std::to_string(e) + " is beyond the truncation " +
                         std::to_string(trunc_));
  if (e < lower_) return 0;
  return coeffs_[static_cast<std::size_t>(e - lower_)];
}

const Rational& QSeries::leading() const {
  if (is_zero()) throw PrecisionError("leading coefficient of a series that is zero on its window");
  return coeffs_.front();
}

QSeries QSeries::refine(std::int64_t new_denom) const {
  if (new_denom % denom_ != 0) throw InputError("refine: new lattice must be finer");
  const std::int64_t f = new_denom / denom_;
  if (f == 1) return *this;
  if (is_zero()) return zero(trunc_ * f, new_denom);
  std::vector<Rational> cs(static_cast<std::size_t>((trunc_ - lower_) * f));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) cs[i * static_cast<std::size_t>(f)] = coeffs_[i];
  return QSeries(new_denom, lower_ * f, trunc_ * f, std::move(cs));
}

QSeries QSeries::coarsen() const {
  std::int64_t g = denom_;
  for (std::size_t i = 0; i < coeffs_.size() && g > 1; ++i)
    if (coeffs_[i] != 0) g = std::gcd(g, std::llabs(lower_ + static_cast<std::int64_t>(i)));
  if (g == 1) return *this;
  const std::int64_t t = ceil_div(trunc_, g);
  if (is_zero()) return zero(t, denom_ / g);
  std::vector<std::pair<std::int64_t, Rational>> ts;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) ts.emplace_back((lower_ + static_cast<std::int64_t>(i)) / g, coeffs_[i]);
  return from_terms(ts, t, denom_ / g);
}

QSeries QSeries::truncate(std::int64_t t) const {
  if (t > trunc_) throw PrecisionError("truncate beyond the known window");
  if (t <= lower_) return zero(t, denom_);
  std::vector<Rational> cs(coeffs_.begin(), coeffs_.begin() + (t - lower_));
  return QSeries(denom_, lower_, t, std::move(cs));
}

QSeries QSeries::shift(std::int64_t e) const {
  QSeries r = *this;
  r.lower_ += e;
  r.trunc_ += e;
  return r;
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

void QSeries::add_scaled(const Rational& c, const QSeries& y_in) {
  if (c == 0) return; // 0 * y is exactly zero
  if (y_in.denom_ != denom_) {
    const std::int64_t l = std::lcm(denom_, y_in.denom_);
    *this = refine(l);
    add_scaled(c, y_in.refine(l));
    return;
  }
  const QSeries& y = y_in;
  const std::int64_t t = std::min(trunc_, y.trunc_);
  const std::int64_t lo = std::min({lower_, y.lower_, t});
  std::vector<Rational> cs(static_cast<std::size_t>(t - lo));
  for (std::int64_t e = std::max(lower_, lo); e < t; ++e) cs[static_cast<std::size_t>(e - lo)] = coeffs_[static_cast<std::size_t>(e - lower_)];
  if (c != 0) {
    Rational tmp;
    for (std::int64_t e = std::max(y.lower_, lo); e < t; ++e) {
      const Rational& yc = y.coeffs_[static_cast<std::size_t>(e - y.lower_)];
      if (yc == 0) continue;
      mpq_mul(tmp.get_mpq_t(), c.get_mpq_t(), yc.get_mpq_t());
      cs[static_cast<std::size_t>(e - lo)] += tmp;
    }
  }
  lower_ = lo;
  trunc_ = t;
  coeffs_ = std::move(cs);
  normalize();
}

QSeries& QSeries::operator+=(const QSeries& y) {
  add_scaled(1, y);
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& y) {
  add_scaled(-1, y);
  return *this;
}

QSeries& QSeries::operator*=(const Rational& c) {
  if (c == 0) {
    *this = zero(trunc_, denom_);
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

QSeries operator*(const QSeries& x_in, const QSeries& y_in) {
  if (x_in.denom_ != y_in.denom_) {
    const std::int64_t l = std::lcm(x_in.denom_, y_in.denom_);
    return x_in.refine(l) * y_in.refine(l);
  }
  const QSeries& x = x_in;
  const QSeries& y = y_in;
  const std::int64_t lo = x.lower_ + y.lower_;
  const std::int64_t t = std::min(x.trunc_ + y.lower_, y.trunc_ + x.lower_);
  if (x.is_zero() || y.is_zero() || t <= lo) return QSeries::zero(t, x.denom_);
  const std::size_t len = static_cast<std::size_t>(t - lo);

  std::vector<Integer> xi, yi;
  const Integer dx = to_integers(std::span(x.coeffs_).first(std::min(len, x.coeffs_.size())), xi);
  const Integer dy = to_integers(std::span(y.coeffs_).first(std::min(len, y.coeffs_.size())), yi);

  std::vector<Integer> acc(len);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] == 0) continue;
    const std::size_t lim = std::min(len - i, yi.size());
    for (std::size_t j = 0; j < lim; ++j)
      if (yi[j] != 0) mpz_addmul(acc[i + j].get_mpz_t(), xi[i].get_mpz_t(), yi[j].get_mpz_t());
  }
  const Integer den = dx * dy;
  std::vector<Rational> cs(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (acc[i] == 0) continue;
    cs[i] = Rational(acc[i], den);
    cs[i].canonicalize();
  }
  return QSeries(x.denom_, lo, t, std::move(cs));
}

bool QSeries::operator==(const QSeries& other) const {
  return denom_ == other.denom_ && lower_ == other.lower_ && trunc_ == other.trunc_ && coeffs_ == other.coeffs_;
}

std::vector<std::pair<std::int64_t, Rational>> QSeries::terms() const {
  std::vector<std::pair<std::int64_t, Rational>> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) out.emplace_back(lower_ + static_cast<std::int64_t>(i), coeffs_[i]);
  return out;
}

namespace {

std::string exponent_text(std::int64_t e, std::int64_t u) {
  Rational x(e, u);
  x.canonicalize();
  if (x.get_den() == 1) return x.get_num().get_str();
  return "(" + x.get_str() + ")";
}

} // namespace

std::string QSeries::to_string(bool with_order) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms()) {
    Rational a = abs(c);
    const bool neg = c < 0;
    if (first) os << (neg ? "-" : "");
    else os << (neg ? " - " : " + ");
    first = false;
    const bool unit = a == 1;
    const bool frac = a.get_den() != 1;
    if (e == 0) {
      os << a.get_str();
      continue;
    }
    if (!unit) os << a.get_str() << (frac ? " " : "");
    os << "q";
    if (!(e == denom_)) os << "^" << exponent_text(e, denom_);
  }
  if (first) os << "0";
  if (with_order) os << " + O(q^" << exponent_text(trunc_, denom_) << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

QSeries invert(const QSeries& x) {
  if (x.is_zero()) throw InputError("cannot invert a series that vanishes on its window");
  const std::int64_t v = x.lower();
  const std::int64_t len = x.trunc() - v;
  const auto a = x.window();
  std::vector<Rational> b(static_cast<std::size_t>(len));
  const Rational inv0 = 1 / a[0];
  b[0] = inv0;
  Rational acc, tmp;
  for (std::int64_t n = 1; n < len; ++n) {
    acc = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
      const auto& ak = a[static_cast<std::size_t>(k)];
      if (ak == 0) continue;
      mpq_mul(tmp.get_mpq_t(), ak.get_mpq_t(), b[static_cast<std::size_t>(n - k)].get_mpq_t());
      acc += tmp;
    }
    b[static_cast<std::size_t>(n)] = -acc * inv0;
  }
  return QSeries(x.denom(), -v, -v + len, std::move(b));
}

QSeries pow(const QSeries& x, std::int64_t n) {
  if (n < 0) return invert(pow(x, -n));
  QSeries result = QSeries(x.denom(), 0, x.is_zero() ? 0 : x.trunc() - x.lower(), {Rational(1)});
  QSeries base = x;
  bool have = false;
  while (n > 0) {
    if (n & 1) {
      result = have ? result * base : base;
      have = true;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

QSeries rescale(const QSeries& x, std::int64_t m) {
  if (m < 1) throw InputError("rescale needs m >= 1");
  if (m == 1) return x;
  if (x.is_zero()) return QSeries::zero(x.trunc() * m, x.denom());
  std::vector<Rational> cs(static_cast<std::size_t>((x.trunc() - x.lower()) * m));
  const auto w = x.window();
  for (std::size_t i = 0; i < w.size(); ++i) cs[i * static_cast<std::size_t>(m)] = w[i];
  return QSeries(x.denom(), x.lower() * m, x.trunc() * m, std::move(cs));
}

QSeries u_operator(const QSeries& x, std::int64_t m) {
  if (x.denom() != 1) throw InputError("U(m) acts on integral-exponent series only");
  if (m < 1) throw InputError("U(m) needs m >= 1");
  const std::int64_t t = ceil_div(x.trunc(), m);
  const std::int64_t lo = std::min(ceil_div(x.lower(), m), t);
  std::vector<Rational> cs(static_cast<std::size_t>(t - lo));
  for (std::int64_t n = lo; n < t; ++n) cs[static_cast<std::size_t>(n - lo)] = x.coeff(n * m);
  return QSeries(1, lo, t, std::move(cs));
}

} // namespace epsforms
