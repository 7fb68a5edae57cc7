#include "epsforms/integrality.hpp"

#include "epsforms/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epsforms {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

bool integral_through(const QSeries& g, std::int64_t upto) {
  for (std::int64_t n = g.lower(); n <= upto; ++n)
    if (!is_integral(g.coeff(n))) return false;
  return true;
}

/// h * f known through q^upto.
QSeries clear(const EtaQuotient& h, const QSeries& f, std::int64_t upto) {
  const std::int64_t need = upto + 1;
  if (f.trunc() + h.order24() / 24 < need)
    throw PrecisionError("clearing check needs the form known below q^" + std::to_string(need - h.order24() / 24));
  return (h.expansion(need - f.lower()) * f).truncate(need);
}

} // namespace

std::int64_t sturm_bound(std::int64_t N, int w) {
  if (w < 1) throw InputError("Sturm bounds need weight >= 1");
  Rational mu = N == 1 ? Rational(1) : N == 2 ? Rational(3) : Rational(N * N);
  if (N > 2)
    for (auto p : prime_divisors(N)) mu *= Rational(p * p - 1, p * p);
  Rational b = mu * w / 12;
  b.canonicalize();
  const Integer num = b.get_num(), den = b.get_den();
  Integer q = num / den;
  if (q * den != num) q += 1;
  return q.get_si();
}

std::int64_t reduction_range(Engine& engine, const SpaceSpec& spec) {
  if (spec.k > 0) throw InputError("the reduction range is defined for k <= 0");
  return -spec.N - engine.m_epsilon(spec);
}

std::optional<std::int64_t> cusp_order_of(const QSeries& f, std::int64_t N, std::int64_t c) {
  if (N % c != 0) throw InputError("cusp denominator must divide the level");
  if (c % 2 == 0 && c % 4 != 0) return std::nullopt;
  const std::int64_t step = N / c;
  for (std::int64_t n = ceil_div(f.lower(), step); n * step < f.trunc(); ++n)
    if (f.coeff(n * step) != 0) return n;
  return std::nullopt;
}

std::optional<EtaQuotient> find_clearing_form(std::int64_t N, int k, const std::vector<QSeries>& forms, int bound) {
  const auto ds = divisors(N);
  const auto cs = divisors(N);
  std::vector<std::int64_t> need(cs.size(), 0); // ord_c(h) >= need
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool first = true;
    for (const auto& f : forms) {
      const auto o = cusp_order_of(f, N, cs[i]);
      if (!o) return std::nullopt;
      need[i] = first ? -*o : std::max(need[i], -*o);
      first = false;
    }
  }

  // 24 L ord_c(h) = sum_delta A[c][delta] r_delta with integer A.
  std::vector<std::vector<Rational>> coef(cs.size(), std::vector<Rational>(ds.size()));
  Integer L = 1;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) {
      const std::int64_t c = cs[i], d = ds[j], g = std::gcd(c, d);
      coef[i][j] = Rational(N * g * g, 24 * std::gcd(c, N / c) * c * d);
      coef[i][j].canonicalize();
      L = lcm(L, Integer(coef[i][j].get_den()));
    }
  std::vector<std::vector<std::int64_t>> A(cs.size(), std::vector<std::int64_t>(ds.size()));
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) A[i][j] = Integer(coef[i][j] * L).get_si();
  const std::int64_t Ls = L.get_si();

  int R = bound;
  while (ds.size() > 1 && std::pow(2.0 * R + 1, static_cast<double>(ds.size())) > 6e6) --R;

  std::optional<EtaQuotient> best;
  std::int64_t best_w2 = 0;
  std::vector<std::int64_t> r(ds.size(), -R);
  while (true) {
    std::int64_t w2 = 0, a = 0, b = 0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      w2 += r[j];
      a += ds[j] * r[j];
      b += (N / ds[j]) * r[j];
    }
    bool ok = w2 % 2 == 0 && k + w2 / 2 >= 1 && (!best || w2 < best_w2) && mod_floor(a, 24) == 0 &&
              mod_floor(b, 24) == 0;
    for (std::size_t i = 0; i < cs.size() && ok; ++i) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < ds.size(); ++j) s += A[i][j] * r[j];
      ok = s >= need[i] * Ls;
    }
    if (ok) {
      std::map<std::int64_t, std::int64_t> ex;
      for (std::size_t j = 0; j < ds.size(); ++j) ex[ds[j]] = r[j];
      EtaQuotient h(ex);
      if (h.character(N)) {
        best = h;
        best_w2 = w2;
      }
    }
    std::size_t j = ds.size();
    while (j > 0) {
      if (++r[j - 1] <= R) break;
      r[j - 1] = -R;
      --j;
    }
    if (j == 0) break;
  }
  return best;
}

std::string to_string(VerdictKind v) {
  switch (v) {
  case VerdictKind::certified: return "certified";
  case VerdictKind::verified: return "verified-to-precision";
  case VerdictKind::violation: return "violation";
  }
  return "?";
}

bool IntegralityReport::ok() const {
  return std::none_of(verdicts.begin(), verdicts.end(),
                      [](const auto& v) { return v.second.kind == VerdictKind::violation; });
}

IntegralityReport integrality_report(Engine& engine, const SpaceSpec& spec, std::int64_t check_precision) {
  const std::int64_t N = spec.N;
  const int k = spec.k;
  IntegralityReport rep;
  rep.spec = spec;
  rep.m_epsilon = engine.m_epsilon(spec);
  rep.lowest = -N - rep.m_epsilon;

  std::int64_t P = check_precision;
  if (P <= 0) {
    const auto probe = engine.canonical_basis(SpaceSpec::make(N, k, spec.eps, N + 2), rep.lowest);
    P = std::max<std::int64_t>(100, 4 * sturm_bound(N, static_cast<int>(probe.holomorphic_weight)));
  }
  const SpaceSpec wide = SpaceSpec::make(N, k, spec.eps, P);
  const auto basis = engine.canonical_basis(wide, rep.lowest);

  for (std::int64_t m = rep.lowest; m < 0; ++m) {
    if (!engine.existence(spec, m).exists) continue;
    const QSeries& f = basis.at(m);
    OrderVerdict v;
    v.m = m;
    v.check_range = P;

    for (std::int64_t n = f.lower(); n < P && v.kind != VerdictKind::violation; ++n) {
      const Rational x = s_value(n, N) * f.coeff(n);
      if (!is_integral(x)) {
        v.kind = VerdictKind::violation;
        v.violation_n = n;
        v.violation_value = x;
      }
    }
    if (v.kind == VerdictKind::violation) {
      rep.verdicts.emplace(m, v);
      continue;
    }

    auto try_single = [&]() {
      const auto h = find_clearing_form(N, k, {f});
      if (!h) return false;
      const int w = k + static_cast<int>(h->weight2() / 2);
      const std::int64_t sb = sturm_bound(N, w);
      if (!integral_through(clear(*h, f, sb), sb)) return false;
      v.kind = VerdictKind::certified;
      v.clearing = h->label();
      v.product_weight = w;
      v.sturm = sb;
      return true;
    };
    auto try_pair = [&]() {
      for (auto p : prime_divisors(std::gcd(-m, N))) {
        SignVector flipped = spec.eps;
        flipped[p] = -flipped[p];
        SpaceSpec other;
        try {
          other = SpaceSpec::make(N, k, flipped, P);
        } catch (const InputError&) {
          continue;
        }
        if (!engine.existence(other, m).exists) continue;
        const QSeries g = engine.canonical_basis(other, rep.lowest).at(m);
        const auto h = find_clearing_form(N, k, {f, g});
        if (!h) continue;
        const int w = k + static_cast<int>(h->weight2() / 2);
        const std::int64_t sb = sturm_bound(N, w);
        // 2f integral covers p | n (where s(n) is even); f + g integral covers
        // p not dividing n, where at most one of f, g has a nonzero coefficient.
        if (!integral_through(clear(*h, f * Rational(2), sb), sb)) continue;
        if (!integral_through(clear(*h, f + g, sb), sb)) continue;
        v.kind = VerdictKind::certified;
        v.clearing = h->label();
        v.product_weight = w;
        v.sturm = sb;
        v.partner_prime = p;
        return true;
      }
      return false;
    };
    if (!try_single() && std::gcd(-m, N) > 1) try_pair();
    rep.verdicts.emplace(m, v);
  }
  return rep;
}

QSeries reduce_via_j(Engine& engine, const SpaceSpec& spec, std::int64_t m_prime) {
  const std::int64_t N = spec.N;
  const std::int64_t lo = reduction_range(engine, spec);
  if (m_prime >= lo) throw InputError("order " + std::to_string(m_prime) + " is already inside the reduction range");
  const std::int64_t l = ceil_div(lo - m_prime, N);
  const std::int64_t m0 = m_prime + N * l;
  if (!engine.existence(spec, m_prime).exists)
    throw InputError("f_" + std::to_string(m_prime) + " does not exist");
  const SpaceSpec wide = SpaceSpec::make(N, spec.k, spec.eps, spec.trunc + N * l);
  const auto basis = engine.canonical_basis(wide, m_prime + 1);
  const std::int64_t jt = spec.trunc + N * l + std::max<std::int64_t>(0, -m0);
  QSeries g = pow(j_rescaled(N, jt), l) * basis.at(m0);
  g = g.truncate(spec.trunc);
  QSeries out = g;
  for (const auto& [m, f] : basis.forms)
    if (m > m_prime && m < 0 && g.coeff(m) != 0) out.add_scaled(-s_value(m, N) * g.coeff(m), f.truncate(spec.trunc));
  return out;
}

} // namespace epsforms
