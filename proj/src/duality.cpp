#include "epsforms/duality.hpp"

#include "epsforms/error.hpp"
#include "epsforms/genforms.hpp"

#include <algorithm>

namespace epsforms {

PrincipalPart PrincipalPart::of(const QSeries& f) {
  if (f.denom() != 1) throw InputError("principal parts need integral exponents");
  PrincipalPart P;
  for (const auto& [n, c] : f.terms()) {
    if (n >= 0) break;
    P.terms.emplace(n, c);
  }
  return P;
}

void require_eps_polynomial(const SpaceSpec& spec, const PrincipalPart& P) {
  for (const auto& [n, c] : P.terms) {
    if (n >= 0) throw InputError("principal part carries the non-negative order " + std::to_string(n));
    if (c != 0 && !is_eps_integer(n, spec.N, spec.eps))
      throw InputError("order " + std::to_string(n) + " is not an eps-integer for " + spec.label());
  }
}

ObstructionResult obstruction_test(Engine& engine, const SpaceSpec& spec, const PrincipalPart& P) {
  if (spec.k > 0) throw InputError("obstructions are tested for k <= 0");
  require_eps_polynomial(spec, P);
  ObstructionResult res;
  if (P.empty()) return res;
  const auto wide = SpaceSpec::make(spec.N, spec.k, spec.eps, std::max(spec.trunc, -P.lowest() + 1));
  const auto dual = engine.dual_cusp_basis(wide);
  for (const auto& [d, g] : dual.forms) {
    Rational v = 0;
    for (const auto& [n, a] : P.terms) v += s_value(n, spec.N) * a * g.coeff(-n);
    if (v != 0) {
      res.pass = false;
      res.witness_order = d;
      res.witness = g;
      res.value = v;
      return res;
    }
  }
  return res;
}

Rational constant_term(const SpaceSpec& spec, const PrincipalPart& P) {
  require_eps_polynomial(spec, P);
  if (P.empty()) return 0;
  const std::int64_t trunc = -P.lowest() + 1;
  const QSeries B = eisenstein_eps(spec.N, 2 - spec.k, spec.chi(), dual_sign(spec.N, spec.eps), trunc);
  Rational a0 = 0;
  for (const auto& [n, a] : P.terms) a0 -= s_value(n, spec.N) * a * B.coeff(-n);
  return a0;
}

QSeries lift(Engine& engine, const SpaceSpec& spec, const PrincipalPart& P) {
  const auto obs = obstruction_test(engine, spec, P);
  if (!obs.pass)
    throw ObstructionError("principal part is obstructed by the dual form f'_" + std::to_string(obs.witness_order) +
                               " (pairing value " + to_string(obs.value) + ")",
                           obs);
  QSeries f = QSeries::zero(spec.trunc);
  if (P.empty()) return f;
  const auto basis = engine.canonical_basis(spec, P.lowest());
  for (const auto& [m, c] : P.terms)
    if (c != 0 && basis.has(m)) f.add_scaled(c * s_value(m, spec.N), basis.at(m).truncate(spec.trunc));
  auto got = PrincipalPart::of(f);
  std::erase_if(got.terms, [](const auto& t) { return t.second == 0; });
  auto want = P.terms;
  std::erase_if(want, [](const auto& t) { return t.second == 0; });
  if (got.terms != want)
    throw std::logic_error("lift does not reproduce an unobstructed principal part for " + spec.label());
  if (spec.trunc > 0 && f.coeff(0) != constant_term(spec, P))
    throw std::logic_error("lift disagrees with the constant-term formula for " + spec.label());
  return f;
}

DualityReport duality_check(Engine& engine, const SpaceSpec& spec, std::int64_t m_lo, std::int64_t m_hi,
                            std::int64_t d_lo, std::int64_t d_hi) {
  if (spec.k > 0) throw InputError("duality grids are checked from the k <= 0 side");
  m_hi = std::min<std::int64_t>(m_hi, -1);
  if (m_lo > m_hi || d_lo > d_hi) throw InputError("empty duality range");

  const SpaceSpec fs = SpaceSpec::make(spec.N, spec.k, spec.eps, std::max<std::int64_t>(1, -d_lo + 1));
  const SpaceSpec ds0 = spec.dual();
  const SpaceSpec gs = SpaceSpec::make(ds0.N, ds0.k, ds0.eps, std::max<std::int64_t>(1, -m_lo + 1));
  const auto F = engine.canonical_basis(fs, m_lo);
  const auto G = engine.canonical_basis(gs, std::min<std::int64_t>(d_lo, 0));

  DualityReport rep;
  rep.spec = spec;
  rep.m_lo = m_lo;
  rep.m_hi = m_hi;
  rep.d_lo = d_lo;
  rep.d_hi = d_hi;
  std::map<std::int64_t, bool> f_exists, g_exists;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    f_exists[m] = engine.existence(fs, m).exists;
    if (f_exists[m]) rep.f_orders.push_back(m);
  }
  for (std::int64_t d = d_lo; d <= d_hi; ++d) {
    g_exists[d] = engine.existence(gs, d).exists;
    if (g_exists[d]) rep.dual_orders.push_back(d);
  }

  for (auto m : rep.f_orders) {
    const QSeries& f = F.at(m);
    for (auto d : rep.dual_orders) {
      const QSeries& g = G.at(d);
      DualityIdentity id{m, d, f.coeff(-d), g.coeff(-m), false};
      id.holds = id.a == -id.b;
      if (!id.holds)
        rep.issues.push_back({"grid", m, d, 0, "a_m(-d) = " + to_string(id.a) + " but b_d(-m) = " + to_string(id.b)});
      rep.identities.push_back(std::move(id));
      for (std::int64_t n = d + 1; n < -m; ++n) {
        ++rep.vanishing_checked;
        if (f.coeff(-n) != 0 && g.coeff(n) != 0)
          rep.issues.push_back({"vanishing", m, d, n,
                                "a_m(" + std::to_string(-n) + ") = " + to_string(f.coeff(-n)) + " and b_d(" +
                                    std::to_string(n) + ") = " + to_string(g.coeff(n))});
      }
    }
  }

  // Nonzero non-leading coefficients must point at existing partners.
  for (auto m : rep.f_orders)
    for (std::int64_t d = d_lo; d <= d_hi; ++d) {
      if (-d <= m) continue;
      ++rep.cross_checked;
      if (F.at(m).coeff(-d) != 0 && !g_exists[d])
        rep.issues.push_back({"cross-existence", m, d, 0, "a_m(-d) != 0 but f'_d does not exist"});
    }
  for (auto d : rep.dual_orders)
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      if (-m <= d) continue;
      ++rep.cross_checked;
      if (G.at(d).coeff(-m) != 0 && !f_exists[m])
        rep.issues.push_back({"cross-existence", m, d, 0, "b_d(-m) != 0 but f_m does not exist"});
    }
  return rep;
}

} // namespace epsforms
