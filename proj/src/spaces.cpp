#include "epsforms/spaces.hpp"

#include "epsforms/error.hpp"
#include "epsforms/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace epsforms {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::string eps_key(const SignVector& eps) { return render(eps); }

} // namespace

SpaceSpec SpaceSpec::make(std::int64_t N, int k, const SignVector& eps, std::int64_t trunc) {
  if (N <= 1) throw InputError("spaces need level N > 1");
  const DiscriminantForm D = DiscriminantForm::build_from(N, eps);
  if (!D.supports_spaces()) throw InputError("spaces need the 2-part of N to be 1 or 4");
  if (k == 1) throw InputError("weight k = 1 is not supported");
  const int half = D.signature() / 2;
  if (mod_floor(k - half, 2) != 0)
    throw InputError("weight " + std::to_string(k) + " has the wrong parity: need k = r/2 = " + std::to_string(half) +
                     " mod 2");
  if (trunc < 1) throw InputError("truncation must be positive");
  SpaceSpec s;
  s.N = N;
  s.k = k;
  s.eps = eps;
  s.trunc = trunc;
  return s;
}

SignVector dual_sign(std::int64_t N, const SignVector& eps) {
  const QuadChar chi = QuadChar::for_level(N);
  SignVector out;
  for (auto [p, e] : eps) out[p] = chi.local(p, -1) * e;
  return out;
}

SpaceSpec SpaceSpec::dual() const { return make(N, 2 - k, dual_sign(N, eps), trunc); }

std::string SpaceSpec::label() const {
  return "N=" + std::to_string(N) + " k=" + std::to_string(k) + " eps=" + render(eps);
}

bool is_eps_integer(std::int64_t n, std::int64_t N, const SignVector& eps) {
  const QuadChar chi = QuadChar::for_level(N);
  for (auto [p, e] : eps)
    if (chi.local(p, n) == -e) return false;
  return true;
}

bool satisfies_eps(const QSeries& f, std::int64_t N, const SignVector& eps) {
  if (f.denom() != 1) return false;
  for (const auto& [n, c] : f.terms())
    if (!is_eps_integer(n, N, eps)) return false;
  return true;
}

std::vector<QSeries> epsilon_subspace(const std::vector<QSeries>& forms, std::int64_t N, const SignVector& eps,
                                      std::int64_t impose_cutoff, std::int64_t verify_to) {
  if (forms.empty()) return {};
  std::int64_t lo = forms.front().lower(), top = forms.front().trunc();
  for (const auto& f : forms) {
    lo = std::min(lo, f.lower());
    top = std::min(top, f.trunc());
  }
  if (verify_to > top) throw PrecisionError("epsilon verification needs the span known below q^" + std::to_string(verify_to));
  impose_cutoff = std::min(impose_cutoff, top);
  RMatrix a;
  for (std::int64_t n = lo; n < impose_cutoff; ++n) {
    if (is_eps_integer(n, N, eps)) continue;
    std::vector<Rational> row(forms.size());
    bool any = false;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      row[i] = forms[i].coeff(n);
      any = any || row[i] != 0;
    }
    if (any) a.push_back(std::move(row));
  }
  const RMatrix null = nullspace(std::move(a), forms.size());
  std::vector<QSeries> out;
  for (const auto& x : null) {
    QSeries f = QSeries::zero(top);
    for (std::size_t i = 0; i < forms.size(); ++i) f.add_scaled(x[i], forms[i]);
    for (std::int64_t n = std::max(lo, f.lower()); n < verify_to; ++n)
      if (!is_eps_integer(n, N, eps) && f.coeff(n) != 0)
        throw SpanningError("epsilon-subspace fails verification at q^" + std::to_string(n) +
                            ": the spanning set is incomplete or the constraint cutoff too low");
    out.push_back(std::move(f));
  }
  return out;
}

std::map<std::int64_t, QSeries> echelonize(const std::vector<QSeries>& forms, std::int64_t N) {
  std::map<std::int64_t, QSeries> out;
  if (forms.empty()) return out;
  std::int64_t lo = forms.front().lower(), top = forms.front().trunc();
  for (const auto& f : forms) {
    if (f.denom() != 1) throw InputError("echelonize needs integral exponents");
    lo = std::min(lo, f.lower());
    top = std::min(top, f.trunc());
  }
  if (top <= lo) throw PrecisionError("echelonize: empty common window");
  RMatrix rows;
  for (const auto& f : forms) {
    std::vector<Rational> row(static_cast<std::size_t>(top - lo));
    for (std::int64_t n = std::max(lo, f.lower()); n < top; ++n) row[static_cast<std::size_t>(n - lo)] = f.coeff(n);
    rows.push_back(std::move(row));
  }
  const auto piv = rref(rows);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    const std::int64_t m = lo + static_cast<std::int64_t>(piv[i]);
    const Rational scale(1, s_value(m, N));
    if (scale != 1)
      for (auto& c : rows[i])
        if (c != 0) c *= scale;
    out.emplace(m, QSeries(1, lo, top, std::move(rows[i])));
  }
  return out;
}

const QSeries& ReducedBasis::at(std::int64_t m) const {
  auto it = forms.find(m);
  if (it == forms.end()) throw InputError("no reduced form of order " + std::to_string(m) + " in " + spec.label());
  return it->second;
}

std::vector<std::int64_t> ReducedBasis::orders() const {
  std::vector<std::int64_t> out;
  for (const auto& [m, f] : forms) out.push_back(m);
  return out;
}

std::int64_t gamma0_sturm(std::int64_t N, int w) { return ceil_div(static_cast<std::int64_t>(w) * gamma0_index(N), 12); }

// ---------------------------------------------------------------------------

void Engine::inject(std::int64_t N, const std::string& label, int weight, const QuadChar& chi, const QSeries& series) {
  injected_[N].push_back({label, weight, chi, series});
  factories_.erase(N);
  hol_cache_.clear();
  basis_cache_.clear();
}

FormFactory& Engine::factory(std::int64_t N, std::int64_t prec) {
  auto it = factories_.find(N);
  if (it == factories_.end() || it->second->precision() < prec) {
    auto f = std::make_unique<FormFactory>(N, prec, eta_bound_);
    for (const auto& inj : injected_[N]) f->inject(inj.label, inj.weight, inj.chi, inj.series);
    it = factories_.insert_or_assign(N, std::move(f)).first;
  }
  return *it->second;
}

std::map<std::int64_t, QSeries> Engine::holomorphic_eps_basis(std::int64_t N, int w, const SignVector& eps,
                                                              std::int64_t prec) {
  const std::int64_t sturm = gamma0_sturm(N, w);
  prec = std::max(prec, 4 * (sturm + 1));
  const std::string key = std::to_string(N) + "/" + std::to_string(w) + "/" + eps_key(eps) + "/" + std::to_string(prec);
  if (auto it = hol_cache_.find(key); it != hol_cache_.end()) return it->second;
  auto& fac = factory(N, prec);
  std::vector<QSeries> gens;
  for (auto& g : fac.basis(w, QuadChar::for_level(N))) gens.push_back(g.truncate(prec));
  auto sub = epsilon_subspace(gens, N, eps, std::min(2 * (sturm + 1), prec), prec);
  auto ech = echelonize(sub, N);
  return hol_cache_.emplace(key, std::move(ech)).first->second;
}

ReducedBasis Engine::dual_cusp_basis(const SpaceSpec& spec) {
  if (spec.k > 0) throw InputError("dual cusp basis needs k <= 0");
  const SpaceSpec d = spec.dual();
  ReducedBasis out;
  out.spec = d;
  out.lowest = 1;
  out.holomorphic_weight = d.k;
  const std::int64_t prec = std::max<std::int64_t>(d.trunc, 4 * (gamma0_sturm(d.N, d.k) + 1));
  out.working_precision = prec;
  for (auto& [m, f] : holomorphic_eps_basis(d.N, d.k, d.eps, prec))
    if (m > 0) out.forms.emplace(m, f);
  return out;
}

std::int64_t Engine::m_epsilon(const SpaceSpec& spec) {
  const auto b = dual_cusp_basis(spec);
  return b.forms.empty() ? 0 : b.forms.rbegin()->first;
}

ExistenceEntry Engine::existence(const SpaceSpec& spec, std::int64_t m) {
  if (!is_eps_integer(m, spec.N, spec.eps))
    return {m, false, "not an eps-integer"};
  if (spec.k >= 2) {
    if (m <= 0) return {m, true, "eps-integer of non-positive order"};
    const auto hol = holomorphic_eps_basis(spec.N, spec.k, spec.eps, 0);
    return hol.contains(m) ? ExistenceEntry{m, true, "pivot of the holomorphic eps-basis"}
                           : ExistenceEntry{m, false, "not a pivot of the holomorphic eps-basis"};
  }
  if (m >= 0) return {m, false, "no holomorphic forms of weight k <= 0 with this character"};
  const auto dual = dual_cusp_basis(spec);
  if (dual.has(-m))
    return {m, false, "obstructed by the dual cusp form f'_" + std::to_string(-m)};
  return {m, true, "eps-integer, -m not a dual cusp pivot"};
}

ReducedBasis Engine::canonical_basis(const SpaceSpec& spec, std::int64_t m_min) {
  const std::string key = spec.label() + "/" + std::to_string(spec.trunc) + "/" + std::to_string(m_min);
  if (auto it = basis_cache_.find(key); it != basis_cache_.end()) return it->second;

  const std::int64_t N = spec.N;
  const int w = spec.k;
  std::int64_t base = 0; // lowest order the Delta-reduction covers by itself
  std::int64_t L0 = 0;
  if (w >= 2) {
    if (m_min < 0) {
      base = -N;
      L0 = 1;
    }
  } else {
    base = -N - m_epsilon(spec);
    L0 = ceil_div(-base, N);
    while (w + 12 * L0 < 2) ++L0;
  }
  const std::int64_t ext = m_min < base ? ceil_div(base - m_min, N) : 0;
  const int W = w + 12 * static_cast<int>(L0);
  const std::int64_t sturm = gamma0_sturm(N, W);
  const std::int64_t prec = std::max(spec.trunc + N * (L0 + ext), 4 * (sturm + 1));

  auto hol = holomorphic_eps_basis(N, W, spec.eps, prec);
  std::vector<QSeries> gens;
  if (L0 > 0) {
    const QSeries dn = rescale(delta_series(ceil_div(prec + N * L0, N) + 1), N);
    const QSeries inv = invert(pow(dn, L0));
    for (auto& [m, g] : hol) gens.push_back(g * inv);
  } else {
    for (auto& [m, g] : hol) gens.push_back(g);
  }
  auto forms = echelonize(gens, N);
  if (ext > 0) {
    std::vector<QSeries> all;
    for (auto& [m, f] : forms) all.push_back(f);
    const QSeries j = j_rescaled(N, prec + N);
    QSeries jp = j;
    for (std::int64_t i = 1; i <= ext; ++i) {
      for (auto& [m, f] : forms)
        if (m >= base && m < base + N) all.push_back(f * jp);
      if (i < ext) jp = jp * j;
    }
    forms = echelonize(all, N);
  }

  ReducedBasis out;
  out.spec = spec;
  out.lowest = m_min;
  out.holomorphic_weight = W;
  out.working_precision = prec;
  for (auto& [m, f] : forms) {
    if (m < m_min) continue;
    if (f.trunc() < spec.trunc)
      throw PrecisionError("form f_" + std::to_string(m) + " known only below q^" + std::to_string(f.trunc()));
    if (!satisfies_eps(f, N, spec.eps)) throw SpanningError("f_" + std::to_string(m) + " violates the eps-condition");
    out.forms.emplace(m, std::move(f));
  }

  // Completeness alarm: the pivots must be exactly the predicted orders.
  const std::int64_t hi = w >= 2 ? 0 : -1;
  std::vector<std::int64_t> missing, extra;
  for (std::int64_t m = m_min; m <= hi; ++m) {
    auto e = existence(spec, m);
    out.ledger.push_back(e);
    if (e.exists && !out.has(m)) missing.push_back(m);
    if (!e.exists && out.has(m)) extra.push_back(m);
  }
  if (w <= 0)
    for (auto& [m, f] : out.forms)
      if (m >= 0) extra.push_back(m);
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream os;
    os << "pivot set disagrees with the existence prediction for " << spec.label() << ":";
    for (auto m : missing) os << " missing f_" << m;
    for (auto m : extra) os << " unexpected f_" << m;
    throw SpanningError(os.str());
  }
  for (auto& [m, f] : out.forms)
    if (m > hi) out.ledger.push_back({m, true, "pivot of the holomorphic eps-basis"});
  return basis_cache_.emplace(key, std::move(out)).first->second;
}

} // namespace epsforms
