#include "epsforms/vvmf.hpp"

#include "epsforms/error.hpp"
#include "epsforms/spaces.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>

namespace epsforms {

namespace mp = boost::multiprecision;

namespace {

using Real = mp::number<mp::cpp_bin_float<200, mp::digit_base_2>>;
using Complex = mp::number<mp::complex_adaptor<mp::cpp_bin_float<200, mp::digit_base_2>>>;

Real to_real(const Rational& x) { return Real(x.get_num().get_str()) / Real(x.get_den().get_str()); }

const Real& two_pi() {
  static const Real v = 2 * boost::math::constants::pi<Real>();
  return v;
}

/// e(x) = exp(2 pi i x) for real x.
Complex e_of(const Real& x) { return Complex(mp::cos(two_pi() * x), mp::sin(two_pi() * x)); }

/// sum_n c_n x^n over the window of s, with x = exp(2 pi i tau / u).
struct Evaluation {
  Complex value;
  Real tail; // largest |c_n x^n| among the last u retained lattice indices
};

Evaluation evaluate(const QSeries& s, const Complex& x) {
  Evaluation ev{Complex(0), Real(0)};
  if (s.is_zero()) return ev;
  const auto win = s.window();
  Complex pw = mp::pow(x, static_cast<int>(s.lower()));
  const std::int64_t u = s.denom();
  for (std::size_t i = 0; i < win.size(); ++i) {
    if (win[i] != 0) {
      const Complex term = pw * to_real(win[i]);
      ev.value += term;
      if (static_cast<std::int64_t>(win.size() - i) <= u) ev.tail = std::max(ev.tail, Real(mp::abs(term)));
    }
    pw *= x;
  }
  return ev;
}

std::int64_t lattice_of(const DiscriminantForm& D) { return D.level(); }

void check_class(const QSeries& s, std::int64_t residue, std::int64_t u) {
  if (s.denom() != u) throw InputError("component lattice must be (1/" + std::to_string(u) + ")Z");
  for (const auto& [n, c] : s.terms())
    if (mod_floor(n, u) != residue)
      throw InputError("exponent " + std::to_string(n) + "/" + std::to_string(u) + " lies outside its class " +
                       std::to_string(residue) + "/" + std::to_string(u) + " + Z");
}

} // namespace

std::vector<QSeries> VVForm::element_view() const {
  std::vector<QSeries> out;
  for (const auto& g : D.elements_with_norms()) {
    auto it = components.find(g.residue);
    out.push_back(it == components.end() ? QSeries::zero(0, lattice) : it->second);
  }
  return out;
}

VVForm VVForm::from_elements(const DiscriminantForm& D, const std::vector<QSeries>& elems) {
  const auto els = D.elements_with_norms();
  if (els.size() != elems.size()) throw InputError("one series per element of D is required");
  VVForm F;
  F.D = D;
  F.lattice = lattice_of(D);
  for (std::size_t i = 0; i < els.size(); ++i) {
    check_class(elems[i], els[i].residue, F.lattice);
    auto [it, fresh] = F.components.emplace(els[i].residue, elems[i]);
    if (!fresh && !(it->second == elems[i]))
      throw InputError("elements of equal norm " + to_string(els[i].norm) + " carry different components");
  }
  return F;
}

VVForm psi(const QSeries& f, const DiscriminantForm& D) {
  const std::int64_t N = lattice_of(D);
  if (f.denom() != 1) throw InputError("psi expects a series in integral powers of q");
  if (!satisfies_eps(f, N, D.epsilon())) throw InputError("form does not satisfy the eps-condition of " + D.to_string());
  VVForm F;
  F.D = D;
  F.lattice = N;
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, Rational>>> split;
  for (const auto& [res, cnt] : D.residue_counts()) split[res];
  for (const auto& [n, c] : f.terms()) split[mod_floor(n, N)].emplace_back(n, c * s_value(n, N));
  for (auto& [res, terms] : split) F.components.emplace(res, QSeries::from_terms(terms, f.trunc(), N));
  return F;
}

QSeries phi(const VVForm& F) {
  const std::int64_t N = F.lattice;
  const auto counts = F.D.residue_counts();
  std::int64_t trunc = 0;
  bool first = true;
  std::vector<std::pair<std::int64_t, Rational>> terms;
  for (const auto& [res, s] : F.components) {
    if (!counts.contains(res)) {
      if (!s.is_zero()) throw InputError("component at residue " + std::to_string(res) + " is not a norm class of D");
      continue;
    }
    check_class(s, res, N);
    trunc = first ? s.trunc() : std::min(trunc, s.trunc());
    first = false;
    for (const auto& [n, c] : s.terms()) terms.emplace_back(n, c / s_value(n, N));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::erase_if(terms, [&](const auto& t) { return t.first >= trunc; });
  return QSeries::from_terms(terms, trunc);
}

Rational pairing(const VVForm& F, const VVForm& G) {
  if (F.lattice != G.lattice) throw InputError("lattice mismatch in pairing");
  const std::int64_t N = F.lattice;
  const auto cf = F.D.residue_counts();
  const auto cg = G.D.residue_counts();
  if (cf.size() != cg.size()) throw InputError("pairing needs G on the dual discriminant form");
  for (const auto& [res, cnt] : cf) {
    auto it = cg.find(mod_floor(-res, N));
    if (it == cg.end() || it->second != cnt) throw InputError("pairing needs G on the dual discriminant form");
  }
  Rational total = 0;
  for (const auto& [res, cnt] : cf) {
    auto fi = F.components.find(res);
    auto gi = G.components.find(mod_floor(-res, N));
    if (fi == F.components.end() || gi == G.components.end()) continue;
    if (fi->second.is_zero() || gi->second.is_zero()) continue;
    total += cnt * (fi->second * gi->second).coeff(0);
  }
  return total;
}

WeilCheckResult check_weil_transform(const VVForm& F, int k, std::complex<double> tau0, double tolerance) {
  if (tau0.imag() <= 0) throw InputError("sample point must lie in the upper half plane");
  const auto elems = F.D.elements_with_norms();
  const auto weil = F.D.weil_generators();
  const std::int64_t u = F.lattice;
  const Complex i(0, 1);
  const Complex tau(Real(tau0.real()), Real(tau0.imag()));
  const Complex tau_s = Complex(-1) / tau;

  auto nome = [&](const Complex& t) { return mp::exp(i * two_pi() * t / Real(u)); };
  const Complex x0 = nome(tau), xs = nome(tau_s), x1 = nome(tau + Complex(1));

  std::map<std::int64_t, Evaluation> at0, ats, at1;
  Real tail = 0;
  for (const auto& [res, s] : F.components) {
    at0[res] = evaluate(s, x0);
    ats[res] = evaluate(s, xs);
    at1[res] = evaluate(s, x1);
    tail = std::max({tail, at0[res].tail, ats[res].tail});
  }
  auto value = [&](std::map<std::int64_t, Evaluation>& m, std::int64_t res) {
    auto it = m.find(res);
    return it == m.end() ? Complex(0) : it->second.value;
  };

  // i^{-r/2} / sqrt|D|
  static const int re[4] = {1, 0, -1, 0}, im[4] = {0, -1, 0, 1};
  const Complex pre = Complex(re[weil.r_half_mod4], im[weil.r_half_mod4]) / mp::sqrt(Real(weil.order));
  const Complex tau_k = mp::pow(tau, -k);

  WeilCheckResult out;
  Real s_dev = 0, t_dev = 0, scale = 0;
  for (std::size_t b = 0; b < elems.size(); ++b) {
    const Complex lhs = tau_k * value(ats, elems[b].residue);
    Complex rhs = 0;
    for (std::size_t g = 0; g < elems.size(); ++g) rhs += e_of(to_real(weil.s_phase[b][g])) * value(at0, elems[g].residue);
    rhs *= pre;
    s_dev = std::max(s_dev, Real(mp::abs(lhs - rhs)));
    const Complex fb = value(at0, elems[b].residue);
    t_dev = std::max(t_dev, Real(mp::abs(value(at1, elems[b].residue) - e_of(to_real(weil.t_phase[b])) * fb)));
    scale = std::max(scale, Real(mp::abs(fb)));
  }
  out.s_deviation = static_cast<double>(s_dev);
  out.t_deviation = static_cast<double>(t_dev);
  out.tail_bound = static_cast<double>(tail);
  out.scale = static_cast<double>(scale);
  if (out.tail_bound > tolerance)
    throw PrecisionError("truncated components leave a tail of size " + std::to_string(out.tail_bound) +
                         " above the tolerance " + std::to_string(tolerance));
  return out;
}

} // namespace epsforms
