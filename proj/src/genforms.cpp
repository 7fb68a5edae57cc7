#include "epsforms/genforms.hpp"

#include "epsforms/error.hpp"
#include "epsforms/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epsforms {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::vector<Integer> int_mul(const std::vector<Integer>& a, const std::vector<Integer>& b, std::size_t len) {
  std::vector<Integer> out(len);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) continue;
    const std::size_t lim = std::min(len - i, b.size());
    for (std::size_t j = 0; j < lim; ++j)
      if (b[j] != 0) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

std::vector<Rational> to_rationals(const std::vector<Integer>& v) {
  std::vector<Rational> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

// sum_{d | n} psi(n/d) phi(d) d^{w-1} for 1 <= n < len (index 0 unused).
std::vector<Integer> twisted_divisor_sums(int w, const QuadChar& psi, const QuadChar& phi, std::int64_t len) {
  std::vector<Integer> out(static_cast<std::size_t>(std::max<std::int64_t>(len, 0)));
  Integer dp;
  for (std::int64_t d = 1; d < len; ++d) {
    const int fd = phi(d);
    if (fd == 0) continue;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(w - 1));
    for (std::int64_t e = 1; d * e < len; ++e) {
      const int pe = psi(e);
      if (pe == 0) continue;
      if (pe * fd > 0) out[static_cast<std::size_t>(d * e)] += dp;
      else out[static_cast<std::size_t>(d * e)] -= dp;
    }
  }
  return out;
}

} // namespace

std::vector<Integer> euler_power(std::int64_t r, std::int64_t trunc) {
  if (trunc <= 0) return {};
  const auto T = static_cast<std::size_t>(trunc);
  std::vector<Integer> sigma(T, 0);
  for (std::size_t d = 1; d < T; ++d)
    for (std::size_t m = d; m < T; m += d) sigma[m] += static_cast<unsigned long>(d);
  std::vector<Integer> c(T);
  c[0] = 1;
  Integer acc;
  const Integer rr = static_cast<long>(r);
  for (std::size_t n = 1; n < T; ++n) {
    acc = 0;
    for (std::size_t k = 1; k <= n; ++k)
      if (c[n - k] != 0) mpz_addmul(acc.get_mpz_t(), sigma[k].get_mpz_t(), c[n - k].get_mpz_t());
    acc *= -rr;
    mpz_divexact_ui(c[n].get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(n));
  }
  return c;
}

QSeries eta_expansion(std::int64_t delta, std::int64_t trunc) {
  if (delta < 1) throw InputError("eta_expansion needs delta >= 1");
  const std::int64_t lat_trunc = 24 * trunc;
  // lattice index of q^{delta/24} q^{delta n} is delta (1 + 24 n)
  const std::int64_t nterms = ceil_div(std::max<std::int64_t>(lat_trunc - delta, 0), 24 * delta);
  const auto c = euler_power(1, nterms);
  std::vector<std::pair<std::int64_t, Rational>> terms;
  for (std::int64_t n = 0; n < nterms; ++n)
    if (c[static_cast<std::size_t>(n)] != 0) terms.emplace_back(delta * (1 + 24 * n), Rational(c[static_cast<std::size_t>(n)]));
  if (terms.empty()) return QSeries::zero(lat_trunc, 24);
  return QSeries::from_terms(terms, lat_trunc, 24);
}

QSeries delta_series(std::int64_t trunc) { return EtaQuotient(std::map<std::int64_t, std::int64_t>{{1, 24}}).expansion(trunc); }

QSeries e4_series(std::int64_t trunc) {
  return eisenstein_general(4, QuadChar(), QuadChar(), 1, trunc) * Rational(240);
}

QSeries j_series(std::int64_t trunc) {
  // E4^3 / Delta: Delta = q(1 + ...), so E4^3 is needed to trunc + 1
  const QSeries e4 = e4_series(trunc + 1);
  return e4 * e4 * e4 * invert(delta_series(trunc + 1));
}

QSeries j_rescaled(std::int64_t N, std::int64_t trunc) { return rescale(j_series(ceil_div(trunc, N)), N); }

// ---------------------------------------------------------------------------

EtaQuotient::EtaQuotient(std::map<std::int64_t, std::int64_t> exponents) {
  for (auto [d, r] : exponents) {
    if (d < 1) throw InputError("eta quotient divisors must be positive");
    if (r != 0) r_[d] = r;
  }
}

std::int64_t EtaQuotient::weight2() const {
  std::int64_t s = 0;
  for (auto [d, r] : r_) s += r;
  return s;
}

std::int64_t EtaQuotient::order24() const {
  std::int64_t s = 0;
  for (auto [d, r] : r_) s += d * r;
  return s;
}

Rational EtaQuotient::cusp_order(std::int64_t N, std::int64_t c) const {
  Rational s = 0;
  for (auto [d, r] : r_) {
    const std::int64_t g = std::gcd(c, d);
    s += Rational(g * g * r, std::gcd(c, N / c) * c * d);
  }
  s *= Rational(N, 24);
  s.canonicalize();
  return s;
}

bool EtaQuotient::level_conditions(std::int64_t N) const {
  if (weight2() % 2 != 0) return false;
  std::int64_t a = 0, b = 0;
  for (auto [d, r] : r_) {
    if (N % d != 0) return false;
    a += d * r;
    b += (N / d) * r;
  }
  return mod_floor(a, 24) == 0 && mod_floor(b, 24) == 0;
}

bool EtaQuotient::holomorphic_on(std::int64_t N) const {
  for (auto c : divisors(N))
    if (cusp_order(N, c) < 0) return false;
  return true;
}

std::optional<QuadChar> EtaQuotient::character(std::int64_t N) const {
  const std::int64_t w = weight2() / 2;
  // squarefree kernel of (-1)^w prod delta^{r_delta}
  std::map<std::int64_t, std::int64_t> pe;
  for (auto [d, r] : r_)
    for (auto [p, e] : factorize(d)) pe[p] += e * r;
  std::int64_t D0 = (w % 2 == 0) ? 1 : -1;
  for (auto [p, e] : pe)
    if (mod_floor(e, 2) == 1) D0 *= p;
  for (const auto& psi : quadratic_characters_dividing(N)) {
    bool ok = true;
    for (std::int64_t d = 1; d <= 8 * N && ok; ++d) {
      if (std::gcd(d, N) != 1) continue;
      ok = psi(d) == kronecker(D0, d);
    }
    if (ok) return psi;
  }
  return std::nullopt;
}

QSeries EtaQuotient::expansion(std::int64_t trunc) const {
  const std::int64_t o24 = order24();
  if (o24 % 24 != 0) throw InputError("eta quotient " + label() + " has non-integral order at infinity");
  const std::int64_t v = o24 / 24;
  if (trunc <= v) return QSeries::zero(trunc);
  const auto len = static_cast<std::size_t>(trunc - v);
  std::vector<Integer> acc(len);
  acc[0] = 1;
  for (auto [d, r] : r_) {
    const auto base = euler_power(r, ceil_div(static_cast<std::int64_t>(len), d));
    std::vector<Integer> f(len);
    for (std::size_t i = 0; i < base.size() && i * static_cast<std::size_t>(d) < len; ++i)
      f[i * static_cast<std::size_t>(d)] = base[i];
    acc = int_mul(acc, f, len);
  }
  return QSeries(1, v, trunc, to_rationals(acc));
}

std::string EtaQuotient::label() const {
  std::string s;
  for (auto [d, r] : r_) {
    if (!s.empty()) s += " ";
    s += "eta(" + (d == 1 ? std::string() : std::to_string(d)) + "t)^" + std::to_string(r);
  }
  return s.empty() ? "1" : s;
}

EtaQuotient EtaQuotient::operator*(const EtaQuotient& o) const {
  auto r = r_;
  for (auto [d, e] : o.r_) r[d] += e;
  return EtaQuotient(r);
}

EtaQuotient EtaQuotient::pow(std::int64_t e) const {
  auto r = r_;
  for (auto& [d, x] : r) x *= e;
  return EtaQuotient(r);
}

// ---------------------------------------------------------------------------

QSeries eisenstein_general(int w, const QuadChar& psi, const QuadChar& phi, std::int64_t t, std::int64_t trunc) {
  if (w < 1) throw InputError("Eisenstein series need weight >= 1");
  if (t < 1) throw InputError("Eisenstein rescaling t must be positive");
  if (w == 2 && psi.is_trivial() && phi.is_trivial()) {
    if (t == 1) throw InputError("E_2 is not holomorphic; use t > 1");
    // -1/24 + sum sigma(n) q^n, combined as E(tau) - t E(t tau)
    const auto sig = twisted_divisor_sums(2, psi, phi, trunc);
    std::vector<Rational> cs(static_cast<std::size_t>(trunc));
    if (trunc > 0) cs[0] = Rational(t - 1, 24);
    for (std::int64_t n = 1; n < trunc; ++n) {
      cs[static_cast<std::size_t>(n)] += Rational(sig[static_cast<std::size_t>(n)]);
      if (n * t < trunc) cs[static_cast<std::size_t>(n * t)] -= Rational(t) * Rational(sig[static_cast<std::size_t>(n)]);
    }
    return QSeries(1, 0, trunc, std::move(cs));
  }
  const std::int64_t len = ceil_div(trunc, t);
  auto sums = twisted_divisor_sums(w, psi, phi, len);
  Rational c0 = 0;
  if (psi.is_trivial()) c0 += -gen_bernoulli(w, phi) / w;
  if (w == 1 && phi.is_trivial()) c0 += -gen_bernoulli(1, psi);
  c0 /= 2;
  std::vector<Rational> cs(static_cast<std::size_t>(trunc));
  if (trunc > 0) cs[0] = c0;
  for (std::int64_t n = 1; n < len; ++n) cs[static_cast<std::size_t>(n * t)] = Rational(sums[static_cast<std::size_t>(n)]);
  return QSeries(1, 0, trunc, std::move(cs));
}

QSeries eisenstein_Em(std::int64_t N, int w, const QuadChar& chi, std::int64_t m, std::int64_t trunc) {
  if (w < 2) throw InputError("E_m needs weight >= 2");
  if (N % m != 0 || full_part(N, m) != m) throw InputError("E_m needs m = N_m");
  return Rational(2) * eisenstein_general(w, chi.restrict_to(m), chi.restrict_to(N / m), 1, trunc);
}

QSeries eisenstein_eps(std::int64_t N, int w, const QuadChar& chi, const std::map<std::int64_t, int>& eps,
                       std::int64_t trunc) {
  const Rational L = l_value(w, chi);
  if (L == 0) throw std::logic_error("vanishing L-value in E^eps normalization");
  QSeries acc = QSeries::zero(trunc);
  for (auto m : divisors_full_parts(N)) {
    int em = 1;
    for (auto p : prime_divisors(m)) em *= eps.at(p);
    acc.add_scaled(Rational(em), eisenstein_Em(N, w, chi, m, trunc));
  }
  return acc * (1 / (Rational(s_value(0, N)) * L));
}

std::int64_t gamma0_index(std::int64_t N) {
  std::int64_t idx = N;
  for (auto p : prime_divisors(N)) idx = idx / p * (p + 1);
  return idx;
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> reduce_mod(const QSeries& s, std::int64_t len, std::uint32_t p) {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(len), 0);
  const Integer P = p;
  Integer a, b;
  for (std::int64_t e = std::max<std::int64_t>(s.lower(), 0); e < len; ++e) {
    const Rational c = s.coeff(e);
    if (c == 0) continue;
    mpz_fdiv_r(a.get_mpz_t(), c.get_num_mpz_t(), P.get_mpz_t());
    mpz_fdiv_r(b.get_mpz_t(), c.get_den_mpz_t(), P.get_mpz_t());
    if (b == 0) throw std::domain_error("denominator divisible by the screening prime");
    out[static_cast<std::size_t>(e)] =
        kernels::mul_mod(static_cast<std::uint32_t>(a.get_ui()), kernels::inv_mod(static_cast<std::uint32_t>(b.get_ui()), p), p);
  }
  return out;
}

std::vector<std::uint32_t> mul_mod_series(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                          std::uint32_t p) {
  const std::size_t len = std::min(a.size(), b.size());
  std::vector<std::uint32_t> out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    kernels::axpy_mod(std::span(out).subspan(i), a[i], std::span<const std::uint32_t>(b).first(len - i), p);
  }
  return out;
}

bool ModpEchelon::insert(std::vector<std::uint32_t> v) {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint32_t c = v[pivots_[r]];
    if (c == 0) continue;
    kernels::axpy_mod(v, p_ - c, rows_[r], p_);
  }
  std::size_t piv = 0;
  while (piv < v.size() && v[piv] == 0) ++piv;
  if (piv == v.size()) return false;
  const std::uint32_t inv = kernels::inv_mod(v[piv], p_);
  for (auto& x : v) x = kernels::mul_mod(x, inv, p_);
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

// ---------------------------------------------------------------------------

FormFactory::FormFactory(std::int64_t N, std::int64_t prec, int eta_bound) : N_(N), prec_(prec), eta_bound_(eta_bound) {
  if (N < 1) throw InputError("level must be positive");
  if (prec < 1) throw InputError("precision must be positive");
}

void FormFactory::inject(const std::string& label, int weight, const QuadChar& chi, const QSeries& series) {
  if (series.denom() != 1 || (!series.is_zero() && series.lower() < 0))
    throw InputError("injected generator '" + label + "' must be a holomorphic q-series");
  if (series.trunc() < prec_)
    throw InputError("injected generator '" + label + "' is known only to q^" + std::to_string(series.trunc()));
  injected_.push_back({label, weight, chi, series.truncate(prec_)});
  built_ = false;
  prims_.clear();
  nodes_.clear();
  modp_.clear();
  exact_.clear();
  bases_.clear();
}

std::vector<EtaQuotient> FormFactory::eta_quotients(int w, const QuadChar& psi) const {
  const auto divs = divisors(N_);
  std::int64_t R = eta_bound_;
  while (R > 1) {
    double combos = std::pow(2.0 * static_cast<double>(R) + 1, static_cast<double>(divs.size()) - 1);
    if (combos <= 2e5) break;
    --R;
  }
  std::vector<EtaQuotient> out;
  std::vector<std::int64_t> r(divs.size(), -R);
  if (divs.size() == 1) return out;
  while (true) {
    std::int64_t partial = 0;
    for (std::size_t i = 0; i + 1 < divs.size(); ++i) partial += r[i];
    const std::int64_t last = 2 * w - partial;
    if (std::llabs(last) <= R) {
      std::map<std::int64_t, std::int64_t> ex;
      for (std::size_t i = 0; i + 1 < divs.size(); ++i) ex[divs[i]] = r[i];
      ex[divs.back()] = last;
      EtaQuotient q(ex);
      if (q.level_conditions(N_) && q.holomorphic_on(N_)) {
        auto c = q.character(N_);
        if (c && *c == psi) out.push_back(q);
      }
    }
    std::size_t i = 0;
    while (i + 1 < divs.size()) {
      if (++r[i] <= R) break;
      r[i] = -R;
      ++i;
    }
    if (i + 1 == divs.size()) break;
  }
  return out;
}

void FormFactory::build_primitives() {
  if (built_) return;
  built_ = true;
  const auto chars = quadratic_characters_dividing(N_);
  // Eisenstein series are created on demand in basis_nodes; eta quotients of
  // small weight are enumerated here once.
  for (int w = 1; w <= 4; ++w)
    for (const auto& psi : chars) {
      if (psi(-1) != (w % 2 == 0 ? 1 : -1)) continue;
      for (const auto& q : eta_quotients(w, psi)) prims_.push_back({q.label(), w, psi, q.expansion(prec_)});
    }
  for (const auto& inj : injected_) prims_.push_back(inj);
  fixed_prims_ = prims_.size();
}

const std::vector<Primitive>& FormFactory::primitives() {
  build_primitives();
  return prims_;
}

int FormFactory::add_node(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

const std::vector<std::uint32_t>& FormFactory::modp(int node) {
  if (auto it = modp_.find(node); it != modp_.end()) return it->second;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  std::vector<std::uint32_t> v;
  if (n.prim >= 0) v = reduce_mod(prims_[static_cast<std::size_t>(n.prim)].series, prec_, kernels::kScreenPrime);
  else v = mul_mod_series(modp(n.left), modp(n.right), kernels::kScreenPrime);
  return modp_.emplace(node, std::move(v)).first->second;
}

const QSeries& FormFactory::exact(int node) {
  if (auto it = exact_.find(node); it != exact_.end()) return it->second;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  QSeries s;
  if (n.prim >= 0) s = prims_[static_cast<std::size_t>(n.prim)].series;
  else s = (exact(n.left) * exact(n.right)).truncate(prec_);
  return exact_.emplace(node, std::move(s)).first->second;
}

const std::vector<int>& FormFactory::basis_nodes(int w, const QuadChar& psi) {
  const auto key = std::make_pair(w, psi.label());
  if (auto it = bases_.find(key); it != bases_.end()) return it->second;
  build_primitives();
  std::vector<int> chosen;
  if (w < 1 || psi(-1) != (w % 2 == 0 ? 1 : -1) || N_ % psi.modulus() != 0)
    return bases_.emplace(key, chosen).first->second;

  ModpEchelon ech(kernels::kScreenPrime);
  auto offer = [&](int node) {
    if (ech.insert(modp(node))) chosen.push_back(node);
    else modp_.erase(node);
  };

  // Eisenstein series of weight w and character psi.
  const auto chars = quadratic_characters_dividing(N_);
  for (const auto& a : chars)
    for (const auto& b : chars) {
      if (!(a * b == psi)) continue;
      const std::int64_t cc = a.modulus() * b.modulus();
      if (std::gcd(a.modulus(), b.modulus()) != 1 || N_ % cc != 0) continue;
      for (auto t : divisors(N_ / cc)) {
        if (w == 2 && a.is_trivial() && b.is_trivial() && t == 1) continue;
        const std::string label =
            "E" + std::to_string(w) + "[" + a.label() + "," + b.label() + "](" + std::to_string(t) + "t)";
        prims_.push_back({label, w, psi, eisenstein_general(w, a, b, t, prec_)});
        offer(add_node({label, w, psi, static_cast<int>(prims_.size()) - 1, -1, -1}));
      }
    }
  // Eta quotients and injected forms of this weight and character.
  for (std::size_t i = 0; i < fixed_prims_; ++i) {
    const auto& pr = prims_[i];
    if (pr.weight != w || !(pr.chi == psi)) continue;
    offer(add_node({pr.label, w, psi, static_cast<int>(i), -1, -1}));
  }
  // Products of lower-weight bases.
  const int max_factor = w <= 4 ? w / 2 : 2;
  for (int w1 = 1; w1 <= max_factor; ++w1)
    for (const auto& c1 : chars) {
      const auto& small = basis_nodes(w1, c1);
      if (small.empty()) continue;
      const auto big = basis_nodes(w - w1, psi * c1); // copy: the map may rehash
      for (int b : big)
        for (int s : small) {
          const auto& nb = nodes_[static_cast<std::size_t>(b)];
          const auto& ns = nodes_[static_cast<std::size_t>(s)];
          offer(add_node({"(" + nb.label + ")*(" + ns.label + ")", w, psi, -1, b, s}));
        }
    }
  return bases_.emplace(key, chosen).first->second;
}

std::vector<QSeries> FormFactory::basis(int w, const QuadChar& psi) {
  std::vector<QSeries> out;
  for (int n : basis_nodes(w, psi)) out.push_back(exact(n));
  return out;
}

std::vector<std::string> FormFactory::basis_labels(int w, const QuadChar& psi) {
  std::vector<std::string> out;
  for (int n : basis_nodes(w, psi)) out.push_back(nodes_[static_cast<std::size_t>(n)].label);
  return out;
}

} // namespace epsforms
