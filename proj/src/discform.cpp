#include "epsforms/discform.hpp"

#include "epsforms/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

namespace epsforms {

namespace {

Rational frac_part(const Rational& x) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rational(fl);
}

std::string signed_unit(int v) { return v > 0 ? "+1" : "-1"; }

std::string signed_int(int v) { return v > 0 ? "+" + std::to_string(v) : std::to_string(v); }

} // namespace

std::int64_t odd_generator_numerator(std::int64_t p, int delta) {
  for (std::int64_t a = 1; a < p; ++a)
    if (kronecker(2 * a, p) == delta) return a;
  throw std::logic_error("no generator norm for p^delta");
}

std::int64_t component_prime(const JordanComponent& c) {
  if (const auto* o = std::get_if<OddComponent>(&c)) return o->p;
  return 2;
}

std::int64_t component_level(const JordanComponent& c) {
  if (const auto* o = std::get_if<OddComponent>(&c)) return o->p;
  if (std::holds_alternative<EvenTwoComponent>(c)) return 4;
  return 8;
}

std::string render(const JordanComponent& c) {
  if (const auto* o = std::get_if<OddComponent>(&c)) return std::to_string(o->p) + "^" + signed_unit(o->delta);
  if (const auto* e = std::get_if<EvenTwoComponent>(&c)) return "2_" + std::to_string(e->t) + "^+2";
  const auto& pr = std::get<OddTwoPair>(c);
  return "2_" + std::to_string(pr.t1) + "^+1 + 4_" + std::to_string(pr.t2) + "^" + signed_unit(pr.delta2());
}

std::string render(const SignVector& eps) {
  std::string s = "(";
  bool first = true;
  for (auto [p, e] : eps) {
    if (!first) s += ",";
    first = false;
    s += signed_int(e);
  }
  return s + ")";
}

SignVector parse_sign_vector(std::int64_t N, const std::string& text) {
  const auto primes = prime_divisors(N);
  std::vector<int> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item == "+1" || item == "1" || item == "+") vals.push_back(1);
    else if (item == "-1" || item == "-") vals.push_back(-1);
    else if (!item.empty()) throw InputError("epsilon entries must be +1 or -1, got '" + item + "'");
  }
  if (vals.size() != primes.size())
    throw InputError("epsilon needs " + std::to_string(primes.size()) + " entries (one per prime of " +
                     std::to_string(N) + ")");
  SignVector eps;
  for (std::size_t i = 0; i < primes.size(); ++i) eps[primes[i]] = vals[i];
  return eps;
}

// ---------------------------------------------------------------------------

DiscriminantForm::DiscriminantForm(std::vector<JordanComponent> components) : comps_(std::move(components)) {
  std::sort(comps_.begin(), comps_.end(),
            [](const auto& a, const auto& b) { return component_prime(a) < component_prime(b); });
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto p = component_prime(comps_[i]);
    if (i > 0 && component_prime(comps_[i - 1]) == p) throw InputError("at most one Jordan component per prime");
    if (const auto* o = std::get_if<OddComponent>(&comps_[i])) {
      if (o->p < 3 || prime_divisors(o->p) != std::vector<std::int64_t>{o->p})
        throw InputError("odd component needs an odd prime");
      if (o->delta != 1 && o->delta != -1) throw InputError("delta must be +1 or -1");
    } else if (const auto* e = std::get_if<EvenTwoComponent>(&comps_[i])) {
      if (e->t != 2 && e->t != -2) throw InputError("2_t^+2 needs t in {+2, -2}");
    } else {
      const auto& pr = std::get<OddTwoPair>(comps_[i]);
      if (pr.t1 != 1 && pr.t1 != -1) throw InputError("2_t1^+1 needs t1 in {+1, -1}");
      if (pr.t2 != 1 && pr.t2 != -1 && pr.t2 != 3 && pr.t2 != -3) throw InputError("4_t2 needs t2 in {+-1, +-3}");
    }
  }
  level_ = 1;
  for (const auto& c : comps_) level_ *= component_level(c);
  order_ = level_;
}

int DiscriminantForm::signature() const {
  int excess = 0, oddity = 0;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) {
      excess += static_cast<int>((o->p - 1) % 8) + (o->delta == -1 ? 4 : 0);
    } else if (const auto* e = std::get_if<EvenTwoComponent>(&c)) {
      oddity += e->t;
    } else {
      const auto& pr = std::get<OddTwoPair>(c);
      oddity += pr.t1 + pr.t2;
    }
  }
  return static_cast<int>(mod_floor(oddity - excess, 8));
}

QuadChar DiscriminantForm::chi() const {
  std::map<std::int64_t, LocalChar> comps;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) comps[o->p] = LocalChar::legendre;
    else if (std::holds_alternative<EvenTwoComponent>(c)) comps[2] = LocalChar::minus4;
    else {
      const auto& pr = std::get<OddTwoPair>(c);
      const int a = kronecker(-1, pr.t1 * pr.t2);
      comps[2] = a == 1 ? LocalChar::minus8 : LocalChar::plus8; // (-2a|.)
    }
  }
  return QuadChar(std::move(comps));
}

SignVector DiscriminantForm::epsilon() const {
  const QuadChar chi_d = chi();
  const std::int64_t N = level_;
  SignVector eps;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) {
      eps[o->p] = chi_d.local(o->p, 2 * N / o->p) * o->delta;
    } else if (const auto* e = std::get_if<EvenTwoComponent>(&c)) {
      eps[2] = chi_d.local(2, (N / 4) * (e->t / 2));
    } else {
      const auto& pr = std::get<OddTwoPair>(c);
      eps[2] = chi_d.local(2, pr.t2 * (N / 8));
    }
  }
  return eps;
}

DiscriminantForm DiscriminantForm::dual() const {
  std::vector<JordanComponent> out;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) out.push_back(OddComponent{o->p, kronecker(-1, o->p) * o->delta});
    else if (const auto* e = std::get_if<EvenTwoComponent>(&c)) out.push_back(EvenTwoComponent{-e->t});
    else {
      const auto& pr = std::get<OddTwoPair>(c);
      out.push_back(OddTwoPair{-pr.t1, -pr.t2});
    }
  }
  return DiscriminantForm(std::move(out));
}

bool DiscriminantForm::supports_spaces() const {
  return std::none_of(comps_.begin(), comps_.end(),
                      [](const auto& c) { return std::holds_alternative<OddTwoPair>(c); });
}

DiscriminantForm DiscriminantForm::build_from(std::int64_t N, const SignVector& eps) {
  if (N < 1) throw InputError("level must be positive");
  const QuadChar chi = QuadChar::for_level(N); // validates the level shape
  const auto primes = prime_divisors(N);
  for (auto p : primes)
    if (!eps.contains(p)) throw InputError("epsilon has no entry for p = " + std::to_string(p));
  if (eps.size() != primes.size()) throw InputError("epsilon has entries for primes not dividing the level");
  for (auto [p, e] : eps)
    if (e != 1 && e != -1) throw InputError("epsilon entries must be +1 or -1");

  std::vector<JordanComponent> comps;
  for (auto [p, e] : factorize(N)) {
    const int ep = eps.at(p);
    if (p != 2) {
      comps.push_back(OddComponent{p, chi.local(p, 2 * N / p) * ep});
    } else if (e == 2) {
      comps.push_back(EvenTwoComponent{2 * chi.local(2, N / 4) * ep});
    } else {
      // Two isomorphic choices exist; take the lexicographically smallest (t1, t2).
      const int target = chi.local(2, N / 8) * ep;
      bool found = false;
      for (int t1 : {-1, 1}) {
        for (int t2 : {-3, -1, 1, 3}) {
          if (chi.local(2, t2) != target || kronecker(-4, t1 * t2) != chi.local(2, 3)) continue;
          comps.push_back(OddTwoPair{t1, t2});
          found = true;
          break;
        }
        if (found) break;
      }
      if (!found) throw std::logic_error("no 2-adic pair component matches");
    }
  }
  DiscriminantForm d(std::move(comps));
  if (d.level() != N || !(d.chi() == chi) || d.epsilon() != eps)
    throw std::logic_error("build_from produced an inconsistent form for N = " + std::to_string(N));
  return d;
}

DiscriminantForm DiscriminantForm::parse(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (t.empty() || t == "1" || t == "trivial") return DiscriminantForm();
  // Split on '+' that is not directly preceded by '^'.
  std::vector<std::string> tokens;
  std::string cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '+' && i > 0 && t[i - 1] != '^') {
      tokens.push_back(cur);
      cur.clear();
    } else {
      cur += t[i];
    }
  }
  tokens.push_back(cur);

  static const std::regex odd_re(R"((\d+)\^([+-]?)1)");
  static const std::regex even_re(R"(2_([+-]?2)\^\+2)");
  static const std::regex two_re(R"(2_([+-]?1)\^\+1)");
  static const std::regex four_re(R"(4_([+-]?[13])\^([+-]?)1)");
  std::vector<JordanComponent> comps;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::smatch m;
    if (std::regex_match(tokens[i], m, even_re)) {
      comps.push_back(EvenTwoComponent{std::stoi(m[1])});
    } else if (std::regex_match(tokens[i], m, two_re)) {
      std::smatch m4;
      if (i + 1 >= tokens.size() || !std::regex_match(tokens[i + 1], m4, four_re))
        throw InputError("2_t^+1 must be followed by a 4_t^d component");
      const int t2 = std::stoi(m4[1]);
      const int d2 = m4[2] == "-" ? -1 : 1;
      if (kronecker(2, t2) != d2) throw InputError("4_t^d needs d = (2|t)");
      comps.push_back(OddTwoPair{std::stoi(m[1]), t2});
      ++i;
    } else if (std::regex_match(tokens[i], m, odd_re)) {
      comps.push_back(OddComponent{std::stoll(m[1]), m[2] == "-" ? -1 : 1});
    } else {
      throw InputError("cannot parse Jordan component '" + tokens[i] + "'");
    }
  }
  return DiscriminantForm(std::move(comps));
}

std::vector<std::int64_t> DiscriminantForm::coordinate_moduli() const {
  std::vector<std::int64_t> mods;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) mods.push_back(o->p);
    else if (std::holds_alternative<EvenTwoComponent>(c)) {
      mods.push_back(2);
      mods.push_back(2);
    } else {
      mods.push_back(2);
      mods.push_back(4);
    }
  }
  return mods;
}

Rational DiscriminantForm::norm(const std::vector<std::int64_t>& x) const {
  Rational q = 0;
  std::size_t i = 0;
  for (const auto& c : comps_) {
    if (const auto* o = std::get_if<OddComponent>(&c)) {
      const std::int64_t a = odd_generator_numerator(o->p, o->delta);
      q += Rational(a * x[i] * x[i], o->p);
      i += 1;
    } else if (const auto* e = std::get_if<EvenTwoComponent>(&c)) {
      q += Rational(e->t * (x[i] * x[i] + x[i + 1] * x[i + 1]), 8);
      i += 2;
    } else {
      const auto& pr = std::get<OddTwoPair>(c);
      q += Rational(pr.t1 * x[i] * x[i], 4) + Rational(pr.t2 * x[i + 1] * x[i + 1], 8);
      i += 2;
    }
  }
  q.canonicalize();
  return frac_part(q);
}

Rational DiscriminantForm::bilinear(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const {
  const auto mods = coordinate_moduli();
  std::vector<std::int64_t> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = mod_floor(a[i] + b[i], mods[i]);
  return frac_part(norm(s) - norm(a) - norm(b));
}

std::vector<GroupElement> DiscriminantForm::elements_with_norms() const {
  const auto mods = coordinate_moduli();
  std::vector<GroupElement> out;
  std::vector<std::int64_t> x(mods.size(), 0);
  while (true) {
    GroupElement g;
    g.coords = x;
    g.norm = norm(x);
    Rational nq = g.norm * level_;
    g.residue = mod_floor(nq.get_num().get_si(), level_);
    out.push_back(std::move(g));
    std::size_t i = 0;
    while (i < mods.size()) {
      if (++x[i] < mods[i]) break;
      x[i] = 0;
      ++i;
    }
    if (i == mods.size()) break;
  }
  return out;
}

std::map<std::int64_t, std::int64_t> DiscriminantForm::residue_counts() const {
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto& g : elements_with_norms()) ++counts[g.residue];
  return counts;
}

WeilGenerators DiscriminantForm::weil_generators() const {
  const auto elems = elements_with_norms();
  WeilGenerators w;
  w.order = static_cast<std::int64_t>(elems.size());
  w.r_half_mod4 = (signature() / 2) % 4;
  for (const auto& g : elems) w.t_phase.push_back(g.norm);
  w.s_phase.assign(elems.size(), std::vector<Rational>(elems.size()));
  for (std::size_t b = 0; b < elems.size(); ++b)
    for (std::size_t g = 0; g < elems.size(); ++g) w.s_phase[b][g] = frac_part(-bilinear(elems[b].coords, elems[g].coords));
  return w;
}

namespace {

std::complex<double> e_of(const Rational& x) {
  const double a = 2.0 * std::numbers::pi * x.get_d();
  return {std::cos(a), std::sin(a)};
}

} // namespace

WeilGenerators::Matrix WeilGenerators::materialize_t() const {
  Matrix m(static_cast<std::size_t>(order), std::vector<std::complex<double>>(static_cast<std::size_t>(order)));
  for (std::size_t g = 0; g < t_phase.size(); ++g) m[g][g] = e_of(t_phase[g]);
  return m;
}

WeilGenerators::Matrix WeilGenerators::materialize_s() const {
  // i^{-r/2} / sqrt|D|
  static const std::complex<double> ipow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const std::complex<double> pre = ipow[r_half_mod4] / std::sqrt(static_cast<double>(order));
  Matrix m(static_cast<std::size_t>(order), std::vector<std::complex<double>>(static_cast<std::size_t>(order)));
  for (std::size_t b = 0; b < s_phase.size(); ++b)
    for (std::size_t g = 0; g < s_phase.size(); ++g) m[b][g] = pre * e_of(s_phase[b][g]);
  return m;
}

std::string DiscriminantForm::to_string() const {
  if (comps_.empty()) return "1";
  std::string s;
  for (const auto& c : comps_) {
    if (!s.empty()) s += " + ";
    s += render(c);
  }
  return s;
}

} // namespace epsforms
