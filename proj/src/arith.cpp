#include "epsforms/arith.hpp"

#include "epsforms/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace epsforms {

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw InputError("malformed rational literal '" + std::string(text) + "'");
  if (r.get_den() == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

bool is_integral(const Rational& x) { return x.get_den() == 1; }

int kronecker(std::int64_t a, std::int64_t b) {
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && b % 2 == 0) return 0;
  int v = 0;
  while (b % 2 == 0) {
    ++v;
    b /= 2;
  }
  int k = 1;
  if (v % 2 == 1) {
    const std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) k = -k;
  }
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  // b odd positive: Jacobi symbol with sign already folded in.
  std::int64_t aa = a % b;
  if (aa < 0) aa += b;
  std::int64_t bb = b;
  while (aa != 0) {
    int t = 0;
    while (aa % 2 == 0) {
      aa /= 2;
      ++t;
    }
    if (t % 2 == 1) {
      const std::int64_t r = bb % 8;
      if (r == 3 || r == 5) k = -k;
    }
    if (aa % 4 == 3 && bb % 4 == 3) k = -k;
    std::swap(aa, bb);
    aa %= bb;
  }
  return bb == 1 ? k : 0;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

std::int64_t ipow(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  n = std::llabs(n);
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> ds{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t cur = ds.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < cur; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::int64_t full_part(std::int64_t N, std::int64_t m) {
  std::int64_t r = 1;
  for (auto [p, e] : factorize(N))
    if (m % p == 0) r *= ipow(p, static_cast<unsigned>(e));
  return r;
}

std::vector<std::int64_t> divisors_full_parts(std::int64_t N) {
  std::vector<std::int64_t> out;
  for (std::int64_t d : divisors(N))
    if (full_part(N, d) == d) out.push_back(d);
  return out;
}

std::int64_t s_value(std::int64_t n, std::int64_t N) {
  if (N < 1) throw InputError("s(n) needs N >= 1");
  const std::int64_t g = n == 0 ? N : std::gcd(std::llabs(n), N);
  return std::int64_t{1} << prime_divisors(g).size();
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t local_conductor(std::int64_t p, LocalChar c) {
  if (p != 2) return p;
  return c == LocalChar::minus4 ? 4 : 8;
}

int two_adic_value(LocalChar c, std::int64_t n) {
  switch (c) {
  case LocalChar::minus4: return kronecker(-4, n);
  case LocalChar::plus8: return kronecker(8, n);
  case LocalChar::minus8: return kronecker(-8, n);
  case LocalChar::legendre: break;
  }
  throw std::logic_error("legendre tag at p = 2");
}

int disc_of(LocalChar c) {
  switch (c) {
  case LocalChar::minus4: return -4;
  case LocalChar::plus8: return 8;
  case LocalChar::minus8: return -8;
  default: return 1;
  }
}

std::string tag_label(std::int64_t p, LocalChar c) {
  if (p != 2) return "(./" + std::to_string(p) + ")";
  return "(" + std::to_string(disc_of(c)) + "/.)";
}

} // namespace

QuadChar::QuadChar(std::map<std::int64_t, LocalChar> components) : comps_(std::move(components)) {
  modulus_ = 1;
  for (auto [p, c] : comps_) {
    if (p == 2 && c == LocalChar::legendre) throw InputError("p = 2 needs a 2-adic tag");
    if (p != 2 && c != LocalChar::legendre) throw InputError("odd primes only carry the Legendre symbol");
    if (factorize(p).size() != 1 || factorize(p)[0].second != 1) throw InputError("component index must be prime");
    modulus_ *= local_conductor(p, c);
  }
}

QuadChar QuadChar::legendre(std::int64_t p) { return QuadChar({{p, LocalChar::legendre}}); }

QuadChar QuadChar::two_adic(LocalChar tag) { return QuadChar({{2, tag}}); }

QuadChar QuadChar::for_level(std::int64_t N) {
  std::map<std::int64_t, LocalChar> comps;
  for (auto [p, e] : factorize(N)) {
    if (p == 2) {
      if (e == 2) comps[2] = LocalChar::minus4;
      else if (e == 3) comps[2] = (N % 32 == 8) ? LocalChar::plus8 : LocalChar::minus8;
      else throw InputError("unsupported level shape: the 2-part must be 1, 4 or 8");
    } else {
      if (e != 1) throw InputError("unsupported level shape: the odd part must be squarefree");
      comps[p] = LocalChar::legendre;
    }
  }
  return QuadChar(std::move(comps));
}

std::vector<std::int64_t> QuadChar::primes() const {
  std::vector<std::int64_t> ps;
  for (auto [p, c] : comps_) ps.push_back(p);
  return ps;
}

int QuadChar::local(std::int64_t p, std::int64_t n) const {
  auto it = comps_.find(p);
  if (it == comps_.end()) return n % p == 0 ? 0 : 1;
  if (p == 2) return two_adic_value(it->second, n);
  return kronecker(n, p);
}

int QuadChar::operator()(std::int64_t n) const {
  int v = 1;
  for (auto [p, c] : comps_) {
    v *= p == 2 ? two_adic_value(c, n) : kronecker(n, p);
    if (v == 0) return 0;
  }
  return v;
}

int QuadChar::eval_part(std::int64_t m, std::int64_t n) const {
  int v = 1;
  for (auto [p, c] : comps_) {
    if (m % p != 0) continue;
    v *= p == 2 ? two_adic_value(c, n) : kronecker(n, p);
  }
  return v;
}

int QuadChar::eval_complement(std::int64_t m, std::int64_t n) const {
  int v = 1;
  for (auto [p, c] : comps_) {
    if (m % p == 0) continue;
    v *= p == 2 ? two_adic_value(c, n) : kronecker(n, p);
  }
  return v;
}

QuadChar QuadChar::restrict_to(std::int64_t m) const {
  std::map<std::int64_t, LocalChar> comps;
  for (auto [p, c] : comps_)
    if (m % p == 0) comps[p] = c;
  return QuadChar(std::move(comps));
}

QuadChar QuadChar::operator*(const QuadChar& other) const {
  std::map<std::int64_t, LocalChar> comps = comps_;
  for (auto [p, c] : other.comps_) {
    auto it = comps.find(p);
    if (it == comps.end()) {
      comps[p] = c;
      continue;
    }
    if (p != 2 || it->second == c) {
      comps.erase(it);
      continue;
    }
    // Klein four-group {-4, 8, -8}: the product of two distinct ones is the third.
    switch (disc_of(it->second) * disc_of(c)) {
    case -32: it->second = LocalChar::minus8; break;
    case 32: it->second = LocalChar::plus8; break;
    default: it->second = LocalChar::minus4; break; // 8 * -8
    }
  }
  return QuadChar(std::move(comps));
}

std::string QuadChar::label() const {
  if (comps_.empty()) return "1";
  std::string s;
  for (auto [p, c] : comps_) {
    if (!s.empty()) s += "*";
    s += tag_label(p, c);
  }
  return s;
}

int char_eval(const QuadChar& chi, std::int64_t m, std::int64_t n) {
  if (m <= 0 || chi.modulus() % m != 0 || full_part(chi.modulus(), m) != m)
    throw InputError("m = " + std::to_string(m) + " is not a full part of the modulus " +
                     std::to_string(chi.modulus()));
  return chi.eval_part(m, n);
}

std::vector<QuadChar> quadratic_characters_dividing(std::int64_t N) {
  std::vector<std::vector<std::pair<std::int64_t, LocalChar>>> options;
  for (auto [p, e] : factorize(N)) {
    std::vector<std::pair<std::int64_t, LocalChar>> opts;
    if (p == 2) {
      if (e >= 2) opts.emplace_back(2, LocalChar::minus4);
      if (e >= 3) {
        opts.emplace_back(2, LocalChar::plus8);
        opts.emplace_back(2, LocalChar::minus8);
      }
    } else {
      opts.emplace_back(p, LocalChar::legendre);
    }
    options.push_back(std::move(opts));
  }
  std::vector<QuadChar> out{QuadChar()};
  for (const auto& opts : options) {
    const std::size_t cur = out.size();
    for (const auto& [p, c] : opts)
      for (std::size_t i = 0; i < cur; ++i) {
        auto comps = out[i].components();
        comps[p] = c;
        out.emplace_back(std::move(comps));
      }
  }
  return out;
}

// ---------------------------------------------------------------------------

Rational binomial(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

std::vector<Rational> bernoulli_numbers(int upto) {
  std::vector<Rational> B(static_cast<std::size_t>(upto) + 1);
  B[0] = 1;
  for (int m = 1; m <= upto; ++m) {
    Rational acc = 0;
    for (int j = 0; j < m; ++j) acc += binomial(m + 1, j) * B[static_cast<std::size_t>(j)];
    B[static_cast<std::size_t>(m)] = -acc / (m + 1);
  }
  return B;
}

Rational bernoulli_poly(int w, const Rational& x) {
  const auto B = bernoulli_numbers(w);
  Rational acc = 0;
  Rational xp = 1; // x^(w-j) built from j = w downwards
  for (int j = w; j >= 0; --j) {
    acc += binomial(w, j) * B[static_cast<std::size_t>(j)] * xp;
    xp *= x;
  }
  return acc;
}

Rational gen_bernoulli(int w, const QuadChar& chi) {
  if (w < 1) throw InputError("generalized Bernoulli numbers need w >= 1");
  const std::int64_t f = chi.modulus();
  const auto B = bernoulli_numbers(w);
  Rational acc = 0;
  for (std::int64_t a = 0; a < f; ++a) {
    const int c = f == 1 ? 1 : chi(a);
    if (c == 0) continue;
    Rational x(a, f);
    x.canonicalize();
    Rational val = 0;
    Rational xp = 1;
    for (int j = w; j >= 0; --j) {
      val += binomial(w, j) * B[static_cast<std::size_t>(j)] * xp;
      xp *= x;
    }
    acc += c * val;
  }
  Integer fw;
  mpz_ui_pow_ui(fw.get_mpz_t(), static_cast<unsigned long>(f), static_cast<unsigned long>(w - 1));
  return acc * Rational(fw);
}

Rational l_value(int w, const QuadChar& chi) {
  if (w < 2) throw InputError("l_value needs w >= 2");
  return -gen_bernoulli(w, chi) / w;
}

} // namespace epsforms
