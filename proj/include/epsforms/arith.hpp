#pragma once

// Exact integer/rational helpers shared by every other module: Kronecker
// symbols, factored quadratic characters, s(n), divisor bookkeeping and
// generalized Bernoulli numbers.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epsforms {

using Integer = mpz_class;
using Rational = mpq_class; // canonical form is maintained by GMP

std::string to_string(const Rational& x);
Rational parse_rational(std::string_view text);
bool is_integral(const Rational& x);

/// Extended Kronecker symbol (a|b), valid for all integers a, b.
int kronecker(std::int64_t a, std::int64_t b);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t mod_floor(std::int64_t a, std::int64_t b);
std::int64_t ipow(std::int64_t base, unsigned exp);

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// N_m: the largest divisor of N supported on the primes of m.
std::int64_t full_part(std::int64_t N, std::int64_t m);

/// Divisors m of N with m = N_m, ascending.
std::vector<std::int64_t> divisors_full_parts(std::int64_t N);

/// s(n) = 2^omega(gcd(n, N)), with gcd(0, N) = N.
std::int64_t s_value(std::int64_t n, std::int64_t N);

/// Local quadratic character at a prime. Odd primes only carry the Legendre
/// symbol; the 2-adic part is one of (-4|.), (8|.), (-8|.).
enum class LocalChar { legendre, minus4, plus8, minus8 };

class QuadChar {
public:
  QuadChar() = default; // trivial character mod 1
  explicit QuadChar(std::map<std::int64_t, LocalChar> components);

  /// The primitive character (./p) for odd p, or the given 2-adic type.
  static QuadChar legendre(std::int64_t p);
  static QuadChar two_adic(LocalChar tag);
  /// Primitive quadratic character attached to the supported level shapes:
  /// Legendre at odd p, (-4|.) when 4||N, (2|.) or (-2|.) when 8||N by N mod 32.
  static QuadChar for_level(std::int64_t N);

  /// Conductor; equals the modulus since stored characters are primitive.
  std::int64_t modulus() const { return modulus_; }
  const std::map<std::int64_t, LocalChar>& components() const { return comps_; }
  std::vector<std::int64_t> primes() const;
  bool is_trivial() const { return comps_.empty(); }

  int local(std::int64_t p, std::int64_t n) const;
  int operator()(std::int64_t n) const;
  /// chi_m(n) = prod_{p | m} chi_p(n); m must be a full part of the modulus.
  int eval_part(std::int64_t m, std::int64_t n) const;
  /// chi'_m(n) = prod_{p not dividing m} chi_p(n).
  int eval_complement(std::int64_t m, std::int64_t n) const;
  /// Restriction to the primes dividing m.
  QuadChar restrict_to(std::int64_t m) const;

  QuadChar operator*(const QuadChar& other) const;
  bool operator==(const QuadChar& other) const = default;

  std::string label() const;

private:
  std::map<std::int64_t, LocalChar> comps_;
  std::int64_t modulus_ = 1;
};

/// char_eval from the module contract: chi_{m}(n) with validation of m = N_m.
int char_eval(const QuadChar& chi, std::int64_t m, std::int64_t n);

/// All primitive quadratic characters whose conductor divides N.
std::vector<QuadChar> quadratic_characters_dividing(std::int64_t N);

std::vector<Rational> bernoulli_numbers(int upto); // B_1 = -1/2
Rational bernoulli_poly(int w, const Rational& x);
Rational binomial(int n, int k);

/// B_{w,chi} = f^{w-1} sum_{a mod f} chi(a) B_w(a/f), a running over 0..f-1.
Rational gen_bernoulli(int w, const QuadChar& chi);
/// L(1 - w, chi) = -B_{w,chi} / w for w >= 2.
Rational l_value(int w, const QuadChar& chi);

} // namespace epsforms
