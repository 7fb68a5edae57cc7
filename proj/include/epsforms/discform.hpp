#pragma once

#include "epsforms/arith.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace epsforms {

/// p^{delta}: cyclic of order p (p odd prime), generator norm a/p with (2a|p) = delta.
struct OddComponent {
  std::int64_t p;
  int delta;
  bool operator==(const OddComponent&) const = default;
};

/// 2_t^{+2} with t in {+2, -2}: two orthogonal generators of norm t/8 each.
struct EvenTwoComponent {
  int t;
  bool operator==(const EvenTwoComponent&) const = default;
};

/// 2_{t1}^{+1} + 4_{t2}^{delta2}: generators of order 2 and 4 with norms
/// t1/4 and t2/8; delta2 = (2|t2) is implied.
struct OddTwoPair {
  int t1;
  int t2;
  int delta2() const { return kronecker(2, t2); }
  bool operator==(const OddTwoPair&) const = default;
};

using JordanComponent = std::variant<OddComponent, EvenTwoComponent, OddTwoPair>;

std::int64_t component_prime(const JordanComponent& c);
std::int64_t component_level(const JordanComponent& c);
std::string render(const JordanComponent& c);

/// Sign vector epsilon indexed by the primes dividing the level.
using SignVector = std::map<std::int64_t, int>;

std::string render(const SignVector& eps);
SignVector parse_sign_vector(std::int64_t N, const std::string& text);

struct GroupElement {
  std::vector<std::int64_t> coords;
  Rational norm;        // q(gamma) in [0, 1)
  std::int64_t residue; // N q(gamma) mod N
};

/// Exact bookkeeping for rho_D(T) and rho_D(S): phases are rationals mod 1.
/// rho(T) e_g = e(t_phase[g]) e_g;
/// rho(S) e_g = i^{-r/2} |D|^{-1/2} sum_b e(s_phase[b][g]) e_b.
struct WeilGenerators {
  std::int64_t order = 1;
  int r_half_mod4 = 0;
  std::vector<Rational> t_phase;
  std::vector<std::vector<Rational>> s_phase;

  using Matrix = std::vector<std::vector<std::complex<double>>>;
  Matrix materialize_t() const;
  Matrix materialize_s() const;
};

class DiscriminantForm {
public:
  DiscriminantForm() = default; // trivial form
  explicit DiscriminantForm(std::vector<JordanComponent> components);

  /// Form prescribed for (N, eps): odd squarefree N, 4 * odd, or 8 * odd.
  static DiscriminantForm build_from(std::int64_t N, const SignVector& eps);
  /// Parses "3^-1 + 5^-1", "2_2^+2 + 3^+1", "2_1^+1 + 4_3^-1"; "1" is trivial.
  static DiscriminantForm parse(const std::string& text);

  const std::vector<JordanComponent>& components() const { return comps_; }
  std::int64_t level() const { return level_; }
  std::int64_t order() const { return order_; }
  int signature() const; // in [0, 8)
  QuadChar chi() const;
  SignVector epsilon() const;
  DiscriminantForm dual() const;
  /// Two-part of the level is 1 or 4 (the range where spaces are supported).
  bool supports_spaces() const;

  std::vector<std::int64_t> coordinate_moduli() const;
  Rational norm(const std::vector<std::int64_t>& coords) const;
  Rational bilinear(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const;
  std::vector<GroupElement> elements_with_norms() const;
  /// Number of elements per norm residue N q(gamma) mod N.
  std::map<std::int64_t, std::int64_t> residue_counts() const;
  WeilGenerators weil_generators() const;

  std::string to_string() const;
  bool operator==(const DiscriminantForm& o) const { return comps_ == o.comps_; }

private:
  std::vector<JordanComponent> comps_;
  std::int64_t level_ = 1;
  std::int64_t order_ = 1;
};

/// Generator norm numerator for p^{delta}: smallest a > 0 with (2a|p) = delta.
std::int64_t odd_generator_numerator(std::int64_t p, int delta);

} // namespace epsforms
