#pragma once

// Scalar <-> vector-valued forms: F_gamma = sum_{n = N q(gamma) mod N} s(n) a(n) q^{n/N}.

#include "epsforms/discform.hpp"
#include "epsforms/qseries.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace epsforms {

/// Components are stored once per norm residue N q(gamma) mod N, on the
/// lattice (1/N)Z (lattice index n means q^{n/N}).
struct VVForm {
  DiscriminantForm D;
  std::int64_t lattice = 1; // u = N
  std::map<std::int64_t, QSeries> components;

  /// One series per element of D, in the order of D.elements_with_norms().
  std::vector<QSeries> element_view() const;
  /// Rebuilds the residue storage; throws InputError when two elements of
  /// equal norm carry different series or a component has exponents outside
  /// its class q(gamma) + Z.
  static VVForm from_elements(const DiscriminantForm& D, const std::vector<QSeries>& elems);

  bool operator==(const VVForm& o) const { return lattice == o.lattice && components == o.components; }
};

/// Throws InputError if f does not satisfy the eps-condition of D.
VVForm psi(const QSeries& f, const DiscriminantForm& D);
/// a(n) = (coefficient of q^{n/N} in the class of n) / s(n); throws InputError
/// on exponents outside their class.
QSeries phi(const VVForm& F);

/// Constant term of sum_gamma F_gamma G_gamma, with G living on the dual
/// form (norm residues negated). Throws InputError on mismatched forms.
Rational pairing(const VVForm& F, const VVForm& G);

struct WeilCheckResult {
  double s_deviation = 0; // max_beta |tau^-k F_beta(-1/tau) - (rho(S) F(tau))_beta|
  double t_deviation = 0; // max_beta |F_beta(tau + 1) - e(q(beta)) F_beta(tau)|
  double tail_bound = 0;  // size of the last retained terms at both sample points
  double scale = 0;       // max_beta |F_beta(tau)|
};

/// Evaluates both generator identities at tau0 with 200-bit arithmetic.
/// Throws PrecisionError if the retained window does not reach tolerance.
WeilCheckResult check_weil_transform(const VVForm& F, int k, std::complex<double> tau0, double tolerance);

} // namespace epsforms
