#pragma once

// epsilon-subspaces and canonical reduced bases f_m of A^eps(N, k, chi).

#include "epsforms/discform.hpp"
#include "epsforms/genforms.hpp"
#include "epsforms/qseries.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace epsforms {

struct SpaceSpec {
  std::int64_t N = 0;
  int k = 0;
  SignVector eps;
  std::int64_t trunc = 15; // every reported form is known below q^trunc

  /// Validates: supported level with 2-part 1 or 4, N > 1, k != 1 and
  /// k = r/2 mod 2 for the signature r of the attached discriminant form.
  static SpaceSpec make(std::int64_t N, int k, const SignVector& eps, std::int64_t trunc = 15);

  DiscriminantForm form() const { return DiscriminantForm::build_from(N, eps); }
  QuadChar chi() const { return QuadChar::for_level(N); }
  /// (N, 2 - k, eps*) with eps*_p = chi_p(-1) eps_p.
  SpaceSpec dual() const;
  std::string label() const;
};

SignVector dual_sign(std::int64_t N, const SignVector& eps);

/// n satisfies the eps-condition: chi_p(n) != -eps_p for every p | N.
bool is_eps_integer(std::int64_t n, std::int64_t N, const SignVector& eps);
/// Checks a(n) = 0 at every non-eps-integer n in the known window.
bool satisfies_eps(const QSeries& f, std::int64_t N, const SignVector& eps);

/// Solution space of {a(n) = 0 : n < impose_cutoff, n not an eps-integer}
/// inside span(forms); each result is re-checked up to verify_to and a
/// SpanningError is raised if the check fails.
std::vector<QSeries> epsilon_subspace(const std::vector<QSeries>& forms, std::int64_t N, const SignVector& eps,
                                      std::int64_t impose_cutoff, std::int64_t verify_to);

/// Reduced echelon family on the common window; pivot m gets leading
/// coefficient 1/s(m). Keyed by order.
std::map<std::int64_t, QSeries> echelonize(const std::vector<QSeries>& forms, std::int64_t N);

struct ExistenceEntry {
  std::int64_t m;
  bool exists;
  std::string reason;
};

struct ReducedBasis {
  SpaceSpec spec;
  std::map<std::int64_t, QSeries> forms; // order -> f_m
  std::int64_t lowest = 0;               // all existing orders >= lowest are present
  std::vector<ExistenceEntry> ledger;
  std::int64_t holomorphic_weight = 0;   // weight of the holomorphic space used
  std::int64_t working_precision = 0;

  bool has(std::int64_t m) const { return forms.contains(m); }
  const QSeries& at(std::int64_t m) const;
  std::vector<std::int64_t> orders() const;
};

/// Sturm-type cutoff for M(N, w, chi) from the Gamma0(N) index.
std::int64_t gamma0_sturm(std::int64_t N, int w);

/// Owns one form factory per level and memoizes computed bases.
class Engine {
public:
  explicit Engine(int eta_bound = 12) : eta_bound_(eta_bound) {}

  void inject(std::int64_t N, const std::string& label, int weight, const QuadChar& chi, const QSeries& series);

  /// Echelonized basis of M^eps(N, w, chi), known below q^prec.
  std::map<std::int64_t, QSeries> holomorphic_eps_basis(std::int64_t N, int w, const SignVector& eps,
                                                        std::int64_t prec);

  /// All f_m with m >= m_min; pivot set checked against the existence
  /// predictions (SpanningError on mismatch).
  ReducedBasis canonical_basis(const SpaceSpec& spec, std::int64_t m_min);
  /// For k <= 0: reduced basis of the dual cusp space S^{eps*}(N, 2-k, chi).
  ReducedBasis dual_cusp_basis(const SpaceSpec& spec);
  /// For k <= 0: the largest order of an existing dual form (0 when the dual
  /// cusp space is trivial).
  std::int64_t m_epsilon(const SpaceSpec& spec);
  /// Existence of f_m in A^eps(N, k, chi).
  ExistenceEntry existence(const SpaceSpec& spec, std::int64_t m);

private:
  FormFactory& factory(std::int64_t N, std::int64_t prec);

  int eta_bound_;
  struct Injected {
    std::string label;
    int weight;
    QuadChar chi;
    QSeries series;
  };
  std::map<std::int64_t, std::vector<Injected>> injected_;
  std::map<std::int64_t, std::unique_ptr<FormFactory>> factories_;
  std::map<std::string, std::map<std::int64_t, QSeries>> hol_cache_;
  std::map<std::string, ReducedBasis> basis_cache_;
};

} // namespace epsforms
