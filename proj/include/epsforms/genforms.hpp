#pragma once

// Concrete q-expansions (eta quotients, Eisenstein series, j) and the
// candidate pools that are screened into bases of M(N, w, psi).

#include "epsforms/arith.hpp"
#include "epsforms/qseries.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace epsforms {

/// prod_{n>=1} (1 - q^n)^r for exponents [0, trunc), exact integers.
std::vector<Integer> euler_power(std::int64_t r, std::int64_t trunc);

/// q^{delta/24} prod (1 - q^{delta n}) on the lattice (1/24)Z, known to
/// absolute order trunc (in q).
QSeries eta_expansion(std::int64_t delta, std::int64_t trunc);

QSeries delta_series(std::int64_t trunc);
QSeries e4_series(std::int64_t trunc);
QSeries j_series(std::int64_t trunc);
/// j(N tau) known to absolute order trunc.
QSeries j_rescaled(std::int64_t N, std::int64_t trunc);

class EtaQuotient {
public:
  EtaQuotient() = default;
  explicit EtaQuotient(std::map<std::int64_t, std::int64_t> exponents);

  const std::map<std::int64_t, std::int64_t>& exponents() const { return r_; }
  /// Twice the weight.
  std::int64_t weight2() const;
  /// 24 times the order at infinity.
  std::int64_t order24() const;
  /// Order at the cusp 1/c of Gamma0(N), c | N, in that cusp's local parameter.
  Rational cusp_order(std::int64_t N, std::int64_t c) const;
  /// Integral weight, integral order and both level congruences mod 24.
  bool level_conditions(std::int64_t N) const;
  /// Nonnegative order at every cusp of Gamma0(N).
  bool holomorphic_on(std::int64_t N) const;
  /// Character d -> ((-1)^w s | d) matched against quadratic characters mod N.
  std::optional<QuadChar> character(std::int64_t N) const;

  /// Expansion with the q^{order} factor included (requires integral order),
  /// known to absolute order trunc.
  QSeries expansion(std::int64_t trunc) const;
  std::string label() const;

  EtaQuotient operator*(const EtaQuotient& o) const;
  EtaQuotient pow(std::int64_t e) const;

private:
  std::map<std::int64_t, std::int64_t> r_;
};

/// Normalized E_w^{psi,phi}(t tau) = c0 + sum_n (sum_{d|n} psi(n/d) phi(d) d^{w-1}) q^{t n}
/// with c0 = delta(psi) L(1-w, phi)/2 (+ delta(phi) L(0, psi)/2 when w = 1).
/// For w = 2 and psi = phi = 1 the holomorphic E_2(tau) - t E_2(t tau) is returned.
QSeries eisenstein_general(int w, const QuadChar& psi, const QuadChar& phi, std::int64_t t, std::int64_t trunc);

/// E_m = delta_{1,m} L(1-w, chi) + 2 sum_n (sum_{d|n} chi_m(n/d) chi'_m(d) d^{w-1}) q^n.
QSeries eisenstein_Em(std::int64_t N, int w, const QuadChar& chi, std::int64_t m, std::int64_t trunc);

/// E^eps = (s(0) L(1-w, chi))^{-1} sum_{m | N, m = N_m} eps_m E_m.
QSeries eisenstein_eps(std::int64_t N, int w, const QuadChar& chi, const std::map<std::int64_t, int>& eps,
                       std::int64_t trunc);

/// Index of Gamma0(N) in SL2(Z).
std::int64_t gamma0_index(std::int64_t N);

// ---------------------------------------------------------------------------
// Candidate pools

struct Primitive {
  std::string label;
  int weight = 0;
  QuadChar chi;
  QSeries series; // exponents [0, prec)
};

/// Builds bases of M(N, w, psi) as subsets of a candidate pool (Eisenstein
/// series, holomorphic eta quotients, user-injected forms, and products of
/// lower-weight basis elements with low-weight primitives), screened for
/// linear independence modulo a word-size prime at precision prec.
class FormFactory {
public:
  FormFactory(std::int64_t N, std::int64_t prec, int eta_bound = 12);

  std::int64_t level() const { return N_; }
  std::int64_t precision() const { return prec_; }

  /// Add a user-supplied holomorphic form of level N (exponents >= 0).
  void inject(const std::string& label, int weight, const QuadChar& chi, const QSeries& series);

  /// Exact series (exponents [0, prec)) of generators spanning what the pool
  /// reaches inside M(N, w, psi); linearly independent.
  std::vector<QSeries> basis(int w, const QuadChar& psi);
  std::vector<std::string> basis_labels(int w, const QuadChar& psi);

  /// Eta quotients of level N admitted as holomorphic with the given weight.
  std::vector<EtaQuotient> eta_quotients(int w, const QuadChar& psi) const;

  const std::vector<Primitive>& primitives();

private:
  struct Node {
    std::string label;
    int weight;
    QuadChar chi;
    int prim;  // leaf: index into prims_, else -1
    int left;  // product nodes: factor node indices
    int right;
  };

  void build_primitives();
  const std::vector<int>& basis_nodes(int w, const QuadChar& psi);
  const std::vector<std::uint32_t>& modp(int node);
  const QSeries& exact(int node);
  int add_node(Node n);

  std::int64_t N_;
  std::int64_t prec_;
  int eta_bound_;
  bool built_ = false;
  std::size_t fixed_prims_ = 0;
  std::vector<Primitive> prims_;
  std::vector<Primitive> injected_;
  std::vector<Node> nodes_;
  std::map<int, std::vector<std::uint32_t>> modp_;
  std::map<int, QSeries> exact_;
  std::map<std::pair<int, std::string>, std::vector<int>> bases_;
};

/// Reduces a rational series modulo p (exponents [0, len)).
std::vector<std::uint32_t> reduce_mod(const QSeries& s, std::int64_t len, std::uint32_t p);
/// Truncated product modulo p.
std::vector<std::uint32_t> mul_mod_series(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                          std::uint32_t p);

/// Incremental echelon form modulo p used for independence screening.
class ModpEchelon {
public:
  explicit ModpEchelon(std::uint32_t p) : p_(p) {}
  /// Reduces v against the stored rows; if something survives it is stored
  /// and true is returned.
  bool insert(std::vector<std::uint32_t> v);
  std::size_t rank() const { return rows_.size(); }

private:
  std::uint32_t p_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::size_t> pivots_;
};

} // namespace epsforms
