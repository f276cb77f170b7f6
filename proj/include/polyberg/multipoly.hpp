#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polyberg/types.hpp"

namespace polyberg::multipoly {

// Multi-index in Z_{>=0}^n.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> comps);
  static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex unit(int n, int p);

  int dim() const { return static_cast<int>(k_.size()); }
  int total() const;                 // |k| = sum of components
  double factorial() const;          // k! = prod k_i!
  int operator[](int i) const { return k_[i]; }
  const std::vector<int>& comps() const { return k_; }

  MultiIndex plus(int p, int delta = 1) const;  // shift one component
  bool operator==(const MultiIndex& o) const { return k_ == o.k_; }
  bool operator<(const MultiIndex& o) const;    // lexicographic, equal dims

 private:
  std::vector<int> k_;
};

// Calls fn for every multi-index of dimension n with total <= max_total.
void for_each_multi_index(int n, int max_total, const std::function<void(const MultiIndex&)>& fn);

// Polynomial in z_1..z_n and their conjugates: sum over (j,k) of
// c_{j,k} z^j conj(z)^k. Terms are kept in a canonical graded order
// (total degree |j|+|k|, then j, then k lexicographically), which makes
// serialization and iteration deterministic.
class MixedPoly {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;
  struct GradedLess {
    bool operator()(const Key& a, const Key& b) const;
  };
  using TermMap = std::map<Key, cplx, GradedLess>;

  explicit MixedPoly(int dim);
  static MixedPoly monomial(const MultiIndex& j, const MultiIndex& k, cplx c);
  static MixedPoly constant(int dim, cplx c);

  int dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const TermMap& terms() const { return terms_; }

  void add_term(const MultiIndex& j, const MultiIndex& k, cplx c);
  cplx coeff(const MultiIndex& j, const MultiIndex& k) const;

  int z_degree() const;     // max |j| over terms, 0 if empty
  int zbar_degree() const;  // max |k| over terms, 0 if empty
  double max_abs_coeff() const;

  cplx operator()(std::span<const cplx> z) const;

  MixedPoly conjugated() const;  // term (j,k,c) -> (k,j,conj c)
  MixedPoly operator+(const MixedPoly& o) const;
  MixedPoly operator-(const MixedPoly& o) const;
  MixedPoly operator*(const MixedPoly& o) const;
  MixedPoly operator*(cplx s) const;

  // Drops terms with |c| <= eps.
  MixedPoly pruned(double eps) const;

  std::string to_json() const;
  static MixedPoly from_json(const std::string& text);

 private:
  int dim_;
  TermMap terms_;
};

// Conjugate-Wirtinger derivative of order k: each term c z^j conj(z)^r maps to
// c * prod(r_i falling factorials) z^j conj(z)^{r-k}; terms with r_i < k_i die.
MixedPoly wirtinger_deriv(const MixedPoly& p, const MultiIndex& k);

// Membership in the order-m class via term degrees: every stored term has
// |k| < m. This is the definition-equivalent characterization for
// polynomials (conjugate-degree bound).
bool is_m_analytic(const MixedPoly& p, int m);

// Independent route: all conjugate-Wirtinger derivatives of total order m
// vanish identically. Used as an oracle against the degree route.
bool is_m_analytic_derivative_route(const MixedPoly& p, int m);

// Leading analytic coefficient of the conjugate-degree expansion:
// g = sum_{|k| < m} ((-1)^{|k|} / k!) (Dbar^k p) conj(z)^k, which cancels all
// conjugate monomials of p. Result is analytic (no conj(z) terms) after
// pruning rounding residue at 1e-12 relative to the largest input
// coefficient. Requires is_m_analytic(p, m).
MixedPoly compute_g(const MixedPoly& p, int m);

// recenter(p, a)(w) = p(w + a). Exact inverse: recenter(., -a).
MixedPoly recenter(const MixedPoly& p, std::span<const cplx> a);

// linear_change(p, M)(z) = p(M z); conjugate part picks up conj(M).
MixedPoly linear_change(const MixedPoly& p, const Eigen::MatrixXcd& M);

// Exact monomial moment over the unit ball with the normalized weight
// c_alpha (1 - |z|^2)^alpha: int z^j conj(z)^k dmu_alpha. Diagonal in (j,k).
double ball_moment(const MultiIndex& j, const MultiIndex& k, int n, double alpha);

// L2(ball, mu_alpha) inner product of mixed polynomials, term by term through
// exact moments. <p, q> is linear in p and conjugate-linear in q.
cplx inner_product(const MixedPoly& p, const MixedPoly& q, const SpaceParams& params);

}  // namespace polyberg::multipoly
