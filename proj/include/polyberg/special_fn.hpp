#pragma once

#include <vector>

#include "polyberg/types.hpp"

namespace polyberg::special_fn {

// Dense univariate polynomial with real coefficients, c[s] * t^s.
class UniPoly {
 public:
  UniPoly() : c_(1, 0.0) {}
  explicit UniPoly(std::vector<double> coeffs);
  static UniPoly constant(double c) { return UniPoly(std::vector<double>{c}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int s) const;
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double t) const;  // Horner
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(double s) const;

 private:
  std::vector<double> c_;
};

double log_gamma(double x);           // x > 0
double beta_fn(double a, double b);   // a, b > 0
double gen_binomial(double a, int k); // product_{i=1..k} (a - i + 1) / i
double binomial_int(int n, int k);    // exact for the ranges used here

struct JacobiParams {
  double xi;
  double eta;
  int m;
  JacobiParams(double xi_, double eta_, int m_) : xi(xi_), eta(eta_), m(m_) {
    if (!(xi > -1.0) || !(eta > -1.0))
      throw std::domain_error("JacobiParams: parameters must be > -1");
    if (m < 0 || m > 30) throw std::domain_error("JacobiParams: degree out of range [0,30]");
  }
};

// Two independent terminating-sum evaluations of the Jacobi polynomial
// P_m^{(xi,eta)} at x. The first expands around x = 1, the second around
// x = -1; they agree analytically and serve as mutual oracles.
double jacobi_eval(const JacobiParams& p, double x);
double jacobi_eval_alt(const JacobiParams& p, double x);

// P_m^{(xi,eta)}(2t - 1) as a dense polynomial in t (coefficients in t^s).
UniPoly jacobi_shifted(const JacobiParams& p);

struct RPolyParams {
  int m;
  double alpha;
  double beta;
  RPolyParams(int m_, double alpha_, double beta_) : m(m_), alpha(alpha_), beta(beta_) {
    if (m < 0 || m > 30) throw std::domain_error("RPolyParams: degree out of range [0,30]");
    if (!(alpha > -1.0) || !(beta > -1.0))
      throw std::domain_error("RPolyParams: weight exponents must be > -1");
  }
};

// Reproducing polynomial of degree m for the weight (1-t)^alpha t^beta on
// [0,1]: int_0^1 h(t) R_m(t) (1-t)^alpha t^beta dt / B(alpha+1, beta+1) = h(0)
// for every polynomial h with deg h <= m.
// Coefficients are assembled in log-space with explicit sign tracking.
UniPoly r_poly(const RPolyParams& p);

// Independent coefficient route (different Gamma/Beta arrangement); m = 0 is
// the constant 1 by definition, bypassing a formula factor that degenerates.
UniPoly r_poly_alt(const RPolyParams& p);

// Pointwise values of R_m via its two Jacobi-polynomial representations
// (reflection symmetry swaps the roles of the endpoint parameters).
double r_value_jacobi(const RPolyParams& p, double t);
double r_value_jacobi_sym(const RPolyParams& p, double t);

}  // namespace polyberg::special_fn
