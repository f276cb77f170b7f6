#include "polyberg/special_fn.hpp"

#include <algorithm>
#include <cmath>

namespace polyberg::special_fn {

UniPoly::UniPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.assign(1, 0.0);
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

double UniPoly::coeff(int s) const {
  if (s < 0) throw std::out_of_range("UniPoly::coeff: negative index");
  return s < static_cast<int>(c_.size()) ? c_[s] : 0.0;
}

double UniPoly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::scaled(double s) const {
  std::vector<double> r(c_);
  for (double& v : r) v *= s;
  return UniPoly(std::move(r));
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
  return std::lgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: arguments must be > 0");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double gen_binomial(double a, int k) {
  if (k < 0) throw std::domain_error("gen_binomial: k must be >= 0");
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= (a - i + 1) / i;
  return r;
}

double binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(gen_binomial(static_cast<double>(n), std::min(k, n - k)));
}

double jacobi_eval(const JacobiParams& p, double x) {
  double acc = 0.0;
  double u = 1.0;  // ((x-1)/2)^s
  for (int s = 0; s <= p.m; ++s) {
    acc += gen_binomial(p.xi + p.eta + p.m + s, s) * gen_binomial(p.xi + p.m, p.m - s) * u;
    u *= (x - 1.0) / 2.0;
  }
  return acc;
}

double jacobi_eval_alt(const JacobiParams& p, double x) {
  // Expansion around x = -1; carries the reflection sign (-1)^m relative to
  // the term signs, as the m = 1 case P_1^{(0,0)}(x) = x fixes.
  double acc = 0.0;
  double u = 1.0;  // ((x+1)/2)^s
  int sgn = 1;
  for (int s = 0; s <= p.m; ++s) {
    acc += sgn * gen_binomial(p.xi + p.eta + p.m + s, s) * gen_binomial(p.eta + p.m, p.m - s) * u;
    u *= (x + 1.0) / 2.0;
    sgn = -sgn;
  }
  return (p.m % 2 == 0) ? acc : -acc;
}

UniPoly jacobi_shifted(const JacobiParams& p) {
  // x = 2t - 1 makes (x+1)/2 = t, so the alt expansion gives coefficients
  // in t directly.
  std::vector<double> c(p.m + 1, 0.0);
  const double outer = (p.m % 2 == 0) ? 1.0 : -1.0;
  int sgn = 1;
  for (int s = 0; s <= p.m; ++s) {
    c[s] = outer * sgn * gen_binomial(p.xi + p.eta + p.m + s, s) *
           gen_binomial(p.eta + p.m, p.m - s);
    sgn = -sgn;
  }
  return UniPoly(std::move(c));
}

UniPoly r_poly(const RPolyParams& p) {
  // Ratio products instead of lgamma/exp: every factor is positive, so each
  // coefficient comes out near correctly rounded. The coefficients grow like
  // 4^m and enter alternating sums downstream, where those last digits matter.
  const long double a = p.alpha, b = p.beta;
  long double c0 = 1.0L;
  for (int j = 0; j < p.m; ++j)
    c0 *= (b + 2 + j) * (a + b + 2 + j) / ((a + 1 + j) * static_cast<long double>(j + 1));
  std::vector<double> c(p.m + 1, 0.0);
  long double cur = c0;
  c[0] = static_cast<double>(cur);
  for (int s = 0; s < p.m; ++s) {
    cur = -cur * static_cast<long double>(p.m - s) * (a + b + p.m + s + 2) /
          (static_cast<long double>(s + 1) * (b + s + 2));
    c[s + 1] = static_cast<double>(cur);
  }
  return UniPoly(std::move(c));
}

UniPoly r_poly_alt(const RPolyParams& p) {
  if (p.m == 0) return UniPoly::constant(1.0);
  const double a = p.alpha, b = p.beta;
  // For m >= 1 every Gamma argument below is positive; the standalone factor
  // alpha + m is positive as well.
  const double log_pref = std::lgamma(a + 1) + std::lgamma(b + p.m + 2) -
                          std::lgamma(a + b + 2) - std::log(a + p.m) -
                          std::lgamma(p.m + 1.0);
  std::vector<double> c(p.m + 1, 0.0);
  double sgn = 1.0;
  for (int s = 0; s <= p.m; ++s) {
    const double log_binom = std::lgamma(p.m + 1.0) - std::lgamma(s + 1.0) -
                             std::lgamma(p.m - s + 1.0);
    const double log_inv_beta =
        std::lgamma(a + b + p.m + s + 2) - std::lgamma(a + p.m) - std::lgamma(b + s + 2);
    c[s] = sgn * std::exp(log_pref + log_binom + log_inv_beta);
    sgn = -sgn;
  }
  return UniPoly(std::move(c));
}

double r_value_jacobi(const RPolyParams& p, double t) {
  const double a = p.alpha, b = p.beta;
  const double log_ratio = std::lgamma(a + 1) - std::lgamma(a + b + 2) -
                           std::lgamma(a + p.m + 1) + std::lgamma(a + b + p.m + 2);
  const double sign = (p.m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_ratio) * jacobi_eval(JacobiParams(a, b + 1, p.m), 2 * t - 1);
}

double r_value_jacobi_sym(const RPolyParams& p, double t) {
  const double a = p.alpha, b = p.beta;
  const double log_ratio = std::lgamma(a + 1) - std::lgamma(a + b + 2) -
                           std::lgamma(a + p.m + 1) + std::lgamma(a + b + p.m + 2);
  return std::exp(log_ratio) * jacobi_eval(JacobiParams(b + 1, a, p.m), 1 - 2 * t);
}

}  // namespace polyberg::special_fn
