#include "polyberg/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace polyberg::kernels {

namespace {

using geometry::hdot;
using geometry::principal_pow;
using geometry::sq_abs;

cplx int_pow(cplx t, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= t;
  return r;
}

void require_tag(const CPoint& p, Domain d, const char* what) {
  if (p.tag() != d) throw std::invalid_argument(std::string(what) + ": point carries the wrong domain tag");
}

void require_dim(const CPoint& p, int n, const char* what) {
  if (p.dim() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// A(xi, eta) = (xi_n - conj(eta_n)) / (2i) - <xi', eta'>. Plays the role of
// 1 - <z,w> after the Cayley map; |A|^2 >= height(xi) height(eta) > 0 and
// conj(A(xi, eta)) = A(eta, xi).
cplx siegel_a(const CPoint& xi, const CPoint& eta) {
  const int n = xi.dim();
  cplx tail = 0.0;
  for (int i = 0; i + 1 < n; ++i) tail += xi[i] * std::conj(eta[i]);
  return (xi[n - 1] - std::conj(eta[n - 1])) / cplx(0.0, 2.0) - tail;
}

// All four kernel routes share the scalar part; `quotient` is the
// domain-specific unimodular-times-power factor and x = 1 - rho^2.
KernelVariants variants_from(const KernelSpec& spec, cplx quotient, double x) {
  const int n = spec.params().n;
  const int m = spec.params().m;
  const double al = spec.params().alpha;

  double rho2 = 1.0 - x;
  if (rho2 < 0.0) rho2 = 0.0;

  const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m-1)
  const double bpref = special_fn::beta_fn(al + 1, n) / special_fn::beta_fn(al + m, n);
  const special_fn::JacobiParams jp(al, n, m - 1);

  KernelVariants out;
  out.primary = quotient * spec.radial()(rho2);
  out.jacobi = quotient * (sign * bpref * special_fn::jacobi_eval(jp, 2.0 * rho2 - 1.0));
  out.jacobi_direct = quotient * (sign * bpref * special_fn::jacobi_eval(jp, 1.0 - 2.0 * x));

  const double lg_head =
      special_fn::log_gamma(al + 1) - special_fn::log_gamma(al + n + 1) - special_fn::log_gamma(m);
  double sum = 0.0;
  double xs = 1.0;
  for (int s = 0; s <= m - 1; ++s) {
    double term = special_fn::binomial_int(m - 1, s) *
                  std::exp(lg_head + special_fn::log_gamma(al + m + n + s) - special_fn::log_gamma(al + s + 1));
    sum += ((s % 2 == 0) ? term : -term) * xs;
    xs *= x;
  }
  out.explicit_sum = quotient * (sign * sum);
  return out;
}

}  // namespace

FnHandle::FnHandle(Fn f, Domain domain, std::string note)
    : f_(std::move(f)), domain_(domain), note_(std::move(note)) {
  if (!f_) throw std::invalid_argument("FnHandle: empty callable");
}

FnHandle FnHandle::from_poly(multipoly::MixedPoly p, Domain domain, std::string note) {
  auto shared = std::make_shared<const multipoly::MixedPoly>(std::move(p));
  FnHandle h([shared](const CPoint& at) { return (*shared)(at); }, domain, std::move(note));
  h.poly_ = shared;
  return h;
}

cplx FnHandle::operator()(const CPoint& at) const {
  if (domain_ != Domain::none && at.tag() != domain_)
    throw std::invalid_argument("FnHandle: point tag does not match the handle domain");
  return f_(at);
}

KernelSpec::KernelSpec(SpaceParams params, Domain domain)
    : params_(params),
      domain_(domain),
      radial_(special_fn::r_poly(special_fn::RPolyParams(params.m - 1, params.alpha, params.n - 1))) {
  if (domain_ == Domain::none) throw std::invalid_argument("KernelSpec: a concrete domain is required");
  const int n = params_.n;
  const int m = params_.m;
  const double al = params_.alpha;
  diag_constant_ = special_fn::binomial_int(n + m - 1, n) * special_fn::beta_fn(al + 1, n) /
                   special_fn::beta_fn(al + m, n);
}

cplx pessoa_factor(int m, const CPoint& a, const CPoint& z) {
  cplx num = 1.0 - hdot(a, z);
  cplx den = 1.0 - hdot(z, a);
  return int_pow(num / den, m - 1);
}

cplx norm_factor_ball(double alpha, const CPoint& a, const CPoint& z) {
  const double e = a.dim() + 1 + alpha;
  const double num = std::pow(1.0 - sq_abs(a), 0.5 * e);
  return num / principal_pow(1.0 - hdot(z, a), e);
}

cplx apply_U(const SpaceParams& params, const CPoint& a, const FnHandle& f, const CPoint& z) {
  require_tag(a, Domain::ball, "apply_U");
  require_tag(z, Domain::ball, "apply_U");
  require_dim(a, params.n, "apply_U");
  require_dim(z, params.n, "apply_U");
  return f(geometry::mobius(a, z)) * pessoa_factor(params.m, a, z) * norm_factor_ball(params.alpha, a, z);
}

cplx kernel_ball(const KernelSpec& spec, const CPoint& z, const CPoint& w) {
  if (spec.domain() != Domain::ball) throw std::invalid_argument("kernel_ball: spec is not ball-bound");
  require_tag(z, Domain::ball, "kernel_ball");
  require_tag(w, Domain::ball, "kernel_ball");
  const int n = spec.params().n;
  require_dim(z, n, "kernel_ball");
  require_dim(w, n, "kernel_ball");
  const int m = spec.params().m;

  cplx one_minus = 1.0 - hdot(z, w);  // 1 - <w,z> is its conjugate
  double rho2 = 1.0 - (1.0 - sq_abs(z)) * (1.0 - sq_abs(w)) / std::norm(one_minus);
  if (rho2 < 0.0) rho2 = 0.0;
  return int_pow(one_minus, m - 1) /
         principal_pow(std::conj(one_minus), n + m + spec.params().alpha) * spec.radial()(rho2);
}

double kernel_ball_diag(const KernelSpec& spec, const CPoint& z) {
  if (spec.domain() != Domain::ball) throw std::invalid_argument("kernel_ball_diag: spec is not ball-bound");
  require_tag(z, Domain::ball, "kernel_ball_diag");
  require_dim(z, spec.params().n, "kernel_ball_diag");
  const double e = spec.params().n + spec.params().alpha + 1;
  return spec.diag_constant() * std::pow(1.0 - sq_abs(z), -e);
}

KernelVariants kernel_ball_variants(const KernelSpec& spec, const CPoint& z, const CPoint& w) {
  if (spec.domain() != Domain::ball) throw std::invalid_argument("kernel_ball_variants: spec is not ball-bound");
  require_tag(z, Domain::ball, "kernel_ball_variants");
  require_tag(w, Domain::ball, "kernel_ball_variants");
  const int n = spec.params().n;
  require_dim(z, n, "kernel_ball_variants");
  require_dim(w, n, "kernel_ball_variants");
  const int m = spec.params().m;

  cplx one_minus = 1.0 - hdot(z, w);
  cplx quotient = int_pow(one_minus, m - 1) /
                  principal_pow(std::conj(one_minus), n + m + spec.params().alpha);
  double x = (1.0 - sq_abs(z)) * (1.0 - sq_abs(w)) / std::norm(one_minus);
  return variants_from(spec, quotient, x);
}

SiegelFactors siegel_factors(const SpaceParams& params, const CPoint& xi) {
  require_tag(xi, Domain::siegel, "siegel_factors");
  require_dim(xi, params.n, "siegel_factors");
  const cplx i(0.0, 1.0);
  const cplx d = 1.0 - i * xi[params.n - 1];
  SiegelFactors out;
  out.h_alpha = principal_pow(2.0 / d, params.n + params.alpha + 1);
  out.q_m = int_pow((1.0 + i * std::conj(xi[params.n - 1])) / d, params.m - 1);
  return out;
}

cplx apply_V(const SpaceParams& params, const FnHandle& f, const CPoint& xi) {
  require_tag(xi, Domain::siegel, "apply_V");
  require_dim(xi, params.n, "apply_V");
  SiegelFactors fac = siegel_factors(params, xi);
  return f(geometry::cayley_to_ball(xi)) * fac.h_alpha * fac.q_m;
}

cplx apply_V_inverse(const SpaceParams& params, const FnHandle& f, const CPoint& z) {
  require_tag(z, Domain::ball, "apply_V_inverse");
  require_dim(z, params.n, "apply_V_inverse");
  CPoint xi = geometry::cayley_to_siegel(z);
  SiegelFactors fac = siegel_factors(params, xi);
  return f(xi) / (fac.h_alpha * fac.q_m);
}

cplx kernel_siegel(const KernelSpec& spec, const CPoint& xi, const CPoint& eta) {
  if (spec.domain() != Domain::siegel) throw std::invalid_argument("kernel_siegel: spec is not Siegel-bound");
  require_tag(xi, Domain::siegel, "kernel_siegel");
  require_tag(eta, Domain::siegel, "kernel_siegel");
  const int n = spec.params().n;
  require_dim(xi, n, "kernel_siegel");
  require_dim(eta, n, "kernel_siegel");
  const int m = spec.params().m;

  cplx a = siegel_a(xi, eta);
  double rho2 = 1.0 - geometry::siegel_height(xi) * geometry::siegel_height(eta) / std::norm(a);
  if (rho2 < 0.0) rho2 = 0.0;
  return int_pow(a, m - 1) / principal_pow(std::conj(a), n + m + spec.params().alpha) *
         spec.radial()(rho2);
}

double kernel_siegel_diag(const KernelSpec& spec, const CPoint& xi) {
  if (spec.domain() != Domain::siegel)
    throw std::invalid_argument("kernel_siegel_diag: spec is not Siegel-bound");
  require_tag(xi, Domain::siegel, "kernel_siegel_diag");
  require_dim(xi, spec.params().n, "kernel_siegel_diag");
  const double e = spec.params().n + spec.params().alpha + 1;
  return spec.diag_constant() * std::pow(geometry::siegel_height(xi), -e);
}

KernelVariants kernel_siegel_variants(const KernelSpec& spec, const CPoint& xi, const CPoint& eta) {
  if (spec.domain() != Domain::siegel)
    throw std::invalid_argument("kernel_siegel_variants: spec is not Siegel-bound");
  require_tag(xi, Domain::siegel, "kernel_siegel_variants");
  require_tag(eta, Domain::siegel, "kernel_siegel_variants");
  const int n = spec.params().n;
  require_dim(xi, n, "kernel_siegel_variants");
  require_dim(eta, n, "kernel_siegel_variants");
  const int m = spec.params().m;

  cplx a = siegel_a(xi, eta);
  cplx quotient = int_pow(a, m - 1) / principal_pow(std::conj(a), n + m + spec.params().alpha);
  double x = geometry::siegel_height(xi) * geometry::siegel_height(eta) / std::norm(a);
  return variants_from(spec, quotient, x);
}

cplx pushforward_kernel(const KernelFn& kernel, const PointMap& psi, const WeightFn& weight,
                        const CPoint& u, const CPoint& v) {
  return std::conj(weight(u)) * weight(v) * kernel(psi(u), psi(v));
}

cplx berezin_finite_rank(const FiniteRankOp& op, const KernelSpec& spec, const CPoint& z) {
  if (spec.domain() != Domain::ball)
    throw std::invalid_argument("berezin_finite_rank: a ball-bound spec is required");
  require_tag(z, Domain::ball, "berezin_finite_rank");
  require_dim(z, spec.params().n, "berezin_finite_rank");
  const int m = spec.params().m;

  cplx acc = 0.0;
  for (const auto& t : op.terms) {
    if (t.inner.dim() != spec.params().n || t.outer.dim() != spec.params().n)
      throw std::invalid_argument("berezin_finite_rank: term dimension mismatch");
    if (!multipoly::is_m_analytic(t.inner, m) || !multipoly::is_m_analytic(t.outer, m))
      throw std::invalid_argument("berezin_finite_rank: term lies outside the space");
    acc += t.coeff * std::conj(t.inner(z)) * t.outer(z);
  }
  return acc / kernel_ball_diag(spec, z);
}

}  // namespace polyberg::kernels
