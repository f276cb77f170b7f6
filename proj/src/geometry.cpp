#include "polyberg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace polyberg::geometry {

namespace {

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({1.0, a, b}); }

cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return cplx(1, 0);
    case 1: return cplx(0, 1);
    case 2: return cplx(-1, 0);
    default: return cplx(0, -1);
  }
}

}  // namespace

double sq_abs(std::span<const cplx> z) {
  double s = 0.0;
  for (const cplx& v : z) s += std::norm(v);
  return s;
}

cplx hdot(std::span<const cplx> z, std::span<const cplx> w) {
  if (z.size() != w.size()) throw std::invalid_argument("hdot: dimension mismatch");
  cplx s(0.0);
  for (size_t i = 0; i < z.size(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

cplx hdot(const CPoint& z, const CPoint& w) {
  return hdot(std::span<const cplx>(z.coords()), std::span<const cplx>(w.coords()));
}

double ball_margin(std::span<const cplx> z) { return 1.0 - std::sqrt(sq_abs(z)); }

double siegel_height(std::span<const cplx> z) {
  if (z.empty()) throw std::invalid_argument("siegel_height: empty point");
  const auto head = z.first(z.size() - 1);
  return z.back().imag() - sq_abs(head);
}

CPoint::CPoint(std::vector<cplx> coords, Domain tag, bool validate)
    : z_(std::move(coords)), tag_(tag) {
  if (z_.empty()) throw std::invalid_argument("CPoint: dimension must be >= 1");
  if (!validate) return;
  if (tag_ == Domain::ball && ball_margin(z_) < kDomainMargin)
    throw std::domain_error("CPoint: |z| exceeds 1 - 1e-9, too close to the sphere");
  if (tag_ == Domain::siegel && siegel_height(std::span<const cplx>(z_)) < kDomainMargin)
    throw std::domain_error("CPoint: Im(z_n) - |z'|^2 below 1e-9, too close to the boundary");
}

CPoint CPoint::ball(std::vector<cplx> coords) {
  return CPoint(std::move(coords), Domain::ball, true);
}

CPoint CPoint::siegel(std::vector<cplx> coords) {
  return CPoint(std::move(coords), Domain::siegel, true);
}

CPoint CPoint::untagged(std::vector<cplx> coords) {
  return CPoint(std::move(coords), Domain::none, false);
}

CPoint CPoint::unchecked(std::vector<cplx> coords, Domain tag) {
  return CPoint(std::move(coords), tag, false);
}

CPoint CPoint::origin(int n) { return CPoint(std::vector<cplx>(n, cplx(0.0)), Domain::ball, true); }

CPoint CPoint::shifted(int component, cplx delta) const {
  std::vector<cplx> c(z_);
  c.at(component) += delta;
  return CPoint(std::move(c), tag_, true);
}

cplx principal_pow(cplx t, double beta) {
  if (t == cplx(0.0)) {
    if (beta > 0.0) return cplx(0.0);
    throw std::domain_error("principal_pow: 0 cannot be raised to a non-positive power");
  }
  return std::exp(beta * std::log(t));
}

CPoint mobius(const CPoint& a, const CPoint& z) {
  if (a.tag() != Domain::ball || z.tag() != Domain::ball)
    throw std::invalid_argument("mobius: both points must be ball-tagged");
  if (a.dim() != z.dim()) throw std::invalid_argument("mobius: dimension mismatch");
  const int n = a.dim();
  const double aa = sq_abs(a.coords());
  if (aa == 0.0) return z;
  const cplx za = hdot(z, a);
  const double s = std::sqrt(1.0 - aa);
  const cplx denom = 1.0 - za;
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) {
    const cplx proj = (za / aa) * a[i];
    out[i] = (a[i] - proj - s * (z[i] - proj)) / denom;
  }
  return CPoint::unchecked(std::move(out), Domain::ball);
}

double mobius_real_jacobian(const CPoint& a, const CPoint& z) {
  if (a.dim() != z.dim()) throw std::invalid_argument("mobius_real_jacobian: dimension mismatch");
  const double base = (1.0 - sq_abs(a.coords())) / std::norm(1.0 - hdot(z, a));
  return std::pow(base, a.dim() + 1);
}

MobiusResiduals mobius_identities(const CPoint& a, const CPoint& z, const CPoint& w) {
  const CPoint fz = mobius(a, z);
  const CPoint fw = mobius(a, w);
  const auto defect = [](cplx lhs, cplx rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  };
  const double aa = sq_abs(a.coords());
  MobiusResiduals r{};
  r.zw = defect(1.0 - hdot(fz, fw),
                (1.0 - aa) * (1.0 - hdot(z, w)) / ((1.0 - hdot(z, a)) * (1.0 - hdot(a, w))));
  r.zz = defect(1.0 - sq_abs(fz.coords()),
                (1.0 - aa) * (1.0 - sq_abs(z.coords())) / std::norm(1.0 - hdot(z, a)));
  r.z0 = defect(1.0 - hdot(fz, a), (1.0 - aa) / (1.0 - hdot(z, a)));
  r.jacobian = defect(mobius_real_jacobian(a, z) * mobius_real_jacobian(a, fz), 1.0);
  return r;
}

double rho_ball(const CPoint& z, const CPoint& w) {
  if (z.dim() != w.dim()) throw std::invalid_argument("rho_ball: dimension mismatch");
  const double x = (1.0 - sq_abs(z.coords())) * (1.0 - sq_abs(w.coords())) /
                   std::norm(1.0 - hdot(z, w));
  return std::sqrt(std::clamp(1.0 - x, 0.0, 1.0));
}

CPoint cayley_to_siegel(const CPoint& z) {
  if (z.tag() != Domain::ball) throw std::invalid_argument("cayley_to_siegel: ball point expected");
  const int n = z.dim();
  const cplx d = 1.0 + z[n - 1];
  std::vector<cplx> out(n);
  const cplx i(0, 1);
  for (int s = 0; s < n - 1; ++s) out[s] = i * z[s] / d;
  out[n - 1] = i * (1.0 - z[n - 1]) / d;
  return CPoint::unchecked(std::move(out), Domain::siegel);
}

CPoint cayley_to_ball(const CPoint& xi) {
  if (xi.tag() != Domain::siegel)
    throw std::invalid_argument("cayley_to_ball: Siegel point expected");
  const int n = xi.dim();
  const cplx i(0, 1);
  const cplx d = 1.0 - i * xi[n - 1];
  std::vector<cplx> out(n);
  for (int s = 0; s < n - 1; ++s) out[s] = -2.0 * i * xi[s] / d;
  out[n - 1] = (1.0 + i * xi[n - 1]) / d;
  return CPoint::unchecked(std::move(out), Domain::ball);
}

CayleyJacobians cayley_jacobians(const CPoint& p) {
  const int n = p.dim();
  CayleyJacobians r{};
  if (p.tag() == Domain::ball) {
    const cplx d = 1.0 + p[n - 1];
    cplx dp(1.0);
    for (int k = 0; k <= n; ++k) dp *= d;
    r.complex_det = -2.0 * i_pow(n) / dp;
    r.real_jacobian = 4.0 / std::pow(std::norm(d), n + 1);
  } else if (p.tag() == Domain::siegel) {
    const cplx d = 1.0 - cplx(0, 1) * p[n - 1];
    cplx dp(1.0);
    for (int k = 0; k <= n; ++k) dp *= d;
    cplx num(1.0);
    for (int k = 0; k < n; ++k) num *= cplx(0, -2);
    r.complex_det = -num / dp;
    r.real_jacobian = std::pow(4.0, n) / std::pow(std::norm(d), n + 1);
  } else {
    throw std::invalid_argument("cayley_jacobians: point must be ball- or Siegel-tagged");
  }
  if (rel_gap(std::norm(r.complex_det), r.real_jacobian) > 1e-10)
    throw std::logic_error("cayley_jacobians: |complex det|^2 disagrees with the real Jacobian");
  return r;
}

double rho_siegel(const CPoint& xi, const CPoint& eta) {
  if (xi.dim() != eta.dim()) throw std::invalid_argument("rho_siegel: dimension mismatch");
  const int n = xi.dim();
  const std::span<const cplx> xs(xi.coords()), es(eta.coords());
  const cplx a = (xi[n - 1] - std::conj(eta[n - 1])) / cplx(0, 2) -
                 hdot(xs.first(n - 1), es.first(n - 1));
  const double x = siegel_height(xs) * siegel_height(es) / std::norm(a);
  return std::sqrt(std::clamp(1.0 - x, 0.0, 1.0));
}

double rho_siegel_via_ball(const CPoint& xi, const CPoint& eta) {
  return rho_ball(cayley_to_ball(xi), cayley_to_ball(eta));
}

double siegel_height(const CPoint& xi) {
  return siegel_height(std::span<const cplx>(xi.coords()));
}

}  // namespace polyberg::geometry
