#pragma once

#include <span>
#include <vector>

#include "polyberg/types.hpp"

namespace polyberg::geometry {

// Points closer to the boundary than this are rejected at construction:
// Jacobians and kernels blow up there and residual checks lose meaning.
inline constexpr double kDomainMargin = 1e-9;

enum class Domain { none, ball, siegel };

// |z|^2 and the Hermitian product sum z_i conj(w_i).
double sq_abs(std::span<const cplx> z);
cplx hdot(std::span<const cplx> z, std::span<const cplx> w);

// Boundary distance proxies: 1 - |z| for the ball, Im(z_n) - |z'|^2 for the
// Siegel domain (positive inside).
double ball_margin(std::span<const cplx> z);
double siegel_height(std::span<const cplx> z);

// Point of C^n carrying a domain tag. Tagged factories validate membership
// with the margin above; `unchecked` is for map outputs whose membership is
// guaranteed analytically but may fall inside the margin band.
class CPoint {
 public:
  static CPoint ball(std::vector<cplx> coords);
  static CPoint siegel(std::vector<cplx> coords);
  static CPoint untagged(std::vector<cplx> coords);
  static CPoint unchecked(std::vector<cplx> coords, Domain tag);
  static CPoint origin(int n);  // ball-tagged zero

  int dim() const { return static_cast<int>(z_.size()); }
  Domain tag() const { return tag_; }
  const std::vector<cplx>& coords() const { return z_; }
  cplx operator[](int i) const { return z_[i]; }
  operator std::span<const cplx>() const { return z_; }

  CPoint shifted(int component, cplx delta) const;  // revalidates under the tag

 private:
  CPoint(std::vector<cplx> coords, Domain tag, bool validate);

  std::vector<cplx> z_;
  Domain tag_;
};

cplx hdot(const CPoint& z, const CPoint& w);

// Principal-branch power exp(beta log t). t = 0 maps to 0 when beta > 0 and
// is rejected otherwise.
cplx principal_pow(cplx t, double beta);

// Involutive automorphism of the ball swapping 0 and a.
CPoint mobius(const CPoint& a, const CPoint& z);

// Closed-form real Jacobian of the automorphism at z.
double mobius_real_jacobian(const CPoint& a, const CPoint& z);

// Normalized defects of the four automorphism identities at (a, z, w):
// the two-point product identity, its diagonal case, the value against a,
// and the Jacobian involution J(z) J(phi_a(z)) = 1.
struct MobiusResiduals {
  double zw;
  double zz;
  double z0;
  double jacobian;
};
MobiusResiduals mobius_identities(const CPoint& a, const CPoint& z, const CPoint& w);

// Pseudohyperbolic distance |phi_z(w)| via the diagonal product identity.
double rho_ball(const CPoint& z, const CPoint& w);

// Cayley transform pair: ball -> Siegel and its inverse.
CPoint cayley_to_siegel(const CPoint& z);
CPoint cayley_to_ball(const CPoint& xi);

// Complex Jacobian determinant and real Jacobian of the Cayley map leaving
// the point's domain (ball -> Siegel for ball-tagged points, Siegel -> ball
// for Siegel-tagged ones). real == |complex det|^2 is asserted internally.
struct CayleyJacobians {
  cplx complex_det;
  double real_jacobian;
};
CayleyJacobians cayley_jacobians(const CPoint& p);

// Pseudohyperbolic distance on the Siegel domain: closed product formula,
// plus the definition route through the Cayley transform as an oracle.
double rho_siegel(const CPoint& xi, const CPoint& eta);
double rho_siegel_via_ball(const CPoint& xi, const CPoint& eta);

double siegel_height(const CPoint& xi);

}  // namespace polyberg::geometry
