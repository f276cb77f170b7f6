#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "polyberg/geometry.hpp"
#include "polyberg/multipoly.hpp"
#include "polyberg/special_fn.hpp"
#include "polyberg/types.hpp"

namespace polyberg::kernels {

using geometry::CPoint;
using geometry::Domain;

// Callable function on a tagged domain. Polynomial-backed handles keep their
// coefficients so inner products can be taken exactly.
class FnHandle {
 public:
  using Fn = std::function<cplx(const CPoint&)>;

  FnHandle(Fn f, Domain domain, std::string note);
  static FnHandle from_poly(multipoly::MixedPoly p, Domain domain, std::string note = "polynomial");

  cplx operator()(const CPoint& at) const;
  Domain domain() const { return domain_; }
  const std::string& note() const { return note_; }
  const multipoly::MixedPoly* poly() const { return poly_.get(); }

 private:
  Fn f_;
  Domain domain_;
  std::string note_;
  std::shared_ptr<const multipoly::MixedPoly> poly_;
};

// Space parameters bound to a domain, with the radial reproducing polynomial
// and the diagonal constant precomputed once (kernel evaluation sits inside
// Monte Carlo loops).
class KernelSpec {
 public:
  KernelSpec(SpaceParams params, Domain domain);

  const SpaceParams& params() const { return params_; }
  Domain domain() const { return domain_; }
  const special_fn::UniPoly& radial() const { return radial_; }
  double diag_constant() const { return diag_constant_; }

 private:
  SpaceParams params_;
  Domain domain_;
  special_fn::UniPoly radial_;  // R_{m-1}^{(alpha, n-1)}
  double diag_constant_;        // binom(n+m-1, n) B(alpha+1, n) / B(alpha+m, n)
};

// Unimodular factor ((1 - <a,z>) / (1 - <z,a>))^{m-1} that repairs
// polyanalyticity under composition with the ball automorphism.
cplx pessoa_factor(int m, const CPoint& a, const CPoint& z);

// Norm-preserving factor (1-|a|^2)^{(n+1+alpha)/2} / (1 - <z,a>)^{n+1+alpha}.
cplx norm_factor_ball(double alpha, const CPoint& a, const CPoint& z);

// Weighted shift (U_a f)(z) = f(phi_a(z)) p_{m,a}(z) g_{alpha,a}(z); an
// involutive unitary on the order-m space.
cplx apply_U(const SpaceParams& params, const CPoint& a, const FnHandle& f, const CPoint& z);

// Reproducing kernel on the ball at z, evaluated at w, and its diagonal.
cplx kernel_ball(const KernelSpec& spec, const CPoint& z, const CPoint& w);
double kernel_ball_diag(const KernelSpec& spec, const CPoint& z);

// The same kernel through four algebraically equivalent routes: the radial
// polynomial at the squared pseudohyperbolic distance, the degree-(m-1)
// Jacobi polynomial at 2 rho^2 - 1, the same with the argument assembled
// directly from the product identity, and the terminal power sum.
struct KernelVariants {
  cplx primary;
  cplx jacobi;
  cplx jacobi_direct;
  cplx explicit_sum;
};
KernelVariants kernel_ball_variants(const KernelSpec& spec, const CPoint& z, const CPoint& w);

// Weights carrying the half-space structure: h_alpha normalizes the measure,
// q_m repairs polyanalyticity (unimodular).
struct SiegelFactors {
  cplx h_alpha;
  cplx q_m;
};
SiegelFactors siegel_factors(const SpaceParams& params, const CPoint& xi);

// (V f)(xi) = f(psi(xi)) h_alpha(xi) q_m(xi): unitary from the ball space to
// the Siegel space. apply_V_inverse is its adjoint/inverse.
cplx apply_V(const SpaceParams& params, const FnHandle& f, const CPoint& xi);
cplx apply_V_inverse(const SpaceParams& params, const FnHandle& f, const CPoint& z);

// Reproducing kernel on the Siegel domain and its variants.
cplx kernel_siegel(const KernelSpec& spec, const CPoint& xi, const CPoint& eta);
double kernel_siegel_diag(const KernelSpec& spec, const CPoint& xi);
KernelVariants kernel_siegel_variants(const KernelSpec& spec, const CPoint& xi, const CPoint& eta);

// Transport of a positive kernel along (U f)(v) = J(v) f(psi(v)):
// L_u(v) = conj(J(u)) J(v) K_{psi(u)}(psi(v)).
using KernelFn = std::function<cplx(const CPoint&, const CPoint&)>;
using PointMap = std::function<CPoint(const CPoint&)>;
using WeightFn = std::function<cplx(const CPoint&)>;
cplx pushforward_kernel(const KernelFn& kernel, const PointMap& psi, const WeightFn& weight,
                        const CPoint& u, const CPoint& v);

// Finite-rank operator A h = sum_i coeff_i <h, inner_i> outer_i with
// polynomial members, so Berezin values reduce to exact moments.
struct FiniteRankOp {
  struct Term {
    cplx coeff;
    multipoly::MixedPoly inner;
    multipoly::MixedPoly outer;
  };
  std::vector<Term> terms;
};

// Ber(A)(z) = <A K_z, K_z> / K_z(z) = sum_i c_i conj(inner_i(z)) outer_i(z) / K_z(z).
cplx berezin_finite_rank(const FiniteRankOp& op, const KernelSpec& spec, const CPoint& z);

}  // namespace polyberg::kernels
