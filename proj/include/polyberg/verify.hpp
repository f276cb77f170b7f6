#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyberg/kernels.hpp"
#include "polyberg/rng.hpp"
#include "polyberg/types.hpp"

namespace polyberg::verify {

using geometry::CPoint;
using geometry::Domain;

// Monte Carlo configuration. The estimate is a pure function of
// (samples, seed, chunk); `threads` only changes how the work is scheduled.
struct MCConfig {
  long long samples = 200000;
  std::uint64_t seed = 1;
  long long chunk = 65536;
  int threads = 1;
};

struct CheckRecord {
  std::string id;
  double residual;
  double tol;
  std::optional<double> sigma;  // present on stochastic checks (tol = 4 sigma)
  bool pass;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  bool pass = true;

  void add(std::string id, double residual, double tol,
           std::optional<double> sigma = std::nullopt);
  void absorb(const VerifyReport& sub);  // append checks, conjoin pass
  std::string to_json() const;
};

// Exact integral of h against the weight (1-t)^alpha t^beta on [0,1],
// summed coefficientwise from Beta moments; no quadrature error.
double interval_integrate_poly(const special_fn::UniPoly& h, double alpha, double beta);

// Defect of the interval reproducing identity, evaluated in quad precision.
// The coefficients of R_m reach ~5e8 times the normalized integral on the
// tested parameter range, so double arithmetic can only pin the Beta-moment
// sum to ~1e-8; rebuilding coefficients and moments from positive ratio
// products in __float128 leaves the identity itself as the only error source.
// interval_kronecker_residual: worst |normalized moment - [k == 0]|, 0<=k<=m.
// interval_reproducing_residual: |normalized integral of R_m h - h(0)|.
double interval_kronecker_residual(int m, double alpha, double beta);
double interval_reproducing_residual(int m, double alpha, double beta,
                                     const special_fn::UniPoly& h);

// One draw from the normalized weighted measure on the ball: uniform
// direction on the real sphere, squared radius from Beta(n, alpha+1).
CPoint mc_sample_ball(const SpaceParams& params, rng::SubstreamRng& gen);

struct MCEstimate {
  cplx estimate;
  double std_error;
};

// Chunked sample mean of f against the normalized ball measure. A handle
// tagged for the half-space is integrated against its weighted measure by
// pulling back through the Cayley map (weight 1/|h_alpha|^2), so no
// unbounded-domain sampler is needed. Identical (samples, seed, chunk) give
// bit-identical results for any thread count.
MCEstimate mc_integrate(const kernels::FnHandle& f, const SpaceParams& params, const MCConfig& cfg);

// Nested central-difference Wirtinger derivative of order k with one
// Richardson level. Stencil points are revalidated against the domain tag.
cplx numeric_wirtinger(const kernels::FnHandle& f, const multipoly::MultiIndex& k, const CPoint& z,
                       double h_step = 1e-3);

// Largest |f| over the order-step stencil around z; the reference scale for
// "this derivative vanishes" checks, so tiny functions cannot fake a pass.
double stencil_scale(const kernels::FnHandle& f, const CPoint& z, double h_step, int order);

// Shared random generators (deterministic in the SubstreamRng state).
multipoly::MixedPoly random_space_member(rng::SubstreamRng& gen, int n, int m, int zdeg,
                                         int terms = 0);  // 0 = dense
CPoint random_ball_point(rng::SubstreamRng& gen, int n, double rmax);
CPoint random_siegel_point(rng::SubstreamRng& gen, int n);

// R_{m-1}^{(alpha,n-1)}(|z|^2) expanded as a polynomial in z and conj(z).
multipoly::MixedPoly radial_mixed(const special_fn::UniPoly& radial, int n);

// Exact integral of a polynomial against the normalized ball measure.
cplx exact_ball_integral(const multipoly::MixedPoly& p, const SpaceParams& params);

// Named verification suites. Check identifiers are stable and already
// namespaced (mvp/..., rk/..., identities/..., unitary/..., berezin/...).
VerifyReport suite_mvp(const SpaceParams& params, int trials, std::uint64_t seed);
VerifyReport suite_reproducing(const SpaceParams& params, const std::vector<CPoint>& z_list,
                               const MCConfig& cfg);
VerifyReport suite_identities(const SpaceParams& params, const MCConfig& cfg);
VerifyReport suite_unitary(const SpaceParams& params, const MCConfig& cfg);
VerifyReport suite_berezin(const SpaceParams& params, std::uint64_t seed);

// The deterministic reproducing-check centers used by verify_all: three
// seeded draws with |z| <= 0.7 (larger radii blow the kernel up faster than
// the Monte Carlo error shrinks).
std::vector<CPoint> default_centers(const SpaceParams& params, std::uint64_t seed);

// All suites in one report (suite name "all").
VerifyReport verify_all(const SpaceParams& params, const MCConfig& cfg);

}  // namespace polyberg::verify
