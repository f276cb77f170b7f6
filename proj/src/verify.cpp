#include "polyberg/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <utility>

#include <Eigen/Dense>
#include <json.hpp>

namespace polyberg::verify {

namespace {

// Auxiliary RNG streams live far above any Monte Carlo chunk index.
constexpr std::uint64_t kAuxStreamBase = 1ULL << 40;

double rel_residual(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

cplx siegel_a(const CPoint& xi, const CPoint& eta) {
  const int n = xi.dim();
  cplx tail = 0.0;
  for (int i = 0; i + 1 < n; ++i) tail += xi[i] * std::conj(eta[i]);
  return (xi[n - 1] - std::conj(eta[n - 1])) / cplx(0.0, 2.0) - tail;
}

double poly_mag(const special_fn::UniPoly& p) {
  double s = 0.0;
  for (double c : p.coeffs()) s += std::abs(c);
  return s;
}

}  // namespace

void VerifyReport::add(std::string id, double residual, double tol, std::optional<double> sigma) {
  const bool ok = std::isfinite(residual) && residual <= tol;
  checks.push_back({std::move(id), residual, tol, sigma, ok});
  pass = pass && ok;
}

void VerifyReport::absorb(const VerifyReport& sub) {
  for (const auto& c : sub.checks) {
    checks.push_back(c);
    pass = pass && c.pass;
  }
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["residual"] = c.residual;
    cj["tol"] = c.tol;
    if (c.sigma) cj["sigma"] = *c.sigma;
    cj["pass"] = c.pass;
    j["checks"].push_back(std::move(cj));
  }
  j["pass"] = pass;
  return j.dump();
}

double interval_integrate_poly(const special_fn::UniPoly& h, double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::domain_error("interval_integrate_poly: weight exponents must exceed -1");
  double acc = 0.0;
  for (int s = 0; s <= h.degree(); ++s)
    acc += h.coeff(s) * special_fn::beta_fn(beta + s + 1, alpha + 1);
  return acc;
}

namespace {

using quad = __float128;

quad quad_abs(quad x) { return x < 0 ? -x : x; }

// Coefficients of R_m from positive ratio products; no cancellation happens
// before the final moment sum, which is the point of using quad here.
std::vector<quad> r_coeffs_quad(int m, double alpha, double beta) {
  const quad a = alpha, b = beta;
  quad c0 = 1;
  for (int j = 0; j < m; ++j)
    c0 *= (b + 2 + j) * (a + b + 2 + j) / ((a + 1 + j) * quad(j + 1));
  std::vector<quad> c(m + 1);
  c[0] = c0;
  for (int s = 0; s < m; ++s)
    c[s + 1] = -c[s] * quad(m - s) * (a + b + m + s + 2) / (quad(s + 1) * (b + s + 2));
  return c;
}

// Moments of the normalized weight: t^k integrates to
// prod_{j=1..k} (beta+j)/(alpha+beta+1+j).
std::vector<quad> normalized_moments_quad(int count, double alpha, double beta) {
  std::vector<quad> mt(count);
  mt[0] = 1;
  for (int t = 1; t < count; ++t)
    mt[t] = mt[t - 1] * (quad(beta) + t) / (quad(alpha) + beta + 1 + t);
  return mt;
}

void require_weight(int m, double alpha, double beta) {
  if (m < 0) throw std::domain_error("interval residual: m must be >= 0");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::domain_error("interval residual: weight exponents must exceed -1");
}

}  // namespace

double interval_kronecker_residual(int m, double alpha, double beta) {
  require_weight(m, alpha, beta);
  const std::vector<quad> c = r_coeffs_quad(m, alpha, beta);
  const std::vector<quad> mt = normalized_moments_quad(2 * m + 1, alpha, beta);
  quad worst = 0;
  for (int k = 0; k <= m; ++k) {
    quad acc = 0;
    for (int s = 0; s <= m; ++s) acc += c[s] * mt[s + k];
    worst = std::max(worst, quad_abs(acc - (k == 0 ? 1 : 0)));
  }
  return static_cast<double>(worst);
}

double interval_reproducing_residual(int m, double alpha, double beta,
                                     const special_fn::UniPoly& h) {
  require_weight(m, alpha, beta);
  const std::vector<quad> c = r_coeffs_quad(m, alpha, beta);
  const std::vector<quad> mt = normalized_moments_quad(m + h.degree() + 1, alpha, beta);
  quad acc = 0;
  for (int k = 0; k <= h.degree(); ++k) {
    quad inner = 0;
    for (int s = 0; s <= m; ++s) inner += c[s] * mt[s + k];
    acc += quad(h.coeff(k)) * inner;
  }
  return static_cast<double>(quad_abs(acc - quad(h.coeff(0))));
}

CPoint mc_sample_ball(const SpaceParams& params, rng::SubstreamRng& gen) {
  std::vector<cplx> z(params.n);
  double s2;
  do {
    s2 = 0.0;
    for (auto& v : z) {
      v = cplx(gen.normal(), gen.normal());
      s2 += std::norm(v);
    }
  } while (s2 == 0.0);
  const double t = gen.beta(params.n, params.alpha + 1.0);
  const double scale = std::sqrt(t / s2);
  for (auto& v : z) v *= scale;
  return CPoint::unchecked(std::move(z), Domain::ball);
}

MCEstimate mc_integrate(const kernels::FnHandle& f, const SpaceParams& params, const MCConfig& cfg) {
  if (cfg.samples < 1 || cfg.chunk < 1 || cfg.threads < 1)
    throw std::invalid_argument("mc_integrate: samples, chunk and threads must be positive");
  if (f.domain() == Domain::none)
    throw std::invalid_argument("mc_integrate: the integrand must carry a domain tag");
  const bool half_space = f.domain() == Domain::siegel;
  const long long n_chunks = (cfg.samples + cfg.chunk - 1) / cfg.chunk;

  struct Sums {
    cplx sum;
    double re2;
    double im2;
  };
  std::vector<Sums> partial(n_chunks, Sums{0.0, 0.0, 0.0});

  auto run_chunk = [&](long long ci) {
    rng::SubstreamRng gen(cfg.seed, static_cast<std::uint64_t>(ci));
    const long long count = std::min<long long>(cfg.chunk, cfg.samples - ci * cfg.chunk);
    Sums s{0.0, 0.0, 0.0};
    for (long long k = 0; k < count; ++k) {
      const CPoint z = mc_sample_ball(params, gen);
      cplx v;
      if (half_space) {
        const CPoint xi = geometry::cayley_to_siegel(z);
        v = f(xi) / std::norm(kernels::siegel_factors(params, xi).h_alpha);
      } else {
        v = f(z);
      }
      s.sum += v;
      s.re2 += v.real() * v.real();
      s.im2 += v.imag() * v.imag();
    }
    partial[static_cast<std::size_t>(ci)] = s;
  };

  if (cfg.threads == 1 || n_chunks == 1) {
    for (long long ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
  } else {
    std::atomic<long long> next{0};
    auto worker = [&] {
      for (;;) {
        const long long ci = next.fetch_add(1);
        if (ci >= n_chunks) return;
        run_chunk(ci);
      }
    };
    std::vector<std::thread> pool;
    const int nt = static_cast<int>(std::min<long long>(cfg.threads, n_chunks));
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Reduce in chunk order so the result never depends on the thread count.
  cplx sum = 0.0;
  double re2 = 0.0, im2 = 0.0;
  for (const auto& s : partial) {
    sum += s.sum;
    re2 += s.re2;
    im2 += s.im2;
  }
  const double n = static_cast<double>(cfg.samples);
  const cplx mean = sum / n;
  double var_re = 0.0, var_im = 0.0;
  if (cfg.samples > 1) {
    var_re = std::max(0.0, (re2 - n * mean.real() * mean.real()) / (n - 1.0));
    var_im = std::max(0.0, (im2 - n * mean.imag() * mean.imag()) / (n - 1.0));
  }
  return {mean, std::sqrt((var_re + var_im) / n)};
}

namespace {

using EvalFn = std::function<cplx(const CPoint&)>;

cplx dbar_once(const EvalFn& f, int j, const CPoint& z, double h) {
  const cplx dx = (f(z.shifted(j, cplx(h, 0))) - f(z.shifted(j, cplx(-h, 0)))) / (2.0 * h);
  const cplx dy = (f(z.shifted(j, cplx(0, h))) - f(z.shifted(j, cplx(0, -h)))) / (2.0 * h);
  return 0.5 * (dx + cplx(0, 1) * dy);
}

cplx dbar_nested(const EvalFn& f, std::vector<int> k, const CPoint& z, double h) {
  int j = -1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] > 0) {
      j = static_cast<int>(i);
      break;
    }
  }
  if (j < 0) return f(z);
  k[j] -= 1;
  const EvalFn g = [&f, j, h](const CPoint& w) { return dbar_once(f, j, w, h); };
  return dbar_nested(g, std::move(k), z, h);
}

// Step balancing roundoff (~eps/h^m) against truncation (~h^4 after
// Richardson) for an order-m nested difference.
double tuned_step(int order) { return std::pow(1e-16, 1.0 / (order + 4)); }

}  // namespace

cplx numeric_wirtinger(const kernels::FnHandle& f, const multipoly::MultiIndex& k, const CPoint& z,
                       double h_step) {
  if (k.dim() != z.dim())
    throw std::invalid_argument("numeric_wirtinger: index and point dimensions differ");
  if (!(h_step > 0.0)) throw std::invalid_argument("numeric_wirtinger: step must be positive");
  const EvalFn base = [&f](const CPoint& w) { return f(w); };
  const cplx coarse = dbar_nested(base, k.comps(), z, h_step);
  const cplx fine = dbar_nested(base, k.comps(), z, 0.5 * h_step);
  return (4.0 * fine - coarse) / 3.0;
}

double stencil_scale(const kernels::FnHandle& f, const CPoint& z, double h_step, int order) {
  double scale = std::abs(f(z));
  const double r = order * h_step;
  for (int j = 0; j < z.dim(); ++j) {
    for (const cplx d : {cplx(r, 0), cplx(-r, 0), cplx(0, r), cplx(0, -r)}) {
      scale = std::max(scale, std::abs(f(z.shifted(j, d))));
    }
  }
  return std::max(scale, 1e-12);
}

multipoly::MixedPoly random_space_member(rng::SubstreamRng& gen, int n, int m, int zdeg, int terms) {
  multipoly::MixedPoly p(n);
  auto coeff = [&gen] { return cplx(2.0 * gen.uniform() - 1.0, 2.0 * gen.uniform() - 1.0); };
  if (terms <= 0) {
    multipoly::for_each_multi_index(n, zdeg, [&](const multipoly::MultiIndex& j) {
      multipoly::for_each_multi_index(n, m - 1, [&](const multipoly::MultiIndex& k) {
        p.add_term(j, k, coeff());
      });
    });
    return p;
  }
  auto random_index = [&gen, n](int max_total) {
    std::vector<int> c(n, 0);
    int budget = max_total;
    for (int i = 0; i < n; ++i) {
      const int v = std::min(static_cast<int>(gen.uniform() * (budget + 1)), budget);
      c[i] = v;
      budget -= v;
    }
    return multipoly::MultiIndex(std::move(c));
  };
  for (int t = 0; t < terms; ++t) p.add_term(random_index(zdeg), random_index(m - 1), coeff());
  return p;
}

CPoint random_ball_point(rng::SubstreamRng& gen, int n, double rmax) {
  std::vector<cplx> z(n);
  double s2;
  do {
    s2 = 0.0;
    for (auto& v : z) {
      v = cplx(gen.normal(), gen.normal());
      s2 += std::norm(v);
    }
  } while (s2 == 0.0);
  const double r = rmax * std::pow(gen.uniform(), 1.0 / (2.0 * n));
  const double scale = r / std::sqrt(s2);
  for (auto& v : z) v *= scale;
  return CPoint::ball(std::move(z));
}

CPoint random_siegel_point(rng::SubstreamRng& gen, int n) {
  std::vector<cplx> xi(n);
  double head = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    xi[i] = cplx(gen.uniform() - 0.5, gen.uniform() - 0.5);
    head += std::norm(xi[i]);
  }
  const double height = 0.3 + 1.7 * gen.uniform();
  xi[n - 1] = cplx(2.0 * gen.uniform() - 1.0, head + height);
  return CPoint::siegel(std::move(xi));
}

multipoly::MixedPoly radial_mixed(const special_fn::UniPoly& radial, int n) {
  multipoly::MixedPoly r2(n);
  for (int i = 0; i < n; ++i)
    r2.add_term(multipoly::MultiIndex::unit(n, i), multipoly::MultiIndex::unit(n, i), 1.0);
  multipoly::MixedPoly out = multipoly::MixedPoly::constant(n, radial.coeff(0));
  multipoly::MixedPoly pw = multipoly::MixedPoly::constant(n, 1.0);
  for (int s = 1; s <= radial.degree(); ++s) {
    pw = pw * r2;
    out = out + pw * cplx(radial.coeff(s));
  }
  return out;
}

cplx exact_ball_integral(const multipoly::MixedPoly& p, const SpaceParams& params) {
  if (p.dim() != params.n)
    throw std::invalid_argument("exact_ball_integral: dimension mismatch");
  cplx acc = 0.0;
  for (const auto& [key, c] : p.terms()) {
    if (key.first == key.second)
      acc += c * multipoly::ball_moment(key.first, key.second, params.n, params.alpha);
  }
  return acc;
}

VerifyReport suite_mvp(const SpaceParams& params, int trials, std::uint64_t seed) {
  VerifyReport r;
  r.suite = "mvp";
  const int n = params.n;
  const int m = params.m;
  rng::SubstreamRng gen(seed, kAuxStreamBase + 1);

  const special_fn::UniPoly radial =
      special_fn::r_poly(special_fn::RPolyParams(m - 1, params.alpha, n - 1));
  const multipoly::MixedPoly rmix = radial_mixed(radial, n);

  // f == 1: the weighted average of the radial factor alone is 1.
  r.add("mvp/constant", std::abs(exact_ball_integral(rmix, params) - 1.0), 1e-12);

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const multipoly::MixedPoly f = random_space_member(gen, n, m, 6, 20);
    const cplx got = exact_ball_integral(f * rmix, params);
    const cplx want = f(CPoint::origin(n));
    worst = std::max(worst, rel_residual(got, want));
  }
  r.add("mvp/random-sweep", worst, 1e-9);

  // Unweighted corollary: averaging f * radial over a + rho*B recovers f(a).
  const SpaceParams flat(n, m, 0.0);
  const multipoly::MixedPoly rmix0 =
      radial_mixed(special_fn::r_poly(special_fn::RPolyParams(m - 1, 0.0, n - 1)), n);
  double worst0 = 0.0;
  for (int t = 0; t < std::max(5, trials / 4); ++t) {
    const multipoly::MixedPoly f = random_space_member(gen, n, m, 4, 12);
    const CPoint a = random_ball_point(gen, n, 0.4);
    const double rho = 0.1 + 0.4 * gen.uniform();
    const Eigen::MatrixXcd scale = rho * Eigen::MatrixXcd::Identity(n, n);
    const multipoly::MixedPoly g = multipoly::linear_change(multipoly::recenter(f, a), scale);
    worst0 = std::max(worst0, rel_residual(exact_ball_integral(g * rmix0, flat), f(a)));
  }
  r.add("mvp/recentered", worst0, 1e-9);
  return r;
}

VerifyReport suite_reproducing(const SpaceParams& params, const std::vector<CPoint>& z_list,
                               const MCConfig& cfg) {
  VerifyReport r;
  r.suite = "rk";
  const int n = params.n;
  const int m = params.m;
  rng::SubstreamRng gen(cfg.seed, kAuxStreamBase + 2);
  const kernels::KernelSpec spec(params, Domain::ball);

  // At the center the kernel is a polynomial, so the check is exact.
  {
    const multipoly::MixedPoly k0 = radial_mixed(spec.radial(), n);
    const multipoly::MixedPoly f = random_space_member(gen, n, m, 3, 12);
    const cplx got = multipoly::inner_product(f, k0, params);
    r.add("rk/origin-exact", rel_residual(got, f(CPoint::origin(n))), 1e-12);
  }

  for (std::size_t i = 0; i < z_list.size(); ++i) {
    const CPoint& z = z_list[i];
    if (z.tag() != Domain::ball || z.dim() != n)
      throw std::invalid_argument("suite_reproducing: centers must be ball points");
    const multipoly::MixedPoly fpoly = random_space_member(gen, n, m, 3, 12);
    const kernels::FnHandle integrand(
        [&spec, fpoly, z](const CPoint& w) {
          return fpoly(w) * std::conj(kernels::kernel_ball(spec, z, w));
        },
        Domain::ball, "f * conj(K_z)");
    MCConfig sub = cfg;
    sub.seed = rng::splitmix64(cfg.seed ^ (0x5B5EULL + i));
    const MCEstimate est = mc_integrate(integrand, params, sub);
    const double residual = std::abs(est.estimate - fpoly(z));
    r.add("rk/mc-z" + std::to_string(i), residual, std::max(4.0 * est.std_error, 1e-12),
          est.std_error);
  }
  return r;
}

VerifyReport suite_identities(const SpaceParams& params, const MCConfig& cfg) {
  VerifyReport r;
  r.suite = "identities";
  const int n = params.n;
  const int m = params.m;
  const double al = params.alpha;
  rng::SubstreamRng gen(cfg.seed, kAuxStreamBase + 3);
  const cplx i1(0, 1);
  const int sweep = 60;

  // Automorphism identities, including the degenerate center a = 0.
  {
    double zw = 0, zz = 0, z0 = 0, jac = 0;
    for (int t = 0; t < sweep; ++t) {
      const CPoint a = (t == 0) ? CPoint::origin(n) : random_ball_point(gen, n, 0.75);
      const CPoint z = random_ball_point(gen, n, 0.85);
      const CPoint w = random_ball_point(gen, n, 0.85);
      const geometry::MobiusResiduals res = geometry::mobius_identities(a, z, w);
      zw = std::max(zw, res.zw);
      zz = std::max(zz, res.zz);
      z0 = std::max(z0, res.z0);
      jac = std::max(jac, res.jacobian);
    }
    r.add("identities/phi-zw", zw, 1e-10);
    r.add("identities/phi-zz", zz, 1e-10);
    r.add("identities/phi-z0", z0, 1e-10);
    r.add("identities/phi-jacobian", jac, 1e-10);
  }

  // Pessoa and norm factors along the automorphism.
  {
    double p_abs = 0, p_inv = 0, g_prod = 0, g_main = 0;
    for (int t = 0; t < sweep; ++t) {
      const CPoint a = random_ball_point(gen, n, 0.7);
      const CPoint z = random_ball_point(gen, n, 0.85);
      const CPoint fz = geometry::mobius(a, z);
      const cplx p1 = kernels::pessoa_factor(m, a, z);
      const cplx p2 = kernels::pessoa_factor(m, a, fz);
      p_abs = std::max(p_abs, std::abs(std::abs(p1) - 1.0));
      p_inv = std::max(p_inv, std::abs(p2 * p1 - 1.0));
      const cplx g1 = kernels::norm_factor_ball(al, a, z);
      const cplx g2 = kernels::norm_factor_ball(al, a, fz);
      g_prod = std::max(g_prod, std::abs(g2 * g1 - 1.0));
      const double lhs = std::norm(g2) * geometry::mobius_real_jacobian(a, z) *
                         std::pow(1.0 - geometry::sq_abs(fz), al);
      const double rhs = std::pow(1.0 - geometry::sq_abs(z), al);
      g_main = std::max(g_main, std::abs(lhs - rhs) / rhs);
    }
    r.add("identities/p-unimodular", p_abs, 1e-10);
    r.add("identities/p-inversion", p_inv, 1e-10);
    r.add("identities/g-product", g_prod, 1e-10);
    r.add("identities/g-main", g_main, 1e-10);
  }

  // Cayley map identities.
  {
    double psi_inner = 0, psi_abs = 0, h_abs_res = 0, h_main_res = 0, inv_rule = 0, magic = 0;
    for (int t = 0; t < sweep; ++t) {
      const CPoint xi = random_siegel_point(gen, n);
      const CPoint eta = random_siegel_point(gen, n);
      const CPoint pxi = geometry::cayley_to_ball(xi);
      const CPoint peta = geometry::cayley_to_ball(eta);
      const cplx a = siegel_a(xi, eta);
      const cplx dxi = 1.0 - i1 * xi[n - 1];
      const cplx deta_c = 1.0 + i1 * std::conj(eta[n - 1]);

      const cplx lhs_inner = 1.0 - geometry::hdot(pxi, peta);
      const cplx rhs_inner = 4.0 * a / (dxi * deta_c);
      psi_inner = std::max(psi_inner, rel_residual(lhs_inner, rhs_inner));

      const double lhs_abs = 1.0 - geometry::sq_abs(pxi);
      const double rhs_abs = 4.0 * geometry::siegel_height(xi) / std::norm(dxi);
      psi_abs = std::max(psi_abs, std::abs(lhs_abs - rhs_abs) / rhs_abs);

      const kernels::SiegelFactors fac = kernels::siegel_factors(params, xi);
      const double jpsi = geometry::cayley_jacobians(xi).real_jacobian;
      const double habs_lhs = std::norm(fac.h_alpha);
      // |h_alpha|^2 = 4 (1-|psi(xi)|^2)^alpha J_R(psi) / height^alpha
      const double habs_rhs = 4.0 * std::pow(lhs_abs, al) * jpsi /
                              std::pow(geometry::siegel_height(xi), al);
      h_abs_res = std::max(h_abs_res, std::abs(habs_lhs - habs_rhs) / habs_rhs);

      const CPoint z = random_ball_point(gen, n, 0.85);
      const CPoint omz = geometry::cayley_to_siegel(z);
      const double jom = geometry::cayley_jacobians(z).real_jacobian;
      const double hm_lhs = 0.25 * std::norm(kernels::siegel_factors(params, omz).h_alpha) *
                            std::pow((1.0 - geometry::sq_abs(z)) / std::norm(1.0 + z[n - 1]), al) *
                            jom;
      const double hm_rhs = std::pow(1.0 - geometry::sq_abs(z), al);
      h_main_res = std::max(h_main_res, std::abs(hm_lhs - hm_rhs) / hm_rhs);

      inv_rule = std::max(inv_rule,
                          std::abs(jom * geometry::cayley_jacobians(omz).real_jacobian - 1.0));

      for (const double b : {0.5, 1.7, n + m + al}) {
        const cplx mlhs = geometry::principal_pow(lhs_inner, b);
        const cplx mrhs = std::pow(4.0, b) * geometry::principal_pow(a, b) /
                          (geometry::principal_pow(dxi, b) * geometry::principal_pow(deta_c, b));
        magic = std::max(magic, rel_residual(mlhs, mrhs));
      }
    }
    r.add("identities/psi-inner", psi_inner, 1e-10);
    r.add("identities/psi-abs", psi_abs, 1e-10);
    r.add("identities/h-abs", h_abs_res, 1e-10);
    r.add("identities/h-main", h_main_res, 1e-10);
    r.add("identities/cayley-inverse-rule", inv_rule, 1e-10);
    r.add("identities/magic-power", magic, 1e-10);
  }

  // The four kernel routes agree on both domains.
  {
    const kernels::KernelSpec bspec(params, Domain::ball);
    const kernels::KernelSpec sspec(params, Domain::siegel);
    const double bmag = poly_mag(bspec.radial());
    double vb = 0, vs = 0;
    for (int t = 0; t < 200; ++t) {
      const CPoint z = random_ball_point(gen, n, 0.8);
      const CPoint w = random_ball_point(gen, n, 0.8);
      const kernels::KernelVariants kv = kernels::kernel_ball_variants(bspec, z, w);
      const double scale = std::max(1.0, std::abs(kv.primary)) + bmag;
      vb = std::max({vb, std::abs(kv.jacobi - kv.primary) / scale,
                     std::abs(kv.jacobi_direct - kv.primary) / scale,
                     std::abs(kv.explicit_sum - kv.primary) / scale});
      const CPoint xi = random_siegel_point(gen, n);
      const CPoint eta = random_siegel_point(gen, n);
      const kernels::KernelVariants sv = kernels::kernel_siegel_variants(sspec, xi, eta);
      const double sscale = std::max(1.0, std::abs(sv.primary)) + bmag;
      vs = std::max({vs, std::abs(sv.jacobi - sv.primary) / sscale,
                     std::abs(sv.jacobi_direct - sv.primary) / sscale,
                     std::abs(sv.explicit_sum - sv.primary) / sscale});
    }
    r.add("identities/variants-ball", vb, 1e-10);
    r.add("identities/variants-siegel", vs, 1e-10);

    // Rotation invariance of the ball kernel.
    double rot = 0;
    for (int t = 0; t < 40; ++t) {
      const CPoint z = random_ball_point(gen, n, 0.8);
      const CPoint w = random_ball_point(gen, n, 0.8);
      const double th = 6.28318530717958647692 * gen.uniform();
      std::vector<cplx> phases(n);
      for (auto& ph : phases) ph = std::exp(i1 * (6.28318530717958647692 * gen.uniform()));
      auto apply = [&](const CPoint& v) {
        std::vector<cplx> out(v.coords());
        if (n >= 2) {
          const cplx a0 = std::cos(th) * out[0] - std::sin(th) * out[1];
          const cplx a1 = std::sin(th) * out[0] + std::cos(th) * out[1];
          out[0] = a0;
          out[1] = a1;
        }
        for (int c = 0; c < n; ++c) out[c] *= phases[c];
        return CPoint::unchecked(std::move(out), Domain::ball);
      };
      const cplx k1 = kernels::kernel_ball(bspec, z, w);
      const cplx k2 = kernels::kernel_ball(bspec, apply(z), apply(w));
      rot = std::max(rot, rel_residual(k2, k1));
    }
    r.add("identities/rotation", rot, 1e-10);

    // Gram matrices of kernel sections: Hermitian and nonnegative.
    auto gram = [&](Domain dom, double& herm, double& psd) {
      const kernels::KernelSpec& spec = (dom == Domain::ball) ? bspec : sspec;
      for (int draw = 0; draw < 10; ++draw) {
        const int npts = 20;
        std::vector<CPoint> pts;
        pts.reserve(npts);
        for (int p = 0; p < npts; ++p)
          pts.push_back(dom == Domain::ball ? random_ball_point(gen, n, 0.75)
                                            : random_siegel_point(gen, n));
        Eigen::MatrixXcd g(npts, npts);
        for (int a = 0; a < npts; ++a)
          for (int b = 0; b < npts; ++b)
            g(a, b) = (dom == Domain::ball) ? kernels::kernel_ball(spec, pts[a], pts[b])
                                            : kernels::kernel_siegel(spec, pts[a], pts[b]);
        const double dscale = std::max(1.0, g.diagonal().real().maxCoeff());
        herm = std::max(herm, (g - g.adjoint()).cwiseAbs().maxCoeff() / dscale);
        const Eigen::MatrixXcd sym = 0.5 * (g + g.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
        const double trace = sym.real().trace();
        psd = std::max(psd, std::max(0.0, -es.eigenvalues().minCoeff()) / trace);
      }
    };
    double hb = 0, pb = 0, hs = 0, ps = 0;
    gram(Domain::ball, hb, pb);
    gram(Domain::siegel, hs, ps);
    r.add("identities/gram-ball-hermitian", hb, 1e-10);
    r.add("identities/gram-ball-psd", pb, 1e-8);
    r.add("identities/gram-siegel-hermitian", hs, 1e-10);
    r.add("identities/gram-siegel-psd", ps, 1e-8);
  }
  return r;
}

VerifyReport suite_unitary(const SpaceParams& params, const MCConfig& cfg) {
  VerifyReport r;
  r.suite = "unitary";
  const int n = params.n;
  const int m = params.m;
  rng::SubstreamRng gen(cfg.seed, kAuxStreamBase + 4);

  // The weighted shift squares to the identity.
  {
    double invol = 0.0;
    for (int t = 0; t < 8; ++t) {
      const CPoint a = random_ball_point(gen, n, 0.6);
      const kernels::FnHandle f =
          kernels::FnHandle::from_poly(random_space_member(gen, n, m, 2, 10), Domain::ball);
      const kernels::FnHandle uf(
          [params, a, f](const CPoint& z) { return kernels::apply_U(params, a, f, z); },
          Domain::ball, "shifted");
      for (int p = 0; p < 6; ++p) {
        const CPoint z = random_ball_point(gen, n, 0.8);
        invol = std::max(invol, rel_residual(kernels::apply_U(params, a, uf, z), f(z)));
      }
    }
    r.add("unitary/u-involution", invol, 1e-10);
  }

  // Norm preservation under the shift, Monte Carlo against exact moments.
  {
    const multipoly::MixedPoly fp = random_space_member(gen, n, m, 2, 10);
    const kernels::FnHandle f = kernels::FnHandle::from_poly(fp, Domain::ball);
    const CPoint a = random_ball_point(gen, n, 0.6);
    const kernels::FnHandle usq(
        [params, a, f](const CPoint& z) {
          return cplx(std::norm(kernels::apply_U(params, a, f, z)), 0.0);
        },
        Domain::ball, "|U_a f|^2");
    MCConfig sub = cfg;
    sub.seed = rng::splitmix64(cfg.seed ^ 0xA11CEULL);
    const MCEstimate est = mc_integrate(usq, params, sub);
    const double want = multipoly::inner_product(fp, fp, params).real();
    r.add("unitary/u-norm-mc", std::abs(est.estimate - want),
          std::max(4.0 * est.std_error, 1e-12), est.std_error);
  }

  // Cayley transport round trip.
  {
    double round = 0.0;
    const kernels::FnHandle f =
        kernels::FnHandle::from_poly(random_space_member(gen, n, m, 2, 10), Domain::ball);
    const kernels::FnHandle lifted(
        [params, f](const CPoint& xi) { return kernels::apply_V(params, f, xi); }, Domain::siegel,
        "lifted");
    for (int t = 0; t < 25; ++t) {
      const CPoint z = random_ball_point(gen, n, 0.8);
      round = std::max(round, rel_residual(kernels::apply_V_inverse(params, lifted, z), f(z)));
    }
    r.add("unitary/v-roundtrip", round, 1e-10);
  }

  // Norm preservation through the transport; exercises the half-space
  // integrator and its pullback weight end to end.
  {
    const multipoly::MixedPoly fp = random_space_member(gen, n, m, 2, 10);
    const kernels::FnHandle f = kernels::FnHandle::from_poly(fp, Domain::ball);
    const kernels::FnHandle vsq(
        [params, f](const CPoint& xi) {
          return cplx(std::norm(kernels::apply_V(params, f, xi)), 0.0);
        },
        Domain::siegel, "|V f|^2");
    MCConfig sub = cfg;
    sub.seed = rng::splitmix64(cfg.seed ^ 0xB0B0ULL);
    const MCEstimate est = mc_integrate(vsq, params, sub);
    const double want = multipoly::inner_product(fp, fp, params).real();
    r.add("unitary/v-norm-mc", std::abs(est.estimate - want),
          std::max(4.0 * est.std_error, 1e-12), est.std_error);
  }

  // Transported members stay in the space: all order-m derivatives vanish.
  {
    double worst_u = 0.0, worst_v = 0.0;
    const double h = tuned_step(m);
    const kernels::FnHandle f =
        kernels::FnHandle::from_poly(random_space_member(gen, n, m, 2, 8), Domain::ball);
    const CPoint a = random_ball_point(gen, n, 0.5);
    const kernels::FnHandle uf(
        [params, a, f](const CPoint& z) { return kernels::apply_U(params, a, f, z); },
        Domain::ball, "shifted");
    const kernels::FnHandle vf(
        [params, f](const CPoint& xi) { return kernels::apply_V(params, f, xi); }, Domain::siegel,
        "lifted");
    std::vector<multipoly::MultiIndex> order_m;
    multipoly::for_each_multi_index(n, m, [&](const multipoly::MultiIndex& k) {
      if (k.total() == m) order_m.push_back(k);
    });
    for (int t = 0; t < 4; ++t) {
      const CPoint z = random_ball_point(gen, n, 0.5);
      const double su = stencil_scale(uf, z, h, m);
      for (const auto& k : order_m)
        worst_u = std::max(worst_u, std::abs(numeric_wirtinger(uf, k, z, h)) / su);
      const CPoint xi = random_siegel_point(gen, n);
      const double sv = stencil_scale(vf, xi, h, m);
      for (const auto& k : order_m)
        worst_v = std::max(worst_v, std::abs(numeric_wirtinger(vf, k, xi, h)) / sv);
    }
    r.add("unitary/m-derivatives-u", worst_u, 1e-4);
    r.add("unitary/m-derivatives-v", worst_v, 1e-4);
  }
  return r;
}

VerifyReport suite_berezin(const SpaceParams& params, std::uint64_t seed) {
  VerifyReport r;
  r.suite = "berezin";
  const int n = params.n;
  const int m = params.m;
  rng::SubstreamRng gen(seed, kAuxStreamBase + 5);
  const kernels::KernelSpec spec(params, Domain::ball);

  {
    double worst = 0.0;
    const kernels::FiniteRankOp zero;
    for (int t = 0; t < 10; ++t)
      worst = std::max(
          worst, std::abs(kernels::berezin_finite_rank(zero, spec, random_ball_point(gen, n, 0.8))));
    r.add("berezin/zero-op", worst, 1e-15);
  }

  // Projector-shaped rank-one term: transform real-valued in [0, ||f||^2].
  {
    const multipoly::MixedPoly f = random_space_member(gen, n, m, 2, 8);
    kernels::FiniteRankOp op;
    op.terms.push_back({1.0, f, f});
    const double norm2 = multipoly::inner_product(f, f, params).real();
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const cplx b = kernels::berezin_finite_rank(op, spec, random_ball_point(gen, n, 0.8));
      const double defect =
          std::max({std::abs(b.imag()), -b.real(), b.real() - norm2 * (1.0 + 1e-12)});
      worst = std::max(worst, std::max(0.0, defect) / std::max(1.0, norm2));
    }
    r.add("berezin/rank-one-range", worst, 1e-12);
  }

  // The transform is not injective for m >= 2: S kills it while exact
  // moments certify S != 0. (For m = 1 no such witness exists.)
  if (m >= 2) {
    const auto e1 = multipoly::MultiIndex::unit(n, 0);
    const auto o = multipoly::MultiIndex::zeros(n);
    const multipoly::MixedPoly z1 = multipoly::MixedPoly::monomial(e1, o, 1.0);
    const multipoly::MixedPoly z1bar = multipoly::MixedPoly::monomial(o, e1, 1.0);
    kernels::FiniteRankOp witness;
    witness.terms.push_back({1.0, z1, z1});
    witness.terms.push_back({-1.0, z1bar, z1bar});
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
      worst = std::max(worst, std::abs(kernels::berezin_finite_rank(
                                  witness, spec, random_ball_point(gen, n, 0.85))));
    r.add("berezin/witness-vanishes", worst, 1e-14);

    // <S z1, z1> = ||z1||^4 = 1/(n+alpha+1)^2, bounded away from zero, so
    // matching it to 1e-15 certifies the operator is nonzero.
    const cplx norm2 = multipoly::inner_product(z1, z1, params);
    const multipoly::MixedPoly sz1 = z1 * multipoly::inner_product(z1, z1, params) -
                                     z1bar * multipoly::inner_product(z1, z1bar, params);
    const cplx got = multipoly::inner_product(sz1, z1, params);
    r.add("berezin/witness-nonzero", std::abs(got - norm2 * norm2), 1e-15);
  }

  // Transport through the Cayley map on a finite-rank instance.
  {
    const kernels::KernelSpec half(params, Domain::siegel);
    const multipoly::MixedPoly f = random_space_member(gen, n, m, 2, 6);
    const multipoly::MixedPoly g = random_space_member(gen, n, m, 2, 6);
    const cplx c(0.7, 0.3);
    kernels::FiniteRankOp op;
    op.terms.push_back({c, f, g});
    const kernels::FnHandle fh = kernels::FnHandle::from_poly(f, Domain::ball);
    const kernels::FnHandle gh = kernels::FnHandle::from_poly(g, Domain::ball);
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const CPoint xi = random_siegel_point(gen, n);
      const cplx vf = kernels::apply_V(params, fh, xi);
      const cplx vg = kernels::apply_V(params, gh, xi);
      const cplx lhs = c * std::conj(vf) * vg / kernels::kernel_siegel_diag(half, xi);
      const cplx rhs = kernels::berezin_finite_rank(op, spec, geometry::cayley_to_ball(xi));
      worst = std::max(worst, rel_residual(lhs, rhs));
    }
    r.add("berezin/cayley-transport", worst, 1e-10);
  }
  return r;
}

std::vector<CPoint> default_centers(const SpaceParams& params, std::uint64_t seed) {
  rng::SubstreamRng gen(seed, kAuxStreamBase + 6);
  std::vector<CPoint> centers;
  for (int i = 0; i < 3; ++i) centers.push_back(random_ball_point(gen, params.n, 0.7));
  return centers;
}

VerifyReport verify_all(const SpaceParams& params, const MCConfig& cfg) {
  VerifyReport all;
  all.suite = "all";
  all.absorb(suite_mvp(params, 25, cfg.seed));
  all.absorb(suite_reproducing(params, default_centers(params, cfg.seed), cfg));
  all.absorb(suite_identities(params, cfg));
  all.absorb(suite_unitary(params, cfg));
  all.absorb(suite_berezin(params, cfg.seed));
  return all;
}

}  // namespace polyberg::verify
