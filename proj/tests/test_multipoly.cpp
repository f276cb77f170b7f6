#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "polyberg/multipoly.hpp"
#include "polyberg/special_fn.hpp"

using namespace polyberg;
using namespace polyberg::multipoly;

namespace {

MultiIndex mi(std::vector<int> v) { return MultiIndex(std::move(v)); }

MixedPoly random_poly(std::mt19937_64& eng, int n, int max_zdeg, int max_zbardeg, int terms) {
  std::uniform_int_distribution<int> dz(0, max_zdeg), dk(0, max_zbardeg);
  std::uniform_real_distribution<double> cf(-2.0, 2.0);
  MixedPoly p(n);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> j(n), k(n);
    int zb = dk(eng);
    for (int i = 0; i < n; ++i) j[i] = dz(eng);
    // Distribute the conjugate budget over components.
    for (int i = 0; i < n; ++i) k[i] = 0;
    for (int u = 0; u < zb; ++u) k[std::uniform_int_distribution<int>(0, n - 1)(eng)]++;
    p.add_term(mi(j), mi(k), cplx(cf(eng), cf(eng)));
  }
  return p;
}

std::vector<cplx> random_point(std::mt19937_64& eng, int n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(u(eng), u(eng));
  return z;
}

}  // namespace

TEST_CASE("MultiIndex basics") {
  const MultiIndex k = mi({2, 0, 3});
  CHECK(k.dim() == 3);
  CHECK(k.total() == 5);
  CHECK(k.factorial() == doctest::Approx(12.0));
  CHECK(k[2] == 3);
  CHECK(MultiIndex::unit(3, 1).total() == 1);
  CHECK(k.plus(1, 2)[1] == 2);
  CHECK(MultiIndex::zeros(2).factorial() == doctest::Approx(1.0));
  CHECK_THROWS_AS(mi({1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(mi({}), std::invalid_argument);
  CHECK(mi({0, 1}) < mi({1, 0}));
}

TEST_CASE("multi-index enumeration covers the simplex once") {
  int count = 0;
  bool all_small = true;
  for_each_multi_index(2, 2, [&](const MultiIndex& k) {
    ++count;
    all_small = all_small && k.total() <= 2 && k.dim() == 2;
  });
  CHECK(count == 6);  // binom(2+2, 2)
  CHECK(all_small);
  count = 0;
  for_each_multi_index(3, 4, [&](const MultiIndex&) { ++count; });
  CHECK(count == 35);  // binom(4+3, 3)
}

TEST_CASE("MixedPoly term bookkeeping and canonical order") {
  MixedPoly p(2);
  p.add_term(mi({1, 0}), mi({0, 0}), cplx(1, 0));
  p.add_term(mi({0, 0}), mi({0, 1}), cplx(0, 2));
  p.add_term(mi({1, 0}), mi({0, 0}), cplx(2, 0));  // accumulates
  CHECK(p.term_count() == 2);
  CHECK(p.coeff(mi({1, 0}), mi({0, 0})) == cplx(3, 0));
  p.add_term(mi({1, 0}), mi({0, 0}), cplx(-3, 0));  // cancels away
  CHECK(p.term_count() == 1);
  CHECK(p.z_degree() == 0);
  CHECK(p.zbar_degree() == 1);

  // Graded order: constant before degree-1, z-part ranks before conj-part.
  MixedPoly q(1);
  q.add_term(mi({2}), mi({0}), 1.0);
  q.add_term(mi({0}), mi({0}), 5.0);
  q.add_term(mi({0}), mi({1}), 2.0);
  q.add_term(mi({1}), mi({0}), 3.0);
  std::vector<cplx> coeffs;
  for (const auto& [key, c] : q.terms()) coeffs.push_back(c);
  CHECK(coeffs == std::vector<cplx>{5.0, 2.0, 3.0, 1.0});
}

TEST_CASE("evaluation against hand values") {
  // p(z) = z1^2 conj(z2) + (1+i) z2
  MixedPoly p(2);
  p.add_term(mi({2, 0}), mi({0, 1}), 1.0);
  p.add_term(mi({0, 1}), mi({0, 0}), cplx(1, 1));
  const std::vector<cplx> z{cplx(1, 1), cplx(0, 2)};
  // z1^2 = 2i, conj(z2) = -2i, product = 4; (1+i) z2 = 2i - 2.
  CHECK(std::abs(p(z) - cplx(2, 2)) < 1e-14);
  const MixedPoly pc = p.conjugated();
  CHECK(std::abs(pc(z) - std::conj(p(z))) < 1e-14);
}

TEST_CASE("arithmetic consistency at random points") {
  std::mt19937_64 eng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 3);
    const MixedPoly a = random_poly(eng, n, 3, 2, 6);
    const MixedPoly b = random_poly(eng, n, 2, 2, 5);
    const auto z = random_point(eng, n, 1.0);
    const cplx va = a(z), vb = b(z);
    CHECK(std::abs((a + b)(z) - (va + vb)) < 1e-12);
    CHECK(std::abs((a - b)(z) - (va - vb)) < 1e-12);
    CHECK(std::abs((a * b)(z) - va * vb) < 1e-10);
    CHECK(std::abs((a * cplx(0, 2))(z) - cplx(0, 2) * va) < 1e-12);
  }
}

TEST_CASE("conjugate-Wirtinger derivative on monomials") {
  // Dbar^k conj(z)^r = r!/(r-k)! conj(z)^{r-k}, zero when any r_i < k_i.
  MixedPoly p(2);
  p.add_term(mi({1, 0}), mi({2, 1}), 2.0);
  const MixedPoly d = wirtinger_deriv(p, mi({1, 1}));
  CHECK(d.term_count() == 1);
  CHECK(d.coeff(mi({1, 0}), mi({1, 0})) == cplx(4.0));
  CHECK(wirtinger_deriv(p, mi({3, 0})).empty());
  // Analytic terms die under any first-order conjugate derivative.
  const MixedPoly an = MixedPoly::monomial(mi({4, 2}), mi({0, 0}), 1.0);
  CHECK(wirtinger_deriv(an, mi({1, 0})).empty());
  // Order-zero derivative is the identity.
  CHECK(wirtinger_deriv(p, mi({0, 0})).coeff(mi({1, 0}), mi({2, 1})) == cplx(2.0));
}

TEST_CASE("derivative of products of conjugate powers, dimension 1") {
  // Dbar(conj(z)^r) checked against the falling factorial for r = 0..5.
  for (int r = 0; r <= 5; ++r) {
    const MixedPoly p = MixedPoly::monomial(mi({0}), mi({r}), 1.0);
    MixedPoly d = p;
    for (int order = 1; order <= r; ++order) {
      d = wirtinger_deriv(d, mi({1}));
      double want = 1.0;
      for (int i = 0; i < order; ++i) want *= r - i;
      CHECK(d.coeff(mi({0}), mi({r - order})) == cplx(want));
    }
    CHECK(wirtinger_deriv(d, mi({1})).empty());
  }
}

TEST_CASE("order membership: degree route vs derivative route") {
  std::mt19937_64 eng(55);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 2);
    const MixedPoly p = random_poly(eng, n, 3, 3, 7);
    for (int m = 1; m <= 5; ++m)
      CHECK(is_m_analytic(p, m) == is_m_analytic_derivative_route(p, m));
  }
  // Exact threshold: conjugate-degree-d polynomial enters the class at m = d+1.
  const MixedPoly q = MixedPoly::monomial(mi({0, 1}), mi({1, 2}), 1.0);
  CHECK_FALSE(is_m_analytic(q, 3));
  CHECK(is_m_analytic(q, 4));
  CHECK(is_m_analytic_derivative_route(q, 4));
  CHECK_FALSE(is_m_analytic_derivative_route(q, 3));
}

TEST_CASE("compute_g extracts the conjugate-free coefficient") {
  // Build p = sum_r a_r(z) conj(z)^r with known analytic a_r; g must be a_0.
  std::mt19937_64 eng(77);
  for (int rep = 0; rep < 15; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 2);
    const int m = 2 + static_cast<int>(eng() % 3);
    const MixedPoly a0 = random_poly(eng, n, 3, 0, 4);
    MixedPoly p = a0;
    for_each_multi_index(n, m - 1, [&](const MultiIndex& r) {
      if (r.total() == 0) return;
      const MixedPoly ar = random_poly(eng, n, 2, 0, 3);
      p = p + ar * MixedPoly::monomial(MultiIndex::zeros(n), r, 1.0);
    });
    const MixedPoly g = compute_g(p, m);
    CHECK(g.zbar_degree() == 0);
    const MixedPoly diff = g - a0;
    CHECK(diff.max_abs_coeff() < 1e-10 * std::max(1.0, p.max_abs_coeff()));
  }
  // p = z conj(z) has vanishing conjugate-free coefficient.
  const MixedPoly zzbar = MixedPoly::monomial(mi({1}), mi({1}), 1.0);
  CHECK(compute_g(zzbar, 2).empty());
  CHECK_THROWS_AS(compute_g(zzbar, 1), std::domain_error);
}

TEST_CASE("expansion reconstruction from derivatives") {
  // p(z) = sum_{|k|<m} ((-1)^{|k|}/k!) (Dbar^k p)(z) conj(z)^k has alternating
  // signs that cancel everything except the conjugate-free part; the same sum
  // with p replaced by its conjugate-degree truncations rebuilds p.
  std::mt19937_64 eng(999);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 2);
    const int m = 2 + static_cast<int>(eng() % 2);
    const MixedPoly p = random_poly(eng, n, 3, m - 1, 8);
    REQUIRE(is_m_analytic(p, m));
    // Rebuild p from its analytic coefficients a_r = compute_g applied to
    // successive derivative shifts: a_r = (1/r!) * conj-free part of Dbar^r p
    // ... recovered via compute_g of Dbar^r p divided by r!.
    MixedPoly rebuilt(n);
    for_each_multi_index(n, m - 1, [&](const MultiIndex& r) {
      const MixedPoly dr = wirtinger_deriv(p, r);
      if (dr.empty()) return;
      const MixedPoly ar = compute_g(dr, m) * cplx(1.0 / r.factorial());
      rebuilt = rebuilt + ar * MixedPoly::monomial(MultiIndex::zeros(n), r, 1.0);
    });
    const MixedPoly diff = rebuilt - p;
    CHECK(diff.max_abs_coeff() < 1e-9 * std::max(1.0, p.max_abs_coeff()));
  }
}

TEST_CASE("recenter shifts the argument") {
  std::mt19937_64 eng(13);
  for (int rep = 0; rep < 15; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 3);
    const MixedPoly p = random_poly(eng, n, 3, 2, 6);
    const auto a = random_point(eng, n, 0.7);
    const MixedPoly q = recenter(p, a);
    for (int pt = 0; pt < 5; ++pt) {
      const auto w = random_point(eng, n, 0.8);
      std::vector<cplx> shifted(n);
      for (int i = 0; i < n; ++i) shifted[i] = w[i] + a[i];
      CHECK(std::abs(q(w) - p(shifted)) < 1e-10 * std::max(1.0, std::abs(p(shifted))));
    }
    // Exact round trip.
    std::vector<cplx> neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -a[i];
    const MixedPoly back = recenter(q, neg);
    CHECK((back - p).max_abs_coeff() < 1e-9 * std::max(1.0, p.max_abs_coeff()));
  }
}

TEST_CASE("linear_change composes and preserves conjugate degree") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> cf(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 2);
    const MixedPoly p = random_poly(eng, n, 3, 2, 6);
    Eigen::MatrixXcd A(n, n), B(n, n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        A(r, s) = cplx(cf(eng), cf(eng));
        B(r, s) = cplx(cf(eng), cf(eng));
      }
    const MixedPoly pa = linear_change(p, A);
    for (int pt = 0; pt < 5; ++pt) {
      const auto z = random_point(eng, n, 1.0);
      Eigen::VectorXcd zv(n);
      for (int i = 0; i < n; ++i) zv(i) = z[i];
      const Eigen::VectorXcd az = A * zv;
      const std::vector<cplx> azv(az.data(), az.data() + n);
      CHECK(std::abs(pa(z) - p(azv)) < 1e-9 * std::max(1.0, std::abs(p(azv))));
    }
    const MixedPoly pab1 = linear_change(pa, B);
    const MixedPoly pab2 = linear_change(p, Eigen::MatrixXcd(A * B));
    CHECK((pab1 - pab2).max_abs_coeff() < 1e-9 * std::max(1.0, pab2.max_abs_coeff()));
  }
  // Invertible change keeps both degrees (membership is class-invariant).
  MixedPoly p(2);
  p.add_term(mi({2, 1}), mi({1, 0}), 1.0);
  Eigen::MatrixXcd M(2, 2);
  M << cplx(1, 0), cplx(0, 1), cplx(0, 0), cplx(2, 0);
  const MixedPoly q = linear_change(p, M);
  CHECK(q.z_degree() == p.z_degree());
  CHECK(q.zbar_degree() == p.zbar_degree());
}

TEST_CASE("ball moments: anchors and radial oracle") {
  // Orthogonality off the diagonal.
  CHECK(ball_moment(mi({1, 0}), mi({0, 1}), 2, 0.0) == 0.0);
  CHECK(ball_moment(mi({2}), mi({1}), 1, 1.5) == 0.0);
  // Hand values on the disk and the 2-ball with the unweighted measure.
  CHECK(ball_moment(mi({1}), mi({1}), 1, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ball_moment(mi({2}), mi({2}), 1, 0.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(ball_moment(mi({1, 1}), mi({1, 1}), 2, 0.0) == doctest::Approx(1.0 / 12).epsilon(1e-12));
  // n = 1 radial oracle: int |z|^{2k} dmu_a = (a+1) B(k+1, a+1).
  for (int k = 0; k <= 6; ++k)
    for (double a : {-0.5, 0.0, 1.0, 2.5}) {
      const double want = (a + 1) * special_fn::beta_fn(k + 1, a + 1);
      CHECK(ball_moment(mi({k}), mi({k}), 1, a) == doctest::Approx(want).epsilon(1e-12));
    }
  CHECK_THROWS_AS(ball_moment(mi({1}), mi({1}), 1, -1.0), std::domain_error);
  CHECK_THROWS_AS(ball_moment(mi({1}), mi({1, 0}), 1, 0.0), std::invalid_argument);
}

TEST_CASE("inner_product: anchors, symmetry, positivity") {
  const SpaceParams params(1, 2, 0.0);
  const MixedPoly z = MixedPoly::monomial(mi({1}), mi({0}), 1.0);
  const MixedPoly zbar = MixedPoly::monomial(mi({0}), mi({1}), 1.0);
  CHECK(std::abs(inner_product(z, z, params) - cplx(0.5)) < 1e-13);
  CHECK(std::abs(inner_product(zbar, zbar, params) - cplx(0.5)) < 1e-13);
  CHECK(std::abs(inner_product(z, zbar, params)) < 1e-15);
  const MixedPoly diff = z - zbar;
  CHECK(std::abs(inner_product(diff, diff, params) - cplx(1.0)) < 1e-13);

  std::mt19937_64 eng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(eng() % 2);
    const SpaceParams sp(n, 3, 0.5);
    const MixedPoly p = random_poly(eng, n, 2, 2, 5);
    const MixedPoly q = random_poly(eng, n, 2, 2, 5);
    const cplx pq = inner_product(p, q, sp);
    const cplx qp = inner_product(q, p, sp);
    CHECK(std::abs(pq - std::conj(qp)) < 1e-12);
    const cplx pp = inner_product(p, p, sp);
    CHECK(pp.real() >= 0.0);
    CHECK(std::abs(pp.imag()) < 1e-12 * std::max(1.0, pp.real()));
    // Conjugate-linear in the second slot.
    const cplx s(0.3, -1.1);
    CHECK(std::abs(inner_product(p, q * s, sp) - std::conj(s) * pq) < 1e-12);
  }
}

TEST_CASE("JSON round trip and canonical serialization") {
  MixedPoly p(2);
  p.add_term(mi({1, 0}), mi({0, 2}), cplx(1.5, -0.25));
  p.add_term(mi({0, 0}), mi({0, 0}), cplx(-3, 0));
  const std::string text = p.to_json();
  const MixedPoly q = MixedPoly::from_json(text);
  CHECK(q.dim() == 2);
  CHECK((q - p).max_abs_coeff() == 0.0);
  CHECK(q.to_json() == text);

  // Insertion order does not leak into the serialization.
  MixedPoly r(2);
  r.add_term(mi({0, 0}), mi({0, 0}), cplx(-3, 0));
  r.add_term(mi({1, 0}), mi({0, 2}), cplx(1.5, -0.25));
  CHECK(r.to_json() == text);

  CHECK_THROWS_AS(MixedPoly::from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(MixedPoly::from_json("{\"dim\":0,\"terms\":[]}"), std::invalid_argument);
  CHECK_THROWS_AS(MixedPoly::from_json("{\"dim\":2,\"terms\":[{\"j\":[1],\"k\":[0,0]}]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(MixedPoly::from_json("{\"dim\":1,\"terms\":[{\"j\":[-1],\"k\":[0]}]}"),
                  std::invalid_argument);
}
