#pragma once

#include <complex>
#include <stdexcept>

namespace polyberg {

using cplx = std::complex<double>;

// Parameters of one weighted space on a fixed domain: complex dimension n,
// polyanalyticity order m (functions killed by every order-m conjugate
// derivative), and radial weight exponent alpha > -1.
struct SpaceParams {
  int n;
  int m;
  double alpha;

  SpaceParams(int n_, int m_, double alpha_) : n(n_), m(m_), alpha(alpha_) {
    if (n < 1) throw std::domain_error("SpaceParams: n must be >= 1");
    if (m < 1) throw std::domain_error("SpaceParams: m must be >= 1");
    if (!(alpha > -1.0)) throw std::domain_error("SpaceParams: alpha must be > -1");
  }
};

}  // namespace polyberg
