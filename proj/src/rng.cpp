#include "polyberg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace polyberg::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)))) {}

std::uint64_t SubstreamRng::next_u64() { return eng_(); }

double SubstreamRng::uniform() {
  // Centered 53-bit lattice: never 0 or 1, so logs and powers are safe.
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double SubstreamRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double two_pi = 6.283185307179586;
  double r = std::sqrt(-2.0 * std::log(uniform()));
  double t = two_pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double SubstreamRng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost a gamma(shape+1) draw down by a uniform power.
    return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze method.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double SubstreamRng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

}  // namespace polyberg::rng
