#pragma once

#include <cstdint>
#include <random>

namespace polyberg::rng {

// 64-bit finalizing mix; decorrelates substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream keyed by (seed, stream). The sequence depends
// only on the key and the call order within the stream, never on which thread
// consumes it, so chunked Monte Carlo sums are reproducible under any degree
// of parallelism. Distributions are hand-rolled because the standard library
// ones are not bit-stable across implementations.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();            // strictly inside (0,1)
  double normal();             // standard Gaussian
  double gamma(double shape);  // shape > 0
  double beta(double a, double b);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace polyberg::rng
