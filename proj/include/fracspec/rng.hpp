#pragma once

#include <cstdint>
#include <vector>

#include "fracspec/linalg.hpp"

namespace fracspec {

// splitmix64 with an explicit uint64 -> [0,1) mapping. Used instead of
// <random> distributions so that seeded runs are byte-identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (no caching: deterministic stream position)
  double normal();

  SymmetricMatrix random_symmetric(std::size_t dim, double scale = 1.0);
  // Haar-ish orthogonal matrix: Gram-Schmidt on a Gaussian matrix.
  Matrix random_orthogonal(std::size_t dim);

 private:
  std::uint64_t state_;
};

}  // namespace fracspec
