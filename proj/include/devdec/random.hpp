#ifndef DEVDEC_RANDOM_HPP
#define DEVDEC_RANDOM_HPP

#include <cstdint>
#include <random>

#include "devdec/tensor.hpp"

namespace devdec {

/// Uniform double in [-1, 1) from the top 53 bits of one engine draw.
/// Unlike std::uniform_real_distribution the mapping is fixed, so a seed
/// gives the same numbers on every standard library.
inline double uniform_symmetric(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
}

/// Tensor with independent uniform components in [-1, 1).
inline Tensor random_tensor(int order, std::mt19937_64& gen) {
  Tensor t(order);
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = uniform_symmetric(gen);
  return t;
}

inline Tensor random_tensor(int order, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return random_tensor(order, gen);
}

}  // namespace devdec

#endif  // DEVDEC_RANDOM_HPP
