#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rffses/spectral.hpp"

namespace rffses {

// M x d low-discrepancy points in [0, 1)^d.
struct unit_cube_points {
  Eigen::MatrixXd points;
  std::uint64_t scramble_seed = 0;
  std::uint64_t shift_seed = 0;
};

// Largest dimension supported by the prime-base table.
inline constexpr Eigen::Index max_halton_dimension = 1000;

// First `count` points (indices 1..count) of the d-dimensional Halton sequence.
// A nonzero scramble_seed applies a seeded digit permutation per dimension; a
// nonzero shift_seed applies a Cranley-Patterson rotation. Both zero gives the
// raw sequence.
unit_cube_points halton_points(Eigen::Index count, Eigen::Index dim, std::uint64_t scramble_seed,
                               std::uint64_t shift_seed);

// Standard normal quantile. Acklam's rational approximation refined by one
// Halley step against erfc.
double normal_quantile(double p);

// w = Phi^-1(t) / sigma per coordinate, i.e. samples of N(0, sigma^-2 I_d).
spectral_frequencies gaussian_transform(const unit_cube_points& points, double sigma);

// Scrambled + shifted Halton frequencies with both seeds derived from `seed`.
spectral_frequencies sample_qmc_frequencies(Eigen::Index count, Eigen::Index dim, double sigma,
                                            std::uint64_t seed);

// The n-th prime, 0-based (nth_prime(0) == 2), for n < max_halton_dimension.
std::uint32_t nth_prime(Eigen::Index n);

}  // namespace rffses
