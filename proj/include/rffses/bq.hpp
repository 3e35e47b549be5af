#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rffses/kernel.hpp"
#include "rffses/spectral.hpp"

namespace rffses {

struct bq_config {
  double sigma_gp = 1.0;
  double jitter = 1e-8;
};

// K_GP(a, b) = exp(-|w_a - w_b|^2 / (2 sigma_gp^2)) + jitter [a == b]
Eigen::MatrixXd gp_covariance(const spectral_frequencies& freqs, const bq_config& config);

// gamma_m = integral of K_GP(w, w_m) under N(0, sigma^-2 I_d):
//   (s^2 / (s^2 + sigma^-2))^(d/2) exp(-|w_m|^2 / (2 (s^2 + sigma^-2))),  s = sigma_gp
Eigen::VectorXd bq_gamma(const spectral_frequencies& freqs, const bq_config& config,
                         const gaussian_kernel& kernel);

// beta = K_GP^-1 gamma. If the Cholesky factorization fails the jitter is
// raised tenfold, up to 1e-2, before giving up.
feature_weights bq_weights(const spectral_frequencies& freqs, const bq_config& config,
                           const gaussian_kernel& kernel);

struct sigma_gp_score {
  double sigma_gp = 0.0;
  double relative_error = 0.0;  // +inf when the prior stayed singular
};

struct sigma_gp_tuning {
  double sigma_gp = 0.0;
  std::vector<sigma_gp_score> table;
  feature_weights weights;
};

// One global sigma_gp for all pairs: the grid value minimizing
// |t - t~| / |t| over `pairs` sampled data pairs.
sigma_gp_tuning tune_sigma_gp(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                              const gaussian_kernel& kernel, const std::vector<double>& grid,
                              Eigen::Index pairs, std::uint64_t seed, double jitter = 1e-8);

}  // namespace rffses
