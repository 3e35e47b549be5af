#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "rffses/spectral.hpp"

namespace rffses {

// k(x, x') = exp(-|x - x'|^2 / (2 sigma^2))
class gaussian_kernel {
 public:
  explicit gaussian_kernel(double sigma);

  double sigma() const { return sigma_; }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y) const;
  double from_squared_distance(double sq) const { return std::exp(-sq / (2.0 * sigma_ * sigma_)); }

 private:
  double sigma_;
};

struct gram_matrix {
  Eigen::MatrixXd values;
  bool exact = false;
};

gram_matrix exact_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const gaussian_kernel& kernel);

// Inner products of two feature blocks.
gram_matrix approx_gram(const feature_matrix& zx, const feature_matrix& zy);

// sum_m beta_m cos(w_m . (x_i - y_j)) with raw (possibly negative) weights.
gram_matrix weighted_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const spectral_frequencies& freqs, const feature_weights& weights);

// |K - K~|_F / |K|_F
double relative_error(const gram_matrix& exact, const gram_matrix& approx);

// Median pairwise Euclidean distance over a seeded subsample of at most
// `max_rows` rows. Used as the default bandwidth.
double median_pairwise_distance(const Eigen::MatrixXd& x, Eigen::Index max_rows,
                                std::uint64_t seed);

enum class data_distribution { standard_normal };

struct data_sampler {
  data_distribution distribution = data_distribution::standard_normal;
  Eigen::Index dim = 5;
};

struct stein_risk_result {
  double risk_uniform = 0.0;
  double risk_shrunk = 0.0;
  double alpha_star_estimate = 0.0;
  // Standard error of the per-trial difference (uniform loss - shrunk loss);
  // both losses use the same draws.
  double difference_stderr = 0.0;
  double mean_variance = 0.0;     // E[Var_w(k^)]
  double mean_sq_bias = 0.0;      // E[(mu - k)^2]
  std::int64_t trials = 0;
};

// Monte Carlo risk of the uniform estimator k^ and of alpha*mu + (1-alpha)*k^
// over fresh draws of (x, x', w_1..w_M).
stein_risk_result stein_risk_simulation(const gaussian_kernel& kernel, const data_sampler& sampler,
                                        Eigen::Index count, double alpha, double mu,
                                        std::int64_t trials, std::uint64_t seed);

}  // namespace rffses
