#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace rffses {

enum class frequency_source { monte_carlo, quasi_monte_carlo };

// M sampled frequency vectors (rows) of a Gaussian kernel's spectral measure
// N(0, sigma^-2 I_d). Immutable once built.
class spectral_frequencies {
 public:
  spectral_frequencies(Eigen::MatrixXd freqs, double sigma, frequency_source source,
                       std::uint64_t seed);

  const Eigen::MatrixXd& freqs() const { return freqs_; }
  double sigma() const { return sigma_; }
  frequency_source source() const { return source_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index count() const { return freqs_.rows(); }
  Eigen::Index dim() const { return freqs_.cols(); }

 private:
  Eigen::MatrixXd freqs_;
  double sigma_;
  frequency_source source_;
  std::uint64_t seed_;
};

// n x 2M random Fourier features. Column 2m holds cos(w_m . x), column 2m+1
// holds sin(w_m . x), both multiplied by norm_scale.
struct feature_matrix {
  Eigen::MatrixXd values;
  double norm_scale = 1.0;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index frequencies() const { return values.cols() / 2; }
};

enum class weight_kind { uniform, bq, ses, uniform_shrinkage };

std::string_view to_string(weight_kind kind);

// Per-frequency weights. beta_m is the weight on cos(w_m . (x - x')) in the
// kernel estimate, so the uniform estimator is beta_m = 1/M.
struct feature_weights {
  Eigen::VectorXd beta;
  double lambda = 0.0;
  weight_kind kind = weight_kind::uniform;
  bool clamped = false;
};

feature_weights uniform_weights(Eigen::Index count);

// M i.i.d. draws from N(0, sigma^-2 I_d).
spectral_frequencies sample_mc_frequencies(Eigen::Index count, Eigen::Index dim, double sigma,
                                           std::uint64_t seed);

// Row i: (cos(w_m . x_i), sin(w_m . x_i)) / sqrt(M) for every m.
feature_matrix feature_map(const Eigen::MatrixXd& x, const spectral_frequencies& freqs);

// Column pair m carries sqrt(beta_m) instead of 1/sqrt(M). Negative weights are rejected.
feature_matrix weighted_feature_map(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                                    const feature_weights& weights);

}  // namespace rffses
