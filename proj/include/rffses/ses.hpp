#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rffses/kernel.hpp"
#include "rffses/spectral.hpp"

namespace rffses {

struct pair_index {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  friend bool operator==(const pair_index&, const pair_index&) = default;
};

// Least-squares system over sampled data pairs. Row k belongs to pairs[k]:
// targets(k) = k(x_i, x_j), design(k, m) = cos(w_m . (x_i - x_j)) / M.
// targets and design are stored unscaled; a sketch only sets row_scales, and
// the solver weights row k by row_scales(k)^2.
struct pair_system {
  Eigen::VectorXd targets;
  Eigen::MatrixXd design;
  std::vector<pair_index> pairs;
  Eigen::VectorXd row_scales;
  bool sketched = false;

  Eigen::Index rows() const { return design.rows(); }
  Eigen::Index frequencies() const { return design.cols(); }
};

// `count` distinct unordered pairs (i <= j) drawn uniformly without
// replacement from n rows. Returns every pair when count >= n(n+1)/2.
std::vector<pair_index> sample_pairs(Eigen::Index n, Eigen::Index count, std::uint64_t seed);

// Disjoint train/validation pair sets drawn in one pass.
struct pair_split {
  std::vector<pair_index> train;
  std::vector<pair_index> validation;
};
pair_split sample_pair_split(Eigen::Index n, Eigen::Index train_count, Eigen::Index val_count,
                             std::uint64_t seed);

// All n^2 ordered pairs, row-major.
std::vector<pair_index> all_ordered_pairs(Eigen::Index n);

pair_system build_pair_system(const Eigen::MatrixXd& x, const std::vector<pair_index>& pairs,
                              const spectral_frequencies& freqs, const gaussian_kernel& kernel);

// Norm-proportional row sampling: row k is kept with probability
// p_k = min(1, r |Z_k| / sum_l |Z_l|) and rescaled by 1/sqrt(p_k).
pair_system sample_sketch(const pair_system& system, Eigen::Index r, std::uint64_t seed);

// Ridge coefficients c = (Z^T D Z + lambda I)^-1 Z^T D t on the 1/M-scaled
// columns. The uniform estimator corresponds to c = 1.
Eigen::VectorXd solve_ridge_coefficients(const pair_system& system, double lambda);

// SES weights: beta = c / M with c from solve_ridge_coefficients.
feature_weights solve_shrinkage_weights(const pair_system& system, double lambda);

// One shared coefficient: argmin_c |t - (Z 1) c|^2 + lambda c^2, beta_m = c / M.
feature_weights solve_uniform_shrinkage(const pair_system& system, double lambda);

// Scalar coefficient behind solve_uniform_shrinkage.
double uniform_shrinkage_coefficient(const pair_system& system, double lambda);

feature_weights clamp_for_embedding(const feature_weights& weights);

// Kernel estimates sum_m beta_m cos(w_m . (x_i - x_j)) for every pair.
Eigen::VectorXd pair_estimates(const pair_system& system, const feature_weights& weights);

// Unscaled sum of squared residuals |t - estimates|^2 over the pairs.
double pair_squared_error(const pair_system& system, const feature_weights& weights);

// |t - Z c|^2 + lambda |c|^2 with row scales applied.
double ridge_objective(const pair_system& system, const Eigen::VectorXd& coefficients,
                       double lambda);

enum class shrinkage_form { per_frequency, uniform };

struct lambda_score {
  double lambda = 0.0;
  double validation_error = 0.0;  // +inf when the fit was rank deficient
};

struct lambda_tuning {
  double lambda = 0.0;
  std::vector<lambda_score> table;
  feature_weights weights;  // fitted at the chosen lambda
};

// Fit on `train` for every grid value, score squared error on `validation`,
// return the argmin. Duplicates are ignored; ties go to the larger lambda.
lambda_tuning tune_lambda_on(const pair_system& train, const pair_system& validation,
                             const std::vector<double>& grid,
                             shrinkage_form form = shrinkage_form::per_frequency);

lambda_tuning tune_lambda(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                          const gaussian_kernel& kernel, const std::vector<double>& grid,
                          Eigen::Index train_pairs, Eigen::Index val_pairs, std::uint64_t seed,
                          shrinkage_form form = shrinkage_form::per_frequency);

// {2^lo, 2^(lo+step), ..., 2^hi}
std::vector<double> power_of_two_grid(int lo, int hi, int step = 2);

}  // namespace rffses

namespace rffses {

// Rows `rows` of `system`, in the given order.
pair_system subset_rows(const pair_system& system, const std::vector<Eigen::Index>& rows);

}  // namespace rffses
