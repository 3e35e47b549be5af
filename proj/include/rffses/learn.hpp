#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rffses/spectral.hpp"

namespace rffses {

enum class learn_objective { squared_loss, squared_hinge };

struct linear_model {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double regularization = 0.0;
  learn_objective objective = learn_objective::squared_loss;
};

// argmin |y - Z w - b 1|^2 + lambda |w|^2, bias unregularized.
linear_model ridge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double lambda);
linear_model ridge_fit(const feature_matrix& z, const Eigen::VectorXd& y, double lambda);

struct hinge_options {
  double tolerance = 1e-6;  // on the gradient 2-norm
  int max_iterations = 200;
};

struct hinge_trace {
  std::vector<double> objective;  // value after every accepted step, starting at w = 0
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// argmin (1/2)|w|^2 + C sum_i max(0, 1 - y_i (w . z_i + b))^2 by generalized
// Newton steps with backtracking.
linear_model squared_hinge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double c,
                               const hinge_options& options = {}, hinge_trace* trace = nullptr);
linear_model squared_hinge_fit(const feature_matrix& z, const Eigen::VectorXd& y, double c,
                               const hinge_options& options = {}, hinge_trace* trace = nullptr);

double squared_hinge_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double c,
                               const Eigen::VectorXd& w, double b);

// Regression models return Z w + b; classifiers return sign(Z w + b) with 0 -> +1.
Eigen::VectorXd predict(const linear_model& model, const Eigen::MatrixXd& z);
Eigen::VectorXd predict(const linear_model& model, const feature_matrix& z);

double relative_regression_error(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);
double classification_error(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

struct cv_score {
  double value = 0.0;
  double mean_error = 0.0;
};

struct cv_result {
  double chosen = 0.0;
  std::vector<cv_score> scores;
};

// k-fold cross-validation over the regularization grid (lambda for ridge, C for
// the hinge model). Ties go to the stronger regularization: larger lambda,
// smaller C.
cv_result cross_validate(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                         const std::vector<double>& grid, int folds, learn_objective objective,
                         std::uint64_t seed, const hinge_options& options = {});

}  // namespace rffses
