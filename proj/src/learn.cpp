#include "rffses/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

linear_model ridge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double lambda) {
  if (!(lambda >= 0.0)) throw invalid_argument_error("ridge lambda must be >= 0");
  if (z.rows() != y.size()) throw dimension_mismatch_error("feature rows differ from targets");
  if (z.rows() < 1) throw invalid_argument_error("ridge fit needs at least one row");

  // Centering removes the unregularized intercept from the normal equations.
  const Eigen::RowVectorXd z_mean = z.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd zc = z.rowwise() - z_mean;
  Eigen::MatrixXd gram = zc.transpose() * zc;
  gram.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-13)
    throw rank_deficient_error("ridge normal equations are singular; use lambda > 0");

  linear_model model;
  model.weights = llt.solve(zc.transpose() * (y.array() - y_mean).matrix());
  model.bias = y_mean - z_mean.dot(model.weights);
  model.regularization = lambda;
  model.objective = learn_objective::squared_loss;
  return model;
}

linear_model ridge_fit(const feature_matrix& z, const Eigen::VectorXd& y, double lambda) {
  return ridge_fit(z.values, y, lambda);
}

namespace {

void check_labels(const Eigen::VectorXd& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) != 1.0 && y(i) != -1.0)
      throw label_domain_error("classification labels must be -1 or +1");
}

}  // namespace

double squared_hinge_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double c,
                               const Eigen::VectorXd& w, double b) {
  const Eigen::ArrayXd slack =
      (1.0 - y.array() * ((z * w).array() + b)).max(0.0);
  return 0.5 * w.squaredNorm() + c * slack.square().sum();
}

linear_model squared_hinge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double c,
                               const hinge_options& options, hinge_trace* trace) {
  if (!(c > 0.0)) throw invalid_argument_error("C must be positive");
  if (z.rows() != y.size()) throw dimension_mismatch_error("feature rows differ from targets");
  check_labels(y);

  const Eigen::Index p = z.cols();
  // theta = (w, b); the bias is the last coordinate and carries no penalty.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
  auto objective = [&](const Eigen::VectorXd& t) {
    return squared_hinge_objective(z, y, c, t.head(p), t(p));
  };

  double f = objective(theta);
  hinge_trace local;
  local.objective.push_back(f);
  Eigen::VectorXd grad(p + 1);
  int iter = 0;
  for (;; ++iter) {
    const Eigen::ArrayXd margin = y.array() * ((z * theta.head(p)).array() + theta(p));
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < margin.size(); ++i)
      if (margin(i) < 1.0) active.push_back(i);

    // grad = (w, 0) - 2C sum_{active} y_i (1 - m_i) (z_i, 1)
    grad.setZero();
    grad.head(p) = theta.head(p);
    Eigen::MatrixXd za(static_cast<Eigen::Index>(active.size()), p + 1);
    for (Eigen::Index a = 0; a < za.rows(); ++a) {
      const Eigen::Index i = active[static_cast<std::size_t>(a)];
      za.row(a).head(p) = z.row(i);
      za(a, p) = 1.0;
      grad -= (2.0 * c * y(i) * (1.0 - margin(i))) * za.row(a).transpose();
    }
    local.gradient_norm = grad.norm();
    if (local.gradient_norm <= options.tolerance) {
      local.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;

    // Generalized Hessian: diag(1,..,1,0) + 2C Za^T Za. A tiny ridge on the
    // bias keeps it invertible when no point is active.
    Eigen::MatrixXd hess = (2.0 * c) * (za.transpose() * za);
    hess.diagonal().head(p).array() += 1.0;
    hess(p, p) += 1e-10;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    const Eigen::VectorXd step = -ldlt.solve(grad);

    // Armijo backtracking; the objective is convex and piecewise quadratic.
    const double slope = grad.dot(step);
    double t = 1.0;
    double f_new = objective(theta + step);
    while (f_new > f + 1e-4 * t * slope && t > 1e-12) {
      t *= 0.5;
      f_new = objective(theta + t * step);
    }
    if (!(f_new <= f)) break;  // no progress possible at machine precision
    theta += t * step;
    f = f_new;
    local.objective.push_back(f);
  }
  local.iterations = iter;
  if (trace) *trace = std::move(local);

  linear_model model;
  model.weights = theta.head(p);
  model.bias = theta(p);
  model.regularization = c;
  model.objective = learn_objective::squared_hinge;
  return model;
}

linear_model squared_hinge_fit(const feature_matrix& z, const Eigen::VectorXd& y, double c,
                               const hinge_options& options, hinge_trace* trace) {
  return squared_hinge_fit(z.values, y, c, options, trace);
}

Eigen::VectorXd predict(const linear_model& model, const Eigen::MatrixXd& z) {
  if (z.cols() != model.weights.size())
    throw dimension_mismatch_error("feature width differs from model width");
  Eigen::VectorXd out = (z * model.weights).array() + model.bias;
  if (model.objective == learn_objective::squared_hinge)
    out = out.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  return out;
}

Eigen::VectorXd predict(const linear_model& model, const feature_matrix& z) {
  return predict(model, z.values);
}

double relative_regression_error(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size()) throw dimension_mismatch_error("prediction length differs");
  const double denom = y.norm();
  if (denom == 0.0) throw undefined_metric_error("targets have zero norm");
  return (y - yhat).norm() / denom;
}

double classification_error(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size()) throw dimension_mismatch_error("prediction length differs");
  if (y.size() == 0) return 0.0;
  return static_cast<double>((y.array() != yhat.array()).count()) /
         static_cast<double>(y.size());
}

cv_result cross_validate(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                         const std::vector<double>& grid, int folds, learn_objective objective,
                         std::uint64_t seed, const hinge_options& options) {
  if (grid.empty()) throw invalid_argument_error("hyperparameter grid is empty");
  if (folds < 2) throw invalid_folds_error("need at least two folds");
  if (folds > z.rows())
    throw invalid_folds_error(std::to_string(folds) + " folds for " + std::to_string(z.rows()) +
                              " rows");
  if (z.rows() != y.size()) throw dimension_mismatch_error("feature rows differ from targets");

  rng gen(seed);
  const auto perm = gen.permutation(static_cast<std::size_t>(z.rows()));
  std::vector<int> fold_of(perm.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos)
    fold_of[perm[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));

  std::vector<std::vector<Eigen::Index>> train_rows(static_cast<std::size_t>(folds));
  std::vector<std::vector<Eigen::Index>> val_rows(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    for (int f = 0; f < folds; ++f)
      (fold_of[i] == f ? val_rows : train_rows)[static_cast<std::size_t>(f)].push_back(
          static_cast<Eigen::Index>(i));

  std::vector<double> values = grid;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  cv_result out;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double v : values) {
    double total = 0.0;
    for (int f = 0; f < folds && std::isfinite(total); ++f) {
      const auto& tr = train_rows[static_cast<std::size_t>(f)];
      const auto& va = val_rows[static_cast<std::size_t>(f)];
      const Eigen::MatrixXd ztr = z(tr, Eigen::all);
      const Eigen::VectorXd ytr = y(tr);
      const Eigen::MatrixXd zva = z(va, Eigen::all);
      const Eigen::VectorXd yva = y(va);
      try {
        if (objective == learn_objective::squared_loss) {
          const auto model = ridge_fit(ztr, ytr, v);
          const Eigen::VectorXd pred = predict(model, zva);
          // Squared error sums over folds; a fold with all-zero targets cannot
          // use the relative metric on its own.
          const double denom = yva.squaredNorm();
          total += denom > 0.0 ? std::sqrt((yva - pred).squaredNorm() / denom)
                               : std::sqrt((yva - pred).squaredNorm());
        } else {
          const auto model = squared_hinge_fit(ztr, ytr, v, options);
          total += classification_error(yva, predict(model, zva));
        }
      } catch (const rank_deficient_error&) {
        total = std::numeric_limits<double>::infinity();
      }
    }
    const double mean = total / folds;
    out.scores.push_back({v, mean});
    // Ascending grid: ridge prefers the later (larger) lambda on ties, the
    // hinge model keeps the earlier (smaller) C.
    const bool better = objective == learn_objective::squared_loss ? mean <= best : mean < best;
    if (better && std::isfinite(mean)) {
      best = mean;
      out.chosen = v;
      found = true;
    }
  }
  if (!found) throw rank_deficient_error("every grid value failed in cross-validation");
  return out;
}

}  // namespace rffses
