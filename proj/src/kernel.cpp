#include "rffses/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

gaussian_kernel::gaussian_kernel(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_argument_error("kernel bandwidth must be positive and finite");
}

double gaussian_kernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (x.size() != y.size()) throw dimension_mismatch_error("kernel arguments differ in length");
  return from_squared_distance((x - y).squaredNorm());
}

gram_matrix exact_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const gaussian_kernel& kernel) {
  if (x.cols() != y.cols()) throw dimension_mismatch_error("Gram blocks differ in dimension");
  gram_matrix g;
  g.exact = true;
  g.values.resize(x.rows(), y.rows());
  for (Eigen::Index j = 0; j < y.rows(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      g.values(i, j) = kernel.from_squared_distance((x.row(i) - y.row(j)).squaredNorm());
  return g;
}

gram_matrix approx_gram(const feature_matrix& zx, const feature_matrix& zy) {
  if (zx.values.cols() != zy.values.cols())
    throw dimension_mismatch_error("feature blocks differ in width");
  return {zx.values * zy.values.transpose(), false};
}

gram_matrix weighted_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const spectral_frequencies& freqs, const feature_weights& weights) {
  if (x.cols() != freqs.dim() || y.cols() != freqs.dim())
    throw dimension_mismatch_error("data dimension differs from frequency dimension");
  if (weights.beta.size() != freqs.count())
    throw dimension_mismatch_error("weight vector length differs from frequency count");
  const Eigen::MatrixXd px = x * freqs.freqs().transpose();
  const Eigen::MatrixXd py = y * freqs.freqs().transpose();
  // cos(a - b) = cos a cos b + sin a sin b
  const Eigen::MatrixXd cx = px.array().cos().matrix() * weights.beta.asDiagonal();
  const Eigen::MatrixXd sx = px.array().sin().matrix() * weights.beta.asDiagonal();
  const Eigen::MatrixXd cy = py.array().cos();
  const Eigen::MatrixXd sy = py.array().sin();
  return {cx * cy.transpose() + sx * sy.transpose(), false};
}

double relative_error(const gram_matrix& exact, const gram_matrix& approx) {
  if (!exact.exact) throw invalid_argument_error("first Gram argument must be exact");
  if (exact.values.rows() != approx.values.rows() || exact.values.cols() != approx.values.cols())
    throw dimension_mismatch_error("Gram shapes differ");
  const double denom = exact.values.norm();
  if (denom == 0.0) throw undefined_metric_error("exact Gram has zero Frobenius norm");
  return (exact.values - approx.values).norm() / denom;
}

double median_pairwise_distance(const Eigen::MatrixXd& x, Eigen::Index max_rows,
                                std::uint64_t seed) {
  if (x.rows() < 2) throw invalid_argument_error("median distance needs at least two rows");
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  if (x.rows() > max_rows) {
    rng gen(seed);
    rows = gen.permutation(static_cast<std::size_t>(x.rows()));
    rows.resize(static_cast<std::size_t>(max_rows));
  }
  std::vector<double> dist;
  dist.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      dist.push_back((x.row(static_cast<Eigen::Index>(rows[a])) -
                      x.row(static_cast<Eigen::Index>(rows[b])))
                         .norm());
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double med = *mid;
  if (dist.size() % 2 == 0) {
    const double lower = *std::max_element(dist.begin(), mid);
    med = 0.5 * (med + lower);
  }
  if (!(med > 0.0)) throw degenerate_system_error("all sampled points coincide");
  return med;
}

stein_risk_result stein_risk_simulation(const gaussian_kernel& kernel, const data_sampler& sampler,
                                        Eigen::Index count, double alpha, double mu,
                                        std::int64_t trials, std::uint64_t seed) {
  if (count < 1) throw invalid_argument_error("M must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw invalid_argument_error("alpha must lie in [0, 1)");
  if (trials < 1) throw invalid_argument_error("trials must be >= 1");
  if (sampler.dim < 1) throw invalid_argument_error("sampler dimension must be >= 1");

  rng gen(seed);
  const Eigen::Index d = sampler.dim;
  const double inv_sigma = 1.0 / kernel.sigma();
  Eigen::VectorXd x(d), y(d), w(d);

  // Running sums; Welford for the difference to get a stable standard error.
  double sum_uniform = 0.0, sum_shrunk = 0.0, sum_bias = 0.0;
  double diff_mean = 0.0, diff_m2 = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) x(j) = gen.normal();
    for (Eigen::Index j = 0; j < d; ++j) y(j) = gen.normal();
    const Eigen::VectorXd delta = x - y;
    const double k = kernel.from_squared_distance(delta.squaredNorm());
    double k_hat = 0.0;
    for (Eigen::Index m = 0; m < count; ++m) {
      for (Eigen::Index j = 0; j < d; ++j) w(j) = gen.normal() * inv_sigma;
      k_hat += std::cos(w.dot(delta));
    }
    k_hat /= static_cast<double>(count);
    const double k_tilde = alpha * mu + (1.0 - alpha) * k_hat;
    const double loss_uniform = (k - k_hat) * (k - k_hat);
    const double loss_shrunk = (k - k_tilde) * (k - k_tilde);
    sum_uniform += loss_uniform;
    sum_shrunk += loss_shrunk;
    sum_bias += (mu - k) * (mu - k);
    const double diff = loss_uniform - loss_shrunk;
    const double delta_mean = diff - diff_mean;
    diff_mean += delta_mean / static_cast<double>(t + 1);
    diff_m2 += delta_mean * (diff - diff_mean);
  }

  const auto n = static_cast<double>(trials);
  stein_risk_result r;
  r.trials = trials;
  r.risk_uniform = sum_uniform / n;
  r.risk_shrunk = sum_shrunk / n;
  // k^ is unbiased, so its risk is the expected variance over w.
  r.mean_variance = r.risk_uniform;
  r.mean_sq_bias = sum_bias / n;
  const double denom = r.mean_variance + r.mean_sq_bias;
  r.alpha_star_estimate = denom > 0.0 ? r.mean_variance / denom : 0.0;
  r.difference_stderr = trials > 1 ? std::sqrt(diff_m2 / (n - 1.0) / n) : 0.0;
  return r;
}

}  // namespace rffses
