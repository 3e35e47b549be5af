#include "rffses/bq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rffses/errors.hpp"
#include "rffses/ses.hpp"

namespace rffses {

namespace {

void check_config(const bq_config& config) {
  if (!(config.sigma_gp > 0.0)) throw invalid_argument_error("sigma_gp must be positive");
  if (!(config.jitter >= 0.0)) throw invalid_argument_error("jitter must be >= 0");
}

}  // namespace

Eigen::MatrixXd gp_covariance(const spectral_frequencies& freqs, const bq_config& config) {
  check_config(config);
  const Eigen::MatrixXd& w = freqs.freqs();
  const Eigen::Index m = freqs.count();
  const double scale = 1.0 / (2.0 * config.sigma_gp * config.sigma_gp);
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    k(a, a) = 1.0 + config.jitter;
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double v = std::exp(-(w.row(a) - w.row(b)).squaredNorm() * scale);
      k(a, b) = v;
      k(b, a) = v;
    }
  }
  return k;
}

Eigen::VectorXd bq_gamma(const spectral_frequencies& freqs, const bq_config& config,
                         const gaussian_kernel& kernel) {
  check_config(config);
  const double prior_var = config.sigma_gp * config.sigma_gp;
  const double spec_var = 1.0 / (kernel.sigma() * kernel.sigma());
  const double total = prior_var + spec_var;
  const double prefactor = std::pow(prior_var / total, 0.5 * static_cast<double>(freqs.dim()));
  return (freqs.freqs().rowwise().squaredNorm() * (-0.5 / total)).array().exp() * prefactor;
}

feature_weights bq_weights(const spectral_frequencies& freqs, const bq_config& config,
                           const gaussian_kernel& kernel) {
  check_config(config);
  const Eigen::VectorXd gamma = bq_gamma(freqs, config, kernel);
  bq_config attempt = config;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(gp_covariance(freqs, attempt));
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-15) {
      feature_weights w;
      w.beta = llt.solve(gamma);
      w.lambda = attempt.jitter;
      w.kind = weight_kind::bq;
      w.clamped = false;
      return w;
    }
    if (attempt.jitter >= 1e-2) break;
    attempt.jitter = attempt.jitter > 0.0 ? std::min(attempt.jitter * 10.0, 1e-2) : 1e-10;
  }
  throw singular_prior_error("GP prior covariance stayed singular with jitter up to 1e-2");
}

sigma_gp_tuning tune_sigma_gp(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                              const gaussian_kernel& kernel, const std::vector<double>& grid,
                              Eigen::Index pairs, std::uint64_t seed, double jitter) {
  if (grid.empty()) throw invalid_argument_error("sigma_gp grid is empty");
  std::vector<double> values = grid;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const auto system = build_pair_system(x, sample_pairs(x.rows(), pairs, seed), freqs, kernel);
  const double target_norm = system.targets.norm();

  sigma_gp_tuning out;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double s : values) {
    sigma_gp_score score{s, std::numeric_limits<double>::infinity()};
    try {
      auto w = bq_weights(freqs, {s, jitter}, kernel);
      score.relative_error = std::sqrt(pair_squared_error(system, w)) / target_norm;
      if (score.relative_error < best) {
        best = score.relative_error;
        out.sigma_gp = s;
        out.weights = std::move(w);
        found = true;
      }
    } catch (const singular_prior_error&) {
    }
    out.table.push_back(score);
  }
  if (!found) throw singular_prior_error("no sigma_gp in the grid gave a usable prior");
  return out;
}

}  // namespace rffses
