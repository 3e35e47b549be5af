#include "rffses/spectral.hpp"

#include <cmath>
#include <string>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

spectral_frequencies::spectral_frequencies(Eigen::MatrixXd freqs, double sigma,
                                           frequency_source source, std::uint64_t seed)
    : freqs_(std::move(freqs)), sigma_(sigma), source_(source), seed_(seed) {
  if (freqs_.rows() < 1 || freqs_.cols() < 1)
    throw invalid_argument_error("spectral frequencies need M >= 1 and d >= 1");
  if (!(sigma_ > 0.0)) throw invalid_argument_error("bandwidth must be positive");
  if (!freqs_.allFinite()) throw numeric_domain_error("non-finite spectral frequency");
}

std::string_view to_string(weight_kind kind) {
  switch (kind) {
    case weight_kind::uniform:
      return "uniform";
    case weight_kind::bq:
      return "bq";
    case weight_kind::ses:
      return "ses";
    case weight_kind::uniform_shrinkage:
      return "uniform_shrinkage";
  }
  return "unknown";
}

feature_weights uniform_weights(Eigen::Index count) {
  if (count < 1) throw invalid_argument_error("weight count must be >= 1");
  feature_weights w;
  w.beta = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  w.kind = weight_kind::uniform;
  w.clamped = true;
  return w;
}

spectral_frequencies sample_mc_frequencies(Eigen::Index count, Eigen::Index dim, double sigma,
                                           std::uint64_t seed) {
  if (count < 1 || dim < 1) throw invalid_argument_error("M and d must be >= 1");
  if (!(sigma > 0.0)) throw invalid_argument_error("bandwidth must be positive");
  rng gen(seed);
  Eigen::MatrixXd w(count, dim);
  // Row-major fill so that a prefix of rows does not depend on M.
  for (Eigen::Index m = 0; m < count; ++m)
    for (Eigen::Index j = 0; j < dim; ++j) w(m, j) = gen.normal() / sigma;
  return {std::move(w), sigma, frequency_source::monte_carlo, seed};
}

namespace {

feature_matrix scaled_features(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                               const Eigen::VectorXd& column_scale) {
  if (x.cols() != freqs.dim())
    throw dimension_mismatch_error("data has " + std::to_string(x.cols()) +
                                   " columns, frequencies have d = " +
                                   std::to_string(freqs.dim()));
  const Eigen::MatrixXd proj = x * freqs.freqs().transpose();
  feature_matrix out;
  out.values.resize(x.rows(), 2 * freqs.count());
  for (Eigen::Index m = 0; m < freqs.count(); ++m) {
    const double s = column_scale(m);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double a = proj(i, m);
      out.values(i, 2 * m) = s * std::cos(a);
      out.values(i, 2 * m + 1) = s * std::sin(a);
    }
  }
  return out;
}

}  // namespace

feature_matrix feature_map(const Eigen::MatrixXd& x, const spectral_frequencies& freqs) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(freqs.count()));
  auto out = scaled_features(x, freqs, Eigen::VectorXd::Constant(freqs.count(), scale));
  out.norm_scale = scale;
  return out;
}

feature_matrix weighted_feature_map(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                                    const feature_weights& weights) {
  if (weights.beta.size() != freqs.count())
    throw dimension_mismatch_error("weight vector length differs from frequency count");
  if ((weights.beta.array() < 0.0).any())
    throw contract_violation_error(
        "weighted feature map needs nonnegative weights (see clamp_for_embedding)");
  auto out = scaled_features(x, freqs, weights.beta.array().sqrt().matrix());
  out.norm_scale = 1.0;
  return out;
}

}  // namespace rffses
