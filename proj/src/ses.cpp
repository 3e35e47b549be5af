#include "rffses/ses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

namespace {

constexpr double min_rcond = 1e-13;

std::uint64_t triangle_count(Eigen::Index n) {
  const auto un = static_cast<std::uint64_t>(n);
  return un * (un + 1) / 2;
}

// Offset of row i in the row-major upper triangle (i <= j) of an n x n grid.
std::uint64_t row_offset(std::uint64_t i, std::uint64_t n) { return i * (2 * n - i + 1) / 2; }

pair_index decode_pair(std::uint64_t k, Eigen::Index n) {
  const auto un = static_cast<std::uint64_t>(n);
  const double b = 2.0 * static_cast<double>(un) + 1.0;
  double guess = (b - std::sqrt(std::max(0.0, b * b - 8.0 * static_cast<double>(k)))) / 2.0;
  auto i = static_cast<std::uint64_t>(std::max(0.0, std::floor(guess)));
  if (i >= un) i = un - 1;
  while (i > 0 && row_offset(i, un) > k) --i;
  while (i + 1 < un && row_offset(i + 1, un) <= k) ++i;
  const std::uint64_t j = i + (k - row_offset(i, un));
  return {static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)};
}

// Floyd's algorithm: `count` distinct values of [0, total), sorted.
std::vector<std::uint64_t> sample_distinct(std::uint64_t total, std::uint64_t count, rng& gen) {
  std::vector<std::uint64_t> out;
  if (count >= total) {
    out.resize(total);
    for (std::uint64_t k = 0; k < total; ++k) out[k] = k;
    return out;
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = total - count; j < total; ++j) {
    const std::uint64_t t = gen.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<pair_index> decode_all(const std::vector<std::uint64_t>& keys, Eigen::Index n) {
  std::vector<pair_index> out;
  out.reserve(keys.size());
  for (auto k : keys) out.push_back(decode_pair(k, n));
  return out;
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw invalid_argument_error("regularization coefficient must be finite and >= 0");
}

}  // namespace

std::vector<pair_index> sample_pairs(Eigen::Index n, Eigen::Index count, std::uint64_t seed) {
  if (n < 1) throw invalid_argument_error("pair sampling needs n >= 1");
  if (count < 1) throw invalid_argument_error("pair count must be >= 1");
  rng gen(seed);
  return decode_all(sample_distinct(triangle_count(n), static_cast<std::uint64_t>(count), gen), n);
}

pair_split sample_pair_split(Eigen::Index n, Eigen::Index train_count, Eigen::Index val_count,
                             std::uint64_t seed) {
  if (n < 1) throw invalid_argument_error("pair sampling needs n >= 1");
  if (train_count < 1 || val_count < 1)
    throw invalid_argument_error("train and validation pair counts must be >= 1");
  const std::uint64_t total = triangle_count(n);
  if (total < 2) throw invalid_argument_error("need at least two distinct pairs to split");
  auto train = static_cast<std::uint64_t>(train_count);
  auto val = static_cast<std::uint64_t>(val_count);
  if (train + val > total) {
    // Not enough pairs: split all of them in proportion.
    const double frac = static_cast<double>(train) / static_cast<double>(train + val);
    train = std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(total))), 1, total - 1);
    val = total - train;
  }
  rng gen(seed);
  auto keys = sample_distinct(total, train + val, gen);
  gen.shuffle(std::span<std::uint64_t>(keys));
  std::vector<std::uint64_t> train_keys(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(train));
  std::vector<std::uint64_t> val_keys(keys.begin() + static_cast<std::ptrdiff_t>(train), keys.end());
  std::sort(train_keys.begin(), train_keys.end());
  std::sort(val_keys.begin(), val_keys.end());
  return {decode_all(train_keys, n), decode_all(val_keys, n)};
}

std::vector<pair_index> all_ordered_pairs(Eigen::Index n) {
  std::vector<pair_index> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.push_back({i, j});
  return out;
}

pair_system build_pair_system(const Eigen::MatrixXd& x, const std::vector<pair_index>& pairs,
                              const spectral_frequencies& freqs, const gaussian_kernel& kernel) {
  if (pairs.empty()) throw invalid_argument_error("pair list is empty");
  if (x.cols() != freqs.dim())
    throw dimension_mismatch_error("data dimension differs from frequency dimension");
  const auto r = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd delta(r, x.cols());
  pair_system sys;
  sys.targets.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const auto& p = pairs[static_cast<std::size_t>(k)];
    if (p.i < 0 || p.j < 0 || p.i >= x.rows() || p.j >= x.rows())
      throw index_out_of_range_error("pair (" + std::to_string(p.i) + ", " + std::to_string(p.j) +
                                     ") outside " + std::to_string(x.rows()) + " rows");
    delta.row(k) = x.row(p.i) - x.row(p.j);
    sys.targets(k) = kernel.from_squared_distance(delta.row(k).squaredNorm());
  }
  const double inv_m = 1.0 / static_cast<double>(freqs.count());
  sys.design = (delta * freqs.freqs().transpose()).array().cos() * inv_m;
  sys.pairs = pairs;
  sys.row_scales = Eigen::VectorXd::Ones(r);
  return sys;
}

pair_system sample_sketch(const pair_system& system, Eigen::Index r, std::uint64_t seed) {
  if (r < 1) throw invalid_argument_error("sketch size must be >= 1");
  if (system.sketched) throw invalid_argument_error("system is already sketched");
  const Eigen::VectorXd norms = system.design.rowwise().norm();
  const double total = norms.sum();
  if (!(total > 0.0)) throw degenerate_system_error("all design rows have zero norm");
  const Eigen::VectorXd prob =
      (norms * (static_cast<double>(r) / total)).cwiseMin(Eigen::VectorXd::Ones(norms.size()));

  rng gen(seed);
  std::vector<Eigen::Index> kept;
  // Condition on a nonempty sketch; for any sensible r the first pass succeeds.
  for (int attempt = 0; attempt < 1000 && kept.empty(); ++attempt) {
    for (Eigen::Index k = 0; k < prob.size(); ++k)
      if (gen.uniform() < prob(k)) kept.push_back(k);
  }
  if (kept.empty()) throw degenerate_system_error("sketch selected no rows");

  pair_system out;
  const auto rows = static_cast<Eigen::Index>(kept.size());
  out.targets.resize(rows);
  out.design.resize(rows, system.design.cols());
  out.row_scales.resize(rows);
  out.pairs.reserve(kept.size());
  for (Eigen::Index a = 0; a < rows; ++a) {
    const Eigen::Index k = kept[static_cast<std::size_t>(a)];
    out.targets(a) = system.targets(k);
    out.design.row(a) = system.design.row(k);
    out.row_scales(a) = system.row_scales(k) / std::sqrt(prob(k));
    out.pairs.push_back(system.pairs[static_cast<std::size_t>(k)]);
  }
  out.sketched = true;
  return out;
}

Eigen::VectorXd solve_ridge_coefficients(const pair_system& system, double lambda) {
  check_lambda(lambda);
  if (system.rows() < 1) throw invalid_argument_error("pair system has no rows");
  const Eigen::VectorXd d = system.row_scales.array().square();
  Eigen::MatrixXd gram = system.design.transpose() * d.asDiagonal() * system.design;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = system.design.transpose() * d.cwiseProduct(system.targets);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < min_rcond)
    throw rank_deficient_error("normal equations are rank deficient at lambda = " +
                               std::to_string(lambda) + "; use lambda > 0");
  return llt.solve(rhs);
}

feature_weights solve_shrinkage_weights(const pair_system& system, double lambda) {
  feature_weights w;
  w.beta = solve_ridge_coefficients(system, lambda) / static_cast<double>(system.frequencies());
  w.lambda = lambda;
  w.kind = weight_kind::ses;
  w.clamped = false;
  return w;
}

double uniform_shrinkage_coefficient(const pair_system& system, double lambda) {
  check_lambda(lambda);
  if (system.rows() < 1) throw invalid_argument_error("pair system has no rows");
  const Eigen::VectorXd ones_fit = system.design.rowwise().sum();
  const Eigen::VectorXd d = system.row_scales.array().square();
  const double num = ones_fit.dot(d.cwiseProduct(system.targets));
  const double den = ones_fit.dot(d.cwiseProduct(ones_fit)) + lambda;
  if (!(den > 0.0)) throw rank_deficient_error("uniform shrinkage has a zero denominator");
  return num / den;
}

feature_weights solve_uniform_shrinkage(const pair_system& system, double lambda) {
  const double c = uniform_shrinkage_coefficient(system, lambda);
  feature_weights w;
  w.beta = Eigen::VectorXd::Constant(system.frequencies(),
                                     c / static_cast<double>(system.frequencies()));
  w.lambda = lambda;
  w.kind = weight_kind::uniform_shrinkage;
  w.clamped = false;
  return w;
}

feature_weights clamp_for_embedding(const feature_weights& weights) {
  feature_weights out = weights;
  out.beta = weights.beta.cwiseMax(0.0);
  out.clamped = true;
  return out;
}

Eigen::VectorXd pair_estimates(const pair_system& system, const feature_weights& weights) {
  if (weights.beta.size() != system.frequencies())
    throw dimension_mismatch_error("weight vector length differs from design width");
  return system.design * (weights.beta * static_cast<double>(system.frequencies()));
}

double pair_squared_error(const pair_system& system, const feature_weights& weights) {
  return (system.targets - pair_estimates(system, weights)).squaredNorm();
}

double ridge_objective(const pair_system& system, const Eigen::VectorXd& coefficients,
                       double lambda) {
  if (coefficients.size() != system.frequencies())
    throw dimension_mismatch_error("coefficient length differs from design width");
  const Eigen::VectorXd resid =
      system.row_scales.cwiseProduct(system.targets - system.design * coefficients);
  return resid.squaredNorm() + lambda * coefficients.squaredNorm();
}

lambda_tuning tune_lambda_on(const pair_system& train, const pair_system& validation,
                             const std::vector<double>& grid, shrinkage_form form) {
  if (grid.empty()) throw invalid_argument_error("lambda grid is empty");
  std::vector<double> values = grid;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  lambda_tuning out;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double lambda : values) {
    lambda_score score{lambda, std::numeric_limits<double>::infinity()};
    try {
      auto w = form == shrinkage_form::per_frequency ? solve_shrinkage_weights(train, lambda)
                                                     : solve_uniform_shrinkage(train, lambda);
      score.validation_error = pair_squared_error(validation, w);
      // Ascending grid: `<=` hands ties to the larger lambda.
      if (score.validation_error <= best) {
        best = score.validation_error;
        out.lambda = lambda;
        out.weights = std::move(w);
        found = true;
      }
    } catch (const rank_deficient_error&) {
    }
    out.table.push_back(score);
  }
  if (!found) throw rank_deficient_error("every lambda in the grid gave a rank-deficient fit");
  return out;
}

lambda_tuning tune_lambda(const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                          const gaussian_kernel& kernel, const std::vector<double>& grid,
                          Eigen::Index train_pairs, Eigen::Index val_pairs, std::uint64_t seed,
                          shrinkage_form form) {
  const auto split = sample_pair_split(x.rows(), train_pairs, val_pairs, seed);
  const auto train = build_pair_system(x, split.train, freqs, kernel);
  const auto val = build_pair_system(x, split.validation, freqs, kernel);
  return tune_lambda_on(train, val, grid, form);
}

std::vector<double> power_of_two_grid(int lo, int hi, int step) {
  if (step < 1 || hi < lo) throw invalid_argument_error("bad power-of-two grid bounds");
  std::vector<double> out;
  for (int e = lo; e <= hi; e += step) out.push_back(std::ldexp(1.0, e));
  return out;
}

}  // namespace rffses

namespace rffses {

pair_system subset_rows(const pair_system& system, const std::vector<Eigen::Index>& rows) {
  pair_system out;
  const auto r = static_cast<Eigen::Index>(rows.size());
  out.targets.resize(r);
  out.design.resize(r, system.design.cols());
  out.row_scales.resize(r);
  out.pairs.reserve(rows.size());
  for (Eigen::Index a = 0; a < r; ++a) {
    const Eigen::Index k = rows[static_cast<std::size_t>(a)];
    if (k < 0 || k >= system.rows()) throw index_out_of_range_error("system row out of range");
    out.targets(a) = system.targets(k);
    out.design.row(a) = system.design.row(k);
    out.row_scales(a) = system.row_scales(k);
    out.pairs.push_back(system.pairs[static_cast<std::size_t>(k)]);
  }
  out.sketched = system.sketched;
  return out;
}

}  // namespace rffses
