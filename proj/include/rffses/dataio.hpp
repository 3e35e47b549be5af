#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rffses {

enum class task_kind { regression, binary_classification };

struct dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;
  task_kind task = task_kind::regression;
  bool standardized = false;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_stds;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

struct load_options {
  std::optional<Eigen::Index> expected_dim;
  // Unset: binary classification iff every label is -1 or +1.
  std::optional<task_kind> task;
  // For binary tasks: this label maps to +1 and every other label to -1.
  std::optional<double> positive_label;
};

// Sparse text: one record per line, "label idx:val idx:val ...", one-based
// strictly increasing indices. Blank lines and lines starting with '#' are skipped.
dataset load_sparse_text(const std::string& path, const load_options& options = {});
dataset parse_sparse_text(std::istream& in, const load_options& options = {});

// Writes nonzero entries with round-trip precision.
void write_sparse_text(const dataset& data, const std::string& path);
void write_sparse_text(const dataset& data, std::ostream& out);

struct standardized_sets {
  dataset train;
  std::vector<dataset> others;
};

// Means and population standard deviations from `train`, applied to every set.
// Constant columns pass through untouched (mean 0, std 1 recorded).
standardized_sets standardize(const dataset& train, const std::vector<dataset>& others = {});

struct train_test {
  dataset train;
  dataset test;
};

train_test split(const dataset& data, double train_fraction, std::uint64_t seed);

dataset select_rows(const dataset& data, const std::vector<Eigen::Index>& rows);

// Seeded subsample of min(count, n) rows, original order kept.
dataset subsample_rows(const dataset& data, Eigen::Index count, std::uint64_t seed);

// Standard normal features. Regression target: a normalized linear term plus
// a sine of a second projection; binary task uses the sign of that target.
dataset make_synthetic(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                       task_kind task = task_kind::regression);

}  // namespace rffses
