#include "rffses/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

namespace {

struct sparse_row {
  double label = 0.0;
  std::vector<std::pair<Eigen::Index, double>> entries;
};

double parse_double(std::string_view token, std::size_t line) {
  // from_chars does not accept a leading '+'.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
    throw parse_error("bad number '" + std::string(token) + "'", line);
  return v;
}

sparse_row parse_line(const std::string& text, std::size_t line) {
  std::istringstream ss(text);
  std::string token;
  sparse_row row;
  if (!(ss >> token)) throw parse_error("missing label", line);
  row.label = parse_double(token, line);
  Eigen::Index last = 0;
  while (ss >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
      throw parse_error("expected idx:val, got '" + token + "'", line);
    Eigen::Index idx = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, idx);
    if (ec != std::errc() || ptr != token.data() + colon || idx < 1)
      throw parse_error("bad feature index in '" + token + "'", line);
    if (idx <= last) throw parse_error("feature indices must be strictly increasing", line);
    last = idx;
    row.entries.emplace_back(idx - 1, parse_double(std::string_view(token).substr(colon + 1), line));
  }
  return row;
}

bool is_pm_one(double v) { return v == 1.0 || v == -1.0; }

}  // namespace

dataset parse_sparse_text(std::istream& in, const load_options& options) {
  std::vector<sparse_row> rows;
  std::string text;
  std::size_t line = 0;
  Eigen::Index max_index = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    auto row = parse_line(text, line);
    if (!row.entries.empty()) max_index = std::max(max_index, row.entries.back().first + 1);
    if (options.expected_dim && max_index > *options.expected_dim)
      throw dimension_mismatch_error("line " + std::to_string(line) + ": feature index " +
                                     std::to_string(max_index) + " exceeds expected dimension " +
                                     std::to_string(*options.expected_dim));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("no records", line);

  const Eigen::Index d = options.expected_dim.value_or(max_index);
  dataset out;
  out.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d);
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    out.targets(i) = row.label;
    for (const auto& [j, v] : row.entries) out.features(i, j) = v;
  }

  if (options.positive_label) {
    out.task = task_kind::binary_classification;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      out.targets(i) = out.targets(i) == *options.positive_label ? 1.0 : -1.0;
  } else if (options.task) {
    out.task = *options.task;
  } else {
    out.task = std::all_of(out.targets.begin(), out.targets.end(), is_pm_one)
                   ? task_kind::binary_classification
                   : task_kind::regression;
  }
  if (out.task == task_kind::binary_classification &&
      !std::all_of(out.targets.begin(), out.targets.end(), is_pm_one))
    throw label_domain_error("binary task needs labels in {-1, +1}; pass a positive label");
  return out;
}

dataset load_sparse_text(const std::string& path, const load_options& options) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "'");
  return parse_sparse_text(in, options);
}

void write_sparse_text(const dataset& data, std::ostream& out) {
  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    put(data.targets(i));
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      const double v = data.features(i, j);
      if (v == 0.0) continue;
      out << ' ' << (j + 1) << ':';
      put(v);
    }
    out << '\n';
  }
}

void write_sparse_text(const dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write '" + path + "'");
  write_sparse_text(data, out);
}

standardized_sets standardize(const dataset& train, const std::vector<dataset>& others) {
  if (train.rows() < 1) throw invalid_argument_error("cannot standardize an empty training set");
  const Eigen::Index d = train.dim();
  Eigen::VectorXd mean = train.features.colwise().mean();
  Eigen::VectorXd std_dev(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (train.features.col(j).array() - mean(j)).square().mean();
    std_dev(j) = std::sqrt(var);
    // Constant columns: leave them exactly as they are.
    if (!(std_dev(j) > 1e-12 * std::max(1.0, std::abs(mean(j))))) {
      mean(j) = 0.0;
      std_dev(j) = 1.0;
    }
  }
  auto apply = [&](const dataset& in) {
    if (in.dim() != d) throw dimension_mismatch_error("standardize: dimension differs from train");
    dataset out = in;
    out.features = (in.features.rowwise() - mean.transpose()).array().rowwise() /
                   std_dev.transpose().array();
    out.standardized = true;
    out.feature_means = mean;
    out.feature_stds = std_dev;
    return out;
  };
  standardized_sets out{apply(train), {}};
  out.others.reserve(others.size());
  for (const auto& o : others) out.others.push_back(apply(o));
  return out;
}

dataset select_rows(const dataset& data, const std::vector<Eigen::Index>& rows) {
  dataset out;
  out.task = data.task;
  out.standardized = data.standardized;
  out.feature_means = data.feature_means;
  out.feature_stds = data.feature_stds;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index a = 0; a < out.features.rows(); ++a) {
    const Eigen::Index r = rows[static_cast<std::size_t>(a)];
    if (r < 0 || r >= data.rows()) throw index_out_of_range_error("row index out of range");
    out.features.row(a) = data.features.row(r);
    out.targets(a) = data.targets(r);
  }
  return out;
}

train_test split(const dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw invalid_split_error("train fraction must lie in (0, 1)");
  const Eigen::Index n = data.rows();
  const auto n_train =
      static_cast<Eigen::Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n)
    throw invalid_split_error("train fraction " + std::to_string(train_fraction) + " on " +
                              std::to_string(n) + " rows leaves one side empty");
  rng gen(seed);
  const auto perm = gen.permutation(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<Eigen::Index> test_rows(perm.begin() + n_train, perm.end());
  return {select_rows(data, train_rows), select_rows(data, test_rows)};
}

dataset subsample_rows(const dataset& data, Eigen::Index count, std::uint64_t seed) {
  if (count >= data.rows()) return data;
  if (count < 1) throw invalid_argument_error("subsample count must be >= 1");
  rng gen(seed);
  auto perm = gen.permutation(static_cast<std::size_t>(data.rows()));
  perm.resize(static_cast<std::size_t>(count));
  std::sort(perm.begin(), perm.end());
  return select_rows(data, std::vector<Eigen::Index>(perm.begin(), perm.end()));
}

dataset make_synthetic(Eigen::Index n, Eigen::Index d, std::uint64_t seed, task_kind task) {
  if (n < 1 || d < 1) throw invalid_argument_error("synthetic data needs n >= 1 and d >= 1");
  rng gen(seed);
  dataset out;
  out.task = task;
  out.features.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out.features(i, j) = gen.normal();

  Eigen::VectorXd a(d), b(d);
  for (Eigen::Index j = 0; j < d; ++j) a(j) = gen.normal();
  for (Eigen::Index j = 0; j < d; ++j) b(j) = gen.normal();
  a /= a.norm();
  b /= b.norm();
  out.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = out.features.row(i).dot(a) + std::sin(2.0 * out.features.row(i).dot(b)) +
                     0.1 * gen.normal();
    out.targets(i) = task == task_kind::regression ? y : (y >= 0.0 ? 1.0 : -1.0);
  }
  return out;
}

}  // namespace rffses
