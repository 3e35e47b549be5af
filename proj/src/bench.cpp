#include "rffses/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>
#include <tuple>

#include "rffses/bq.hpp"
#include "rffses/errors.hpp"
#include "rffses/kernel.hpp"
#include "rffses/learn.hpp"
#include "rffses/qmc.hpp"
#include "rffses/rng.hpp"
#include "rffses/ses.hpp"
#include "rffses/spectral.hpp"

namespace rffses {

std::string_view to_string(method m) {
  switch (m) {
    case method::mc:
      return "MC";
    case method::qmc:
      return "QMC";
    case method::bq:
      return "BQ";
    case method::ses:
      return "SES";
    case method::ses_uniform:
      return "SES-Uniform";
  }
  return "?";
}

method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mc") return method::mc;
  if (lower == "qmc") return method::qmc;
  if (lower == "bq") return method::bq;
  if (lower == "ses") return method::ses;
  if (lower == "ses-uniform" || lower == "ses_uniform") return method::ses_uniform;
  throw unsupported_method_error("unknown method '" + std::string(name) + "'");
}

namespace {

// Sub-seed streams. Fixed so results only depend on (spec, inputs).
enum stream : std::uint64_t {
  split_stream = 1,
  eval_stream = 2,
  median_stream = 3,
  subsample_stream = 4,
  mc_stream = 10,
  bq_pairs_stream = 20,
  ses_pairs_stream = 30,
  sketch_stream = 31,
  cv_stream = 40,
  pool_stream = 50,
  val_rows_stream = 51,
  pilot_stream = 70,
  main_stream = 71,
};

std::vector<double> or_default(const std::vector<double>& v, int lo, int hi) {
  return v.empty() ? power_of_two_grid(lo, hi, 2) : v;
}

struct prepared_data {
  std::string name;
  dataset train;
  dataset test;
  Eigen::MatrixXd eval_x;
  gram_matrix eval_gram;
  double sigma = 1.0;
};

std::string dataset_name(const experiment_spec& spec) {
  if (spec.data_path) return std::filesystem::path(*spec.data_path).filename().string();
  return "synthetic:" + std::to_string(spec.synthetic_n) + "x" + std::to_string(spec.synthetic_d) +
         ":" + std::to_string(spec.data_seed);
}

void validate(const experiment_spec& spec) {
  if (spec.m_values.empty()) throw invalid_argument_error("M list is empty");
  for (auto m : spec.m_values)
    if (m < 1) throw invalid_argument_error("M values must be >= 1");
  if (spec.seeds.empty()) throw invalid_argument_error("seed list is empty");
  if (spec.methods.empty()) throw invalid_argument_error("method list is empty");
  if (spec.workers < 1) throw invalid_argument_error("workers must be >= 1");
  if (spec.sigma == sigma_mode::value && !(spec.sigma_value > 0.0))
    throw invalid_argument_error("sigma must be positive");
}

prepared_data prepare(const experiment_spec& spec, bool need_eval_gram) {
  dataset all;
  if (spec.data_path) {
    load_options opts;
    opts.task = spec.task;
    opts.positive_label = spec.positive_label;
    all = load_sparse_text(*spec.data_path, opts);
  } else {
    all = make_synthetic(spec.synthetic_n, spec.synthetic_d, spec.data_seed,
                         spec.task.value_or(task_kind::regression));
  }
  if (spec.subsample > 0)
    all = subsample_rows(all, spec.subsample, mix_seed(spec.data_seed, subsample_stream));

  auto parts = split(all, spec.train_fraction, mix_seed(spec.data_seed, split_stream));
  auto scaled = standardize(parts.train, {parts.test});

  prepared_data out;
  out.name = dataset_name(spec);
  out.train = std::move(scaled.train);
  out.test = std::move(scaled.others.front());
  out.eval_x = subsample_rows(out.test, spec.eval_rows, mix_seed(spec.data_seed, eval_stream))
                   .features;
  switch (spec.sigma) {
    case sigma_mode::value:
      out.sigma = spec.sigma_value;
      break;
    case sigma_mode::median:
      out.sigma = median_pairwise_distance(out.train.features, 1000,
                                           mix_seed(spec.data_seed, median_stream));
      break;
    case sigma_mode::grid:
      out.sigma = 0.0;  // chosen per cell
      break;
  }
  if (need_eval_gram) {
    if (spec.sigma == sigma_mode::grid)
      throw invalid_argument_error(
          "--sigma grid is only supported by `train`; use a value or `median`");
    out.eval_gram = exact_gram(out.eval_x, out.eval_x, gaussian_kernel(out.sigma));
  }
  return out;
}

spectral_frequencies frequencies_for(method m, Eigen::Index count, Eigen::Index dim, double sigma,
                                     std::uint64_t seed) {
  if (m == method::mc) return sample_mc_frequencies(count, dim, sigma, mix_seed(seed, mc_stream));
  return sample_qmc_frequencies(count, dim, sigma, seed);
}

Eigen::Index train_budget(const experiment_spec& spec, Eigen::Index m) {
  return spec.pairs_train > 0 ? spec.pairs_train : 4 * m;
}
Eigen::Index val_budget(const experiment_spec& spec, Eigen::Index m) {
  return spec.pairs_val > 0 ? spec.pairs_val : 2 * m;
}

struct fitted_weights {
  feature_weights weights;
  double lambda = std::nan("");
  double sigma_gp = std::nan("");
};

// Weights for one method on fixed frequencies, with that method's tuning.
fitted_weights fit_weights(method m, const experiment_spec& spec, const Eigen::MatrixXd& x,
                           const spectral_frequencies& freqs, const gaussian_kernel& kernel,
                           std::uint64_t seed) {
  fitted_weights out;
  const Eigen::Index count = freqs.count();
  switch (m) {
    case method::mc:
    case method::qmc:
      out.weights = uniform_weights(count);
      break;
    case method::bq: {
      auto tuned = tune_sigma_gp(x, freqs, kernel, or_default(spec.sigma_gp_grid, -8, 8),
                                 train_budget(spec, count), mix_seed(seed, bq_pairs_stream));
      out.weights = std::move(tuned.weights);
      out.sigma_gp = tuned.sigma_gp;
      break;
    }
    case method::ses:
    case method::ses_uniform: {
      const auto pairs = sample_pair_split(x.rows(), train_budget(spec, count),
                                           val_budget(spec, count),
                                           mix_seed(seed, ses_pairs_stream));
      auto train = build_pair_system(x, pairs.train, freqs, kernel);
      if (spec.sketch_r > 0)
        train = sample_sketch(train, spec.sketch_r, mix_seed(seed, sketch_stream));
      const auto val = build_pair_system(x, pairs.validation, freqs, kernel);
      auto tuned = tune_lambda_on(train, val, or_default(spec.lambda_grid, -8, 8),
                                  m == method::ses ? shrinkage_form::per_frequency
                                                   : shrinkage_form::uniform);
      out.weights = std::move(tuned.weights);
      out.lambda = tuned.lambda;
      break;
    }
  }
  return out;
}

struct cell {
  method m = method::mc;
  Eigen::Index count = 0;
  std::uint64_t seed = 0;
  auto key() const { return std::tuple(static_cast<int>(m), count, seed); }
};

std::vector<cell> make_cells(const std::vector<method>& methods, const experiment_spec& spec) {
  std::vector<cell> cells;
  for (auto m : methods)
    for (auto count : spec.m_values)
      for (auto seed : spec.seeds) cells.push_back({m, count, seed});
  std::sort(cells.begin(), cells.end(),
            [](const cell& a, const cell& b) { return a.key() < b.key(); });
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const cell& a, const cell& b) { return a.key() == b.key(); }),
              cells.end());
  return cells;
}

// Runs fn over every cell on up to `workers` threads. Results are collected by
// cell index, so the output order never depends on scheduling.
std::vector<record> run_cells(const std::vector<cell>& cells, const experiment_spec& spec,
                              const std::function<std::vector<record>(const cell&)>& fn) {
  std::vector<std::vector<record>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  auto timed = [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      results[i] = fn(cells[i]);
    } catch (...) {
      errors[i] = std::current_exception();
      return;
    }
    if (spec.timing) {
      const auto ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      for (auto& r : results[i]) r.set("wall_ms", ms);
    }
  };
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(spec.workers), cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) timed(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) timed(i);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<record> out;
  for (auto& r : results)
    for (auto& rec : r) out.push_back(std::move(rec));
  return out;
}

std::vector<std::string> with_timing(std::vector<std::string> header, const experiment_spec& spec) {
  if (spec.timing) header.push_back("wall_ms");
  return header;
}

record base_record(std::string_view command, const prepared_data& data, const cell& c,
                   double sigma) {
  record r;
  r.set("command", std::string(command));
  r.set("dataset", data.name);
  r.set("method", std::string(to_string(c.m)));
  r.set("M", c.count);
  r.set("seed", c.seed);
  r.set("sigma", sigma);
  return r;
}

void set_tuning(record& r, const fitted_weights& fw) {
  if (!std::isnan(fw.lambda)) r.set("lambda", fw.lambda);
  if (!std::isnan(fw.sigma_gp)) r.set("sigma_gp", fw.sigma_gp);
}

double kernel_error(const prepared_data& data, const spectral_frequencies& freqs,
                    const feature_weights& weights) {
  return relative_error(data.eval_gram, weighted_gram(data.eval_x, data.eval_x, freqs, weights));
}

// Embedding for downstream learners: uniform maps for MC/QMC, clamped
// weighted maps otherwise.
feature_matrix embed(method m, const Eigen::MatrixXd& x, const spectral_frequencies& freqs,
                     const feature_weights& weights) {
  if (m == method::mc || m == method::qmc) return feature_map(x, freqs);
  return weighted_feature_map(x, freqs, clamp_for_embedding(weights));
}

struct downstream_fit {
  double error = 0.0;
  double regularization = 0.0;
};

downstream_fit fit_downstream(const experiment_spec& spec, task_kind task,
                              const feature_matrix& ztrain, const Eigen::VectorXd& ytrain,
                              const feature_matrix& ztest, const Eigen::VectorXd& ytest,
                              std::uint64_t seed) {
  const auto objective = task == task_kind::regression ? learn_objective::squared_loss
                                                       : learn_objective::squared_hinge;
  const hinge_options hopts{spec.hinge_tolerance, spec.hinge_max_iterations};
  const auto cv = cross_validate(ztrain.values, ytrain, or_default(spec.reg_grid, -10, 10),
                                 spec.folds, objective, mix_seed(seed, cv_stream), hopts);
  downstream_fit out;
  out.regularization = cv.chosen;
  if (objective == learn_objective::squared_loss) {
    const auto model = ridge_fit(ztrain, ytrain, cv.chosen);
    const Eigen::VectorXd pred = predict(model, ztest);
    // Constant-zero test targets have no relative error; report absolute.
    out.error = ytest.norm() > 0.0 ? relative_regression_error(ytest, pred) : pred.norm();
  } else {
    const auto model = squared_hinge_fit(ztrain, ytrain, cv.chosen, hopts);
    out.error = classification_error(ytest, predict(model, ztest));
  }
  return out;
}

}  // namespace

command_output cmd_approx(const experiment_spec& spec) {
  validate(spec);
  const auto data = prepare(spec, true);
  const gaussian_kernel kernel(data.sigma);
  const auto cells = make_cells(spec.methods, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    const auto freqs = frequencies_for(c.m, c.count, data.train.dim(), data.sigma, c.seed);
    const auto fw = fit_weights(c.m, spec, data.train.features, freqs, kernel, c.seed);
    record r = base_record("approx", data, c, data.sigma);
    set_tuning(r, fw);
    if (c.m == method::ses || c.m == method::ses_uniform || c.m == method::bq) {
      r.set("pairs_train", train_budget(spec, c.count));
      if (c.m != method::bq) r.set("pairs_val", val_budget(spec, c.count));
    }
    if (spec.sketch_r > 0 && (c.m == method::ses || c.m == method::ses_uniform))
      r.set("sketch_r", spec.sketch_r);
    r.set("eval_rows", data.eval_x.rows());
    r.set("weight_sum", fw.weights.beta.sum());
    r.set("error", kernel_error(data, freqs, fw.weights));
    return std::vector<record>{r};
  });
  return {with_timing({"command", "dataset", "method", "M", "seed", "sigma", "lambda", "sigma_gp",
                       "pairs_train", "pairs_val", "sketch_r", "eval_rows", "weight_sum",
                       "error"},
                      spec),
          std::move(records)};
}

command_output cmd_train(const experiment_spec& spec) {
  validate(spec);
  const auto data = prepare(spec, false);
  const auto task = data.train.task;
  const auto cells = make_cells(spec.methods, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    double sigma = data.sigma;
    if (spec.sigma == sigma_mode::grid) {
      // Bandwidth chosen by cross-validating the MC method.
      double best = std::numeric_limits<double>::infinity();
      for (double s : or_default(spec.sigma_grid, -10, 10)) {
        const auto freqs = frequencies_for(method::mc, c.count, data.train.dim(), s, c.seed);
        const auto z = feature_map(data.train.features, freqs);
        const auto objective = task == task_kind::regression ? learn_objective::squared_loss
                                                             : learn_objective::squared_hinge;
        const auto cv = cross_validate(z.values, data.train.targets,
                                       or_default(spec.reg_grid, -10, 10), spec.folds, objective,
                                       mix_seed(c.seed, cv_stream),
                                       {spec.hinge_tolerance, spec.hinge_max_iterations});
        const double err =
            std::min_element(cv.scores.begin(), cv.scores.end(), [](const auto& a, const auto& b) {
              return a.mean_error < b.mean_error;
            })->mean_error;
        if (err < best) {
          best = err;
          sigma = s;
        }
      }
    }
    const gaussian_kernel kernel(sigma);
    const auto freqs = frequencies_for(c.m, c.count, data.train.dim(), sigma, c.seed);
    const auto fw = fit_weights(c.m, spec, data.train.features, freqs, kernel, c.seed);
    const auto ztrain = embed(c.m, data.train.features, freqs, fw.weights);
    const auto ztest = embed(c.m, data.test.features, freqs, fw.weights);
    const auto fit = fit_downstream(spec, task, ztrain, data.train.targets, ztest,
                                    data.test.targets, c.seed);
    record r = base_record("train", data, c, sigma);
    r.set("task", task == task_kind::regression ? "regression" : "classification");
    set_tuning(r, fw);
    r.set("regularization", fit.regularization);
    r.set("folds", spec.folds);
    r.set("n_train", data.train.rows());
    r.set("n_test", data.test.rows());
    r.set("error", fit.error);
    return std::vector<record>{r};
  });
  return {with_timing({"command", "dataset", "task", "method", "M", "seed", "sigma", "lambda",
                       "sigma_gp", "regularization", "folds", "n_train", "n_test", "error"},
                      spec),
          std::move(records)};
}

command_output cmd_weights(const experiment_spec& spec) {
  validate(spec);
  for (auto m : spec.methods)
    if (m != method::bq && m != method::ses)
      throw unsupported_method_error("weights supports BQ and SES, not " +
                                     std::string(to_string(m)));
  const auto data = prepare(spec, false);
  if (spec.sigma == sigma_mode::grid)
    throw invalid_argument_error("--sigma grid is only supported by `train`");
  const gaussian_kernel kernel(data.sigma);
  const auto cells = make_cells(spec.methods, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    const auto freqs = frequencies_for(c.m, c.count, data.train.dim(), data.sigma, c.seed);
    const auto fw = fit_weights(c.m, spec, data.train.features, freqs, kernel, c.seed);
    const double sum = fw.weights.beta.sum();
    const double uniform = 1.0 / static_cast<double>(c.count);
    std::vector<record> out;
    for (Eigen::Index k = 0; k < c.count; ++k) {
      record r = base_record("weights", data, c, data.sigma);
      set_tuning(r, fw);
      r.set("kind", "weight");
      r.set("index", k);
      r.set("weight", fw.weights.beta(k));
      r.set("normalized", sum != 0.0 ? fw.weights.beta(k) / sum : std::nan(""));
      r.set("uniform", uniform);
      out.push_back(std::move(r));
    }
    record total = base_record("weights", data, c, data.sigma);
    set_tuning(total, fw);
    total.set("kind", "sum");
    total.set("uniform", uniform);
    total.set("weight_sum", sum);
    out.push_back(std::move(total));
    return out;
  });
  return {with_timing({"command", "dataset", "method", "M", "seed", "sigma", "lambda", "sigma_gp",
                       "kind", "index", "weight", "normalized", "uniform", "weight_sum"},
                      spec),
          std::move(records)};
}

command_output cmd_sketch_sweep(const experiment_spec& spec) {
  validate(spec);
  for (auto m : spec.methods)
    if (m != method::ses)
      throw unsupported_method_error("sketch-sweep runs SES only, got " +
                                     std::string(to_string(m)));
  const auto data = prepare(spec, true);
  const gaussian_kernel kernel(data.sigma);
  const auto cells = make_cells({method::ses}, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    const auto freqs = frequencies_for(method::qmc, c.count, data.train.dim(), data.sigma, c.seed);
    const double qmc_error = kernel_error(data, freqs, uniform_weights(c.count));

    const auto pool = subsample_rows(data.train, spec.pool_rows, mix_seed(c.seed, pool_stream));
    const auto full = build_pair_system(pool.features, all_ordered_pairs(pool.rows()), freqs, kernel);
    // Validation rows are held out of the sketching pool.
    rng gen(mix_seed(c.seed, val_rows_stream));
    auto order = gen.permutation(static_cast<std::size_t>(full.rows()));
    const auto n_val = std::min<std::size_t>(static_cast<std::size_t>(val_budget(spec, c.count)),
                                             order.size() - 1);
    std::vector<Eigen::Index> val_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<Eigen::Index> cand_rows(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(val_rows.begin(), val_rows.end());
    std::sort(cand_rows.begin(), cand_rows.end());
    const auto val = subset_rows(full, val_rows);
    const auto candidates = subset_rows(full, cand_rows);

    std::vector<Eigen::Index> r_grid = spec.r_grid;
    if (r_grid.empty()) r_grid = {c.count, 2 * c.count, 4 * c.count, 8 * c.count};
    std::sort(r_grid.begin(), r_grid.end());
    r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());

    std::vector<record> out;
    for (auto r : r_grid) {
      const auto sketch = sample_sketch(candidates, r,
                                        mix_seed(mix_seed(c.seed, sketch_stream), static_cast<std::uint64_t>(r)));
      const auto tuned = tune_lambda_on(sketch, val, or_default(spec.lambda_grid, -8, 8));
      const Eigen::VectorXd coef = tuned.weights.beta * static_cast<double>(c.count);
      double gap = std::nan("");
      try {
        const double exact =
            ridge_objective(candidates, solve_ridge_coefficients(candidates, tuned.lambda),
                            tuned.lambda);
        gap = ridge_objective(candidates, coef, tuned.lambda) / exact - 1.0;
      } catch (const rank_deficient_error&) {
      }
      record rec = base_record("sketch-sweep", data, c, data.sigma);
      rec.set("r", r);
      rec.set("rows_used", sketch.rows());
      rec.set("lambda", tuned.lambda);
      rec.set("objective_gap", gap);
      rec.set("error", kernel_error(data, freqs, tuned.weights));
      rec.set("qmc_error", qmc_error);
      out.push_back(std::move(rec));
    }
    return out;
  });
  return {with_timing({"command", "dataset", "method", "M", "seed", "sigma", "r", "rows_used",
                       "lambda", "objective_gap", "error", "qmc_error"},
                      spec),
          std::move(records)};
}

command_output cmd_shrinkage_compare(const experiment_spec& spec) {
  validate(spec);
  const auto data = prepare(spec, true);
  const gaussian_kernel kernel(data.sigma);
  const auto cells = make_cells({method::ses}, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    const auto freqs = frequencies_for(method::qmc, c.count, data.train.dim(), data.sigma, c.seed);
    const auto ses = fit_weights(method::ses, spec, data.train.features, freqs, kernel, c.seed);
    const auto uni =
        fit_weights(method::ses_uniform, spec, data.train.features, freqs, kernel, c.seed);
    record r;
    r.set("command", "shrinkage-compare");
    r.set("dataset", data.name);
    r.set("M", c.count);
    r.set("seed", c.seed);
    r.set("sigma", data.sigma);
    r.set("lambda_ses", ses.lambda);
    r.set("lambda_uniform", uni.lambda);
    r.set("uniform_coefficient", uni.weights.beta(0) * static_cast<double>(c.count));
    r.set("ses_error", kernel_error(data, freqs, ses.weights));
    r.set("ses_uniform_error", kernel_error(data, freqs, uni.weights));
    r.set("qmc_error", kernel_error(data, freqs, uniform_weights(c.count)));
    return std::vector<record>{r};
  });
  return {with_timing({"command", "dataset", "M", "seed", "sigma", "lambda_ses", "lambda_uniform",
                       "uniform_coefficient", "ses_error", "ses_uniform_error", "qmc_error"},
                      spec),
          std::move(records)};
}

command_output cmd_stein_sim(const experiment_spec& spec) {
  validate(spec);
  if (spec.sigma != sigma_mode::value)
    throw invalid_argument_error("stein-sim needs a numeric --sigma");
  if (spec.trials < 1 || spec.pilot_trials < 1)
    throw invalid_argument_error("trial counts must be >= 1");
  const gaussian_kernel kernel(spec.sigma_value);
  const data_sampler sampler{data_distribution::standard_normal, spec.stein_dim};
  const auto cells = make_cells({method::mc}, spec);
  auto records = run_cells(cells, spec, [&](const cell& c) {
    const auto pilot = stein_risk_simulation(kernel, sampler, c.count, 0.0, spec.mu,
                                             spec.pilot_trials, mix_seed(c.seed, pilot_stream));
    const double alpha = spec.alpha.value_or(pilot.alpha_star_estimate);
    const auto res = stein_risk_simulation(kernel, sampler, c.count, alpha, spec.mu, spec.trials,
                                           mix_seed(c.seed, main_stream));
    record r;
    r.set("command", "stein-sim");
    r.set("M", c.count);
    r.set("seed", c.seed);
    r.set("sigma", spec.sigma_value);
    r.set("dim", spec.stein_dim);
    r.set("mu", spec.mu);
    r.set("alpha", alpha);
    r.set("alpha_star", res.alpha_star_estimate);
    r.set("trials", res.trials);
    r.set("risk_uniform", res.risk_uniform);
    r.set("risk_shrunk", res.risk_shrunk);
    r.set("difference", res.risk_uniform - res.risk_shrunk);
    r.set("difference_stderr", res.difference_stderr);
    return std::vector<record>{r};
  });
  return {with_timing({"command", "M", "seed", "sigma", "dim", "mu", "alpha", "alpha_star",
                       "trials", "risk_uniform", "risk_shrunk", "difference",
                       "difference_stderr"},
                      spec),
          std::move(records)};
}

command_output run_command(std::string_view name, const experiment_spec& spec) {
  if (name == "approx") return cmd_approx(spec);
  if (name == "train") return cmd_train(spec);
  if (name == "weights") return cmd_weights(spec);
  if (name == "sketch-sweep") return cmd_sketch_sweep(spec);
  if (name == "shrinkage-compare") return cmd_shrinkage_compare(spec);
  if (name == "stein-sim") return cmd_stein_sim(spec);
  throw invalid_argument_error("unknown command '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = text.find(',');
    auto tok = text.substr(0, pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) out.push_back(tok);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw invalid_argument_error("cannot parse number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (auto tok : split_commas(text)) {
    const auto dots = tok.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number<std::int64_t>(tok));
      continue;
    }
    const auto lo = parse_number<std::int64_t>(tok.substr(0, dots));
    const auto hi = parse_number<std::int64_t>(tok.substr(dots + 2));
    if (hi < lo) throw invalid_argument_error("empty range '" + std::string(tok) + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw invalid_argument_error("empty integer list");
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  if (text.starts_with("pow2:")) {
    std::vector<int> parts;
    auto rest = text.substr(5);
    while (true) {
      const auto pos = rest.find(':');
      parts.push_back(parse_number<int>(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (parts.size() < 2 || parts.size() > 3)
      throw invalid_argument_error("expected pow2:LO:HI[:STEP]");
    return power_of_two_grid(parts[0], parts[1], parts.size() == 3 ? parts[2] : 2);
  }
  std::vector<double> out;
  for (auto tok : split_commas(text)) out.push_back(parse_number<double>(tok));
  if (out.empty()) throw invalid_argument_error("empty number list");
  return out;
}

}  // namespace rffses
