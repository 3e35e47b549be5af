// rffses: experiment harness for weighted random Fourier features.
//
//   rffses approx --synthetic 500,6 --method MC,QMC,SES --M 16,32,64 --seeds 0..9
//   rffses train --data cpu.txt --method SES --M 512 --sigma median
//   rffses stein-sim --M 4,16 --sigma 1 --trials 100000

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rffses/bench.hpp"
#include "rffses/errors.hpp"

namespace {

struct raw_flags {
  std::string data;
  std::string synthetic;
  std::string methods;
  std::string m_list;
  std::string sigma = "median";
  std::string sigma_grid;
  std::string seeds = "0";
  long long pairs_train = 0;
  long long pairs_val = 0;
  long long sketch_r = 0;
  std::string lambda_grid;
  std::string sigma_gp_grid;
  std::string reg_grid;
  long long eval_rows = 2000;
  std::string out;
  bool json = false;
  bool timing = false;
  int workers = 1;
  std::string task;
  std::string positive_label;
  long long data_seed = 0;
  long long subsample = 0;
  double train_fraction = 0.8;
  int folds = 5;
  int hinge_iterations = 200;
  double hinge_tolerance = 1e-6;
  std::string r_grid;
  long long pool_rows = 200;
  std::string alpha = "star";
  double mu = 0.0;
  long long trials = 100000;
  long long pilot_trials = 20000;
  long long dim = 5;
};

void add_common(CLI::App* app, raw_flags& f) {
  app->add_option("--data", f.data, "sparse text dataset (label idx:val ...)");
  app->add_option("--synthetic", f.synthetic, "synthetic data as n,d (default 500,6)");
  app->add_option("--method", f.methods, "comma list of MC,QMC,BQ,SES,SES-Uniform");
  app->add_option("--M", f.m_list, "comma list of feature counts");
  app->add_option("--sigma", f.sigma, "bandwidth: a number, 'median', or 'grid' (train only)");
  app->add_option("--sigma-grid", f.sigma_grid, "bandwidth grid for --sigma grid");
  app->add_option("--seeds", f.seeds, "comma list or range a..b");
  app->add_option("--pairs-train", f.pairs_train, "training pairs (default 4M)");
  app->add_option("--pairs-val", f.pairs_val, "validation pairs (default 2M)");
  app->add_option("--sketch-r", f.sketch_r, "sketch the training pairs to about r rows");
  app->add_option("--lambda-grid", f.lambda_grid, "SES lambda grid (default pow2:-8:8)");
  app->add_option("--sigma-gp-grid", f.sigma_gp_grid, "BQ sigma_gp grid (default pow2:-8:8)");
  app->add_option("--reg-grid", f.reg_grid, "ridge lambda / SVM C grid (default pow2:-10:10)");
  app->add_option("--eval-rows", f.eval_rows, "test rows used for Gram errors");
  app->add_option("--out", f.out, "output file (default stdout)");
  app->add_flag("--json", f.json, "one JSON object per line instead of CSV");
  app->add_flag("--timing", f.timing, "add a wall_ms column (output is then not reproducible)");
  app->add_option("--workers", f.workers, "concurrent experiment cells");
  app->add_option("--task", f.task, "regression or classification (default: inferred)");
  app->add_option("--positive-label", f.positive_label, "label mapped to +1, others to -1");
  app->add_option("--data-seed", f.data_seed, "seed for synthetic data, split and subsampling");
  app->add_option("--subsample", f.subsample, "keep this many rows of the dataset");
  app->add_option("--train-fraction", f.train_fraction, "train share of the split");
  app->add_option("--folds", f.folds, "cross-validation folds");
  app->add_option("--hinge-iterations", f.hinge_iterations, "squared-hinge Newton iterations");
  app->add_option("--hinge-tolerance", f.hinge_tolerance, "squared-hinge gradient tolerance");
}

rffses::experiment_spec to_spec(const raw_flags& f, const std::string& command) {
  using namespace rffses;
  experiment_spec spec;
  if (!f.data.empty() && !f.synthetic.empty())
    throw invalid_argument_error("--data and --synthetic are exclusive");
  if (!f.data.empty()) spec.data_path = f.data;
  if (!f.synthetic.empty()) {
    const auto nd = parse_int_list(f.synthetic);
    if (nd.size() != 2) throw invalid_argument_error("--synthetic expects n,d");
    spec.synthetic_n = nd[0];
    spec.synthetic_d = nd[1];
  }
  if (!f.methods.empty()) {
    spec.methods.clear();
    std::string_view rest = f.methods;
    while (!rest.empty()) {
      const auto pos = rest.find(',');
      spec.methods.push_back(parse_method(rest.substr(0, pos)));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
  } else if (command == "weights") {
    spec.methods = {method::bq, method::ses};
  } else if (command == "sketch-sweep") {
    spec.methods = {method::ses};
  }
  if (!f.m_list.empty()) {
    spec.m_values.clear();
    for (auto v : parse_int_list(f.m_list)) spec.m_values.push_back(v);
  }
  if (f.sigma == "median") {
    spec.sigma = sigma_mode::median;
  } else if (f.sigma == "grid") {
    spec.sigma = sigma_mode::grid;
  } else {
    spec.sigma = sigma_mode::value;
    spec.sigma_value = parse_real_list(f.sigma).at(0);
  }
  if (command == "stein-sim" && f.sigma == "median") {
    spec.sigma = sigma_mode::value;
    spec.sigma_value = 1.0;
  }
  if (!f.sigma_grid.empty()) spec.sigma_grid = parse_real_list(f.sigma_grid);
  spec.seeds.clear();
  for (auto v : parse_int_list(f.seeds)) {
    if (v < 0) throw invalid_argument_error("seeds must be nonnegative");
    spec.seeds.push_back(static_cast<std::uint64_t>(v));
  }
  spec.pairs_train = f.pairs_train;
  spec.pairs_val = f.pairs_val;
  spec.sketch_r = f.sketch_r;
  if (!f.lambda_grid.empty()) spec.lambda_grid = parse_real_list(f.lambda_grid);
  if (!f.sigma_gp_grid.empty()) spec.sigma_gp_grid = parse_real_list(f.sigma_gp_grid);
  if (!f.reg_grid.empty()) spec.reg_grid = parse_real_list(f.reg_grid);
  spec.eval_rows = f.eval_rows;
  spec.workers = f.workers;
  spec.timing = f.timing;
  if (f.task == "regression") spec.task = task_kind::regression;
  else if (f.task == "classification") spec.task = task_kind::binary_classification;
  else if (!f.task.empty()) throw invalid_argument_error("--task must be regression or classification");
  if (!f.positive_label.empty()) spec.positive_label = parse_real_list(f.positive_label).at(0);
  spec.data_seed = static_cast<std::uint64_t>(f.data_seed);
  spec.subsample = f.subsample;
  spec.train_fraction = f.train_fraction;
  spec.folds = f.folds;
  spec.hinge_max_iterations = f.hinge_iterations;
  spec.hinge_tolerance = f.hinge_tolerance;
  if (!f.r_grid.empty())
    for (auto v : parse_int_list(f.r_grid)) spec.r_grid.push_back(v);
  spec.pool_rows = f.pool_rows;
  if (f.alpha != "star") spec.alpha = parse_real_list(f.alpha).at(0);
  spec.mu = f.mu;
  spec.trials = f.trials;
  spec.pilot_trials = f.pilot_trials;
  spec.stein_dim = f.dim;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted random Fourier features: kernel approximation and learning experiments"};
  app.require_subcommand(1);
  raw_flags flags;

  auto* approx = app.add_subcommand("approx", "relative kernel approximation error per method");
  auto* train = app.add_subcommand("train", "downstream ridge / squared-hinge test error");
  auto* weights = app.add_subcommand("weights", "raw and normalized BQ / SES weights");
  auto* sweep = app.add_subcommand("sketch-sweep", "SES error versus sketch size r");
  auto* compare = app.add_subcommand("shrinkage-compare", "SES vs SES-Uniform vs QMC");
  auto* stein = app.add_subcommand("stein-sim", "Monte Carlo risk of shrunk kernel estimates");
  for (auto* sub : {approx, train, weights, sweep, compare, stein}) add_common(sub, flags);
  sweep->add_option("--r-grid", flags.r_grid, "sketch sizes (default M,2M,4M,8M)");
  sweep->add_option("--pool-rows", flags.pool_rows, "rows whose n^2 ordered pairs form the pool");
  stein->add_option("--alpha", flags.alpha, "mixing coefficient, or 'star' for the plug-in");
  stein->add_option("--mu", flags.mu, "shrinkage target");
  stein->add_option("--trials", flags.trials, "trials in the main run");
  stein->add_option("--pilot-trials", flags.pilot_trials, "trials in the pilot run");
  stein->add_option("--dim", flags.dim, "input dimension of the normal data sampler");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    if (flags.m_list.empty() && command == "stein-sim") flags.m_list = "4,16";
    const auto spec = to_spec(flags, command);
    const auto output = rffses::run_command(command, spec);
    if (flags.out.empty()) {
      rffses::write_records(std::cout, output.header, output.records, flags.json);
    } else {
      std::ofstream out(flags.out);
      if (!out) throw rffses::error("cannot write '" + flags.out + "'");
      rffses::write_records(out, output.header, output.records, flags.json);
    }
  } catch (const std::exception& e) {
    std::cerr << "rffses: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
