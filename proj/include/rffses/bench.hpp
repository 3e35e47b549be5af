#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rffses/dataio.hpp"
#include "rffses/records.hpp"

namespace rffses {

enum class method { mc, qmc, bq, ses, ses_uniform };

std::string_view to_string(method m);
method parse_method(std::string_view name);

enum class sigma_mode { value, median, grid };

struct experiment_spec {
  // Data: a sparse text file, or synthetic standard-normal rows.
  std::optional<std::string> data_path;
  Eigen::Index synthetic_n = 500;
  Eigen::Index synthetic_d = 6;
  std::optional<task_kind> task;
  std::optional<double> positive_label;
  std::uint64_t data_seed = 0;
  Eigen::Index subsample = 0;  // 0 keeps every row
  double train_fraction = 0.8;

  std::vector<method> methods = {method::mc, method::qmc, method::bq, method::ses};
  std::vector<Eigen::Index> m_values = {16, 32, 64};
  std::vector<std::uint64_t> seeds = {0};

  sigma_mode sigma = sigma_mode::median;
  double sigma_value = 1.0;
  std::vector<double> sigma_grid;  // default {2^-10, 2^-8, ..., 2^10}

  Eigen::Index pairs_train = 0;  // 0 means 4M
  Eigen::Index pairs_val = 0;    // 0 means 2M
  Eigen::Index sketch_r = 0;     // 0 means no sketch
  std::vector<double> lambda_grid;    // default {2^-8, ..., 2^8}
  std::vector<double> sigma_gp_grid;  // default {2^-8, ..., 2^8}
  std::vector<double> reg_grid;       // default {2^-10, ..., 2^10}
  Eigen::Index eval_rows = 2000;
  int folds = 5;
  int hinge_max_iterations = 200;
  double hinge_tolerance = 1e-6;

  std::vector<Eigen::Index> r_grid;  // sketch-sweep; default {M, 2M, 4M, 8M}
  Eigen::Index pool_rows = 200;      // sketch-sweep pair pool: all ordered pairs of these rows

  // stein-sim
  std::optional<double> alpha;  // unset: plug-in estimate from a pilot run
  double mu = 0.0;
  std::int64_t trials = 100000;
  std::int64_t pilot_trials = 20000;
  Eigen::Index stein_dim = 5;

  int workers = 1;
  bool timing = false;
};

struct command_output {
  std::vector<std::string> header;
  std::vector<record> records;
};

command_output cmd_approx(const experiment_spec& spec);
command_output cmd_train(const experiment_spec& spec);
command_output cmd_weights(const experiment_spec& spec);
command_output cmd_sketch_sweep(const experiment_spec& spec);
command_output cmd_shrinkage_compare(const experiment_spec& spec);
command_output cmd_stein_sim(const experiment_spec& spec);

// Dispatch by CLI subcommand name.
command_output run_command(std::string_view name, const experiment_spec& spec);

// "16,32,64"; integers may also be given as an inclusive range "0..9".
std::vector<std::int64_t> parse_int_list(std::string_view text);
// "0.5,1,2" or "pow2:LO:HI[:STEP]" for {2^LO, 2^(LO+STEP), ..., 2^HI}.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace rffses
