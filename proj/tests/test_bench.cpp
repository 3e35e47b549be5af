#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rffses/bench.hpp"
#include "rffses/errors.hpp"
#include "rffses/records.hpp"

using namespace rffses;

static experiment_spec small_spec() {
  experiment_spec spec;
  spec.synthetic_n = 120;
  spec.synthetic_d = 3;
  spec.m_values = {8};
  spec.seeds = {0, 1};
  spec.eval_rows = 40;
  spec.lambda_grid = {0.01, 0.1, 1.0};
  spec.sigma_gp_grid = {0.5, 1.0, 2.0};
  spec.reg_grid = {0.01, 1.0};
  return spec;
}

static std::string render(const command_output& out, bool json = false) {
  std::ostringstream s;
  write_records(s, out.header, out.records, json);
  return s.str();
}

static std::string field(const record& r, const std::string& key) {
  const auto* v = r.find(key);
  REQUIRE(v != nullptr);
  return format_field(*v);
}

TEST_CASE("list parsing") {
  CHECK(parse_int_list("16,32,64") == std::vector<std::int64_t>{16, 32, 64});
  CHECK(parse_int_list("0..3") == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(parse_real_list("0.5,2") == std::vector<double>{0.5, 2.0});
  CHECK(parse_real_list("pow2:-2:2") == std::vector<double>{0.25, 1.0, 4.0});
  CHECK(parse_real_list("pow2:0:2:1") == std::vector<double>{1.0, 2.0, 4.0});
  CHECK_THROWS_AS(parse_int_list("a,b"), invalid_argument_error);
  CHECK_THROWS_AS(parse_real_list(""), invalid_argument_error);
  CHECK(parse_method("SES-Uniform") == method::ses_uniform);
  CHECK(to_string(method::qmc) == "QMC");
  CHECK_THROWS_AS(parse_method("RKS"), unsupported_method_error);
}

TEST_CASE("records") {
  record r;
  r.set("a", 3).set("b", 0.1).set("c", std::string("x,y")).set("d", true);
  r.set("e", std::numeric_limits<double>::infinity());
  std::ostringstream csv;
  write_records(csv, {"a", "b", "c", "d", "e", "missing"}, {r}, false);
  CHECK(csv.str() == "a,b,c,d,e,missing\n3,0.1,x;y,1,inf,\n");
  std::istringstream in(csv.str());
  const auto rows = read_csv_records(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("b") == "0.1");
  CHECK(rows[0].at("missing").empty());

  std::ostringstream js;
  write_records(js, {"a", "b", "e", "missing"}, {r}, true);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["a"] == 3);
  CHECK(j["b"] == 0.1);
  CHECK(j["e"] == "inf");
  CHECK(j["missing"].is_null());
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("approx command") {
  auto spec = small_spec();
  spec.methods = {method::mc, method::qmc, method::bq, method::ses, method::ses_uniform};
  const auto out = cmd_approx(spec);
  CHECK(out.records.size() == 10);
  CHECK(std::find(out.header.begin(), out.header.end(), "wall_ms") == out.header.end());
  CHECK(field(out.records[0], "method") == "MC");
  CHECK(field(out.records[0], "seed") == "0");
  for (const auto& r : out.records) {
    const double e = std::stod(field(r, "error"));
    CHECK(e >= 0.0);
    CHECK(e < 1.0);
  }
  CHECK(render(out) == render(cmd_approx(spec)));

  auto threaded = spec;
  threaded.workers = 3;
  CHECK(render(cmd_approx(threaded)) == render(out));

  auto timed = spec;
  timed.timing = true;
  timed.methods = {method::mc};
  const auto t = cmd_approx(timed);
  CHECK(t.header.back() == "wall_ms");
  CHECK(t.records[0].find("wall_ms") != nullptr);

  // JSON lines carry the same fields.
  const auto lines = render(out, true);
  const auto first = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  CHECK(first.size() == out.header.size());
}

TEST_CASE("train command") {
  auto spec = small_spec();
  spec.methods = {method::mc, method::ses};
  spec.seeds = {0};
  const auto reg = cmd_train(spec);
  CHECK(reg.records.size() == 2);
  for (const auto& r : reg.records) CHECK(std::stod(field(r, "error")) < 1.0);

  spec.task = task_kind::binary_classification;
  const auto cls = cmd_train(spec);
  for (const auto& r : cls.records) {
    CHECK(field(r, "task") == "classification");
    CHECK(std::stod(field(r, "error")) < 0.5);
  }
  CHECK(render(cls) == render(cmd_train(spec)));
}

TEST_CASE("weights command") {
  auto spec = small_spec();
  spec.methods = {method::bq, method::ses};
  spec.seeds = {0};
  const auto out = cmd_weights(spec);
  CHECK(out.records.size() == 2 * (8 + 1));
  double total = 0.0;
  for (int k = 0; k < 8; ++k) total += std::stod(field(out.records[k], "normalized"));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(field(out.records[8], "kind") == "sum");
  double raw = 0.0;
  for (int k = 0; k < 8; ++k) raw += std::stod(field(out.records[k], "weight"));
  CHECK(std::stod(field(out.records[8], "weight_sum")) == doctest::Approx(raw).epsilon(1e-12));
  spec.methods = {method::mc};
  CHECK_THROWS_AS(cmd_weights(spec), unsupported_method_error);
  CHECK_THROWS_AS(run_command("nope", spec), invalid_argument_error);
}

TEST_CASE("sketch sweep") {
  auto spec = small_spec();
  spec.methods = {method::ses};
  spec.seeds = {0};
  spec.pool_rows = 30;
  spec.r_grid = {1, 16, 1000000};
  const auto out = cmd_sketch_sweep(spec);
  CHECK(out.records.size() == 3);
  CHECK(field(out.records[0], "r") == "1");
  CHECK(std::isfinite(std::stod(field(out.records[0], "error"))));
  // r above the pool size saturates every probability: same as the unsketched solve.
  const double gap = std::stod(field(out.records[2], "objective_gap"));
  CHECK(std::abs(gap) < 1e-10);
}

TEST_CASE("shrinkage compare and stein sim") {
  auto spec = small_spec();
  spec.seeds = {0};
  const auto out = cmd_shrinkage_compare(spec);
  CHECK(out.records.size() == 1);
  CHECK(std::stod(field(out.records[0], "ses_error")) >= 0.0);

  experiment_spec stein;
  stein.m_values = {4};
  stein.seeds = {0};
  stein.sigma = sigma_mode::value;
  stein.sigma_value = 1.0;
  stein.trials = 4000;
  stein.pilot_trials = 2000;
  const auto s = cmd_stein_sim(stein);
  CHECK(s.records.size() == 1);
  CHECK(std::stod(field(s.records[0], "difference")) > 0.0);
  stein.alpha = 0.0;
  const auto zero = cmd_stein_sim(stein);
  CHECK(std::stod(field(zero.records[0], "difference")) == 0.0);
}

TEST_CASE("zero-variance labels train to zero error") {
  auto spec = small_spec();
  spec.methods = {method::mc};
  spec.seeds = {0};
  spec.synthetic_d = 2;
  // Constant targets are produced through a data file.
  const auto path = std::filesystem::temp_directory_path() / "rffses_const.txt";
  {
    std::ofstream f(path);
    for (int i = 0; i < 50; ++i) f << "2.5 1:" << (i * 0.1) << " 2:" << std::sin(i) << "\n";
  }
  spec.data_path = path.string();
  const auto out = cmd_train(spec);
  std::filesystem::remove(path);
  CHECK(std::stod(field(out.records[0], "error")) < 1e-12);
}
