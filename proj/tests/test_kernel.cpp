#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rffses/errors.hpp"
#include "rffses/kernel.hpp"
#include "rffses/qmc.hpp"
#include "rffses/rng.hpp"
#include "rffses/spectral.hpp"

using namespace rffses;

static Eigen::MatrixXd normal_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  rng gen(seed);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = gen.normal();
  return x;
}

TEST_CASE("exact gram") {
  const gaussian_kernel k(1.5);
  Eigen::MatrixXd x(2, 2);
  x << 0.0, 0.0, 1.5 * std::sqrt(2.0), 0.0;
  const auto g = exact_gram(x, x, k).values;
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == 1.0);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(exact_gram(x, x, k).exact);

  const auto far = exact_gram(normal_matrix(5, 3, 1), normal_matrix(4, 3, 2), gaussian_kernel(1e8));
  CHECK((far.values.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(far.values.rows() == 5);
  CHECK(far.values.cols() == 4);

  CHECK_THROWS_AS(exact_gram(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 4), k),
                  dimension_mismatch_error);
  CHECK_THROWS_AS(gaussian_kernel(0.0), invalid_argument_error);
}

TEST_CASE("approx gram") {
  const auto x = normal_matrix(30, 4, 3);
  const auto z = feature_map(x, sample_mc_frequencies(64, 4, 1.0, 4));
  const auto g = approx_gram(z, z).values;
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((g.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);

  feature_matrix zero;
  zero.values = Eigen::MatrixXd::Zero(3, 8);
  CHECK(approx_gram(zero, zero).values.isZero(0.0));
  feature_matrix narrow;
  narrow.values = Eigen::MatrixXd::Zero(3, 6);
  CHECK_THROWS_AS(approx_gram(zero, narrow), dimension_mismatch_error);
}

TEST_CASE("relative error") {
  const auto x = normal_matrix(10, 2, 5);
  const auto k = exact_gram(x, x, gaussian_kernel(1.0));
  gram_matrix zero{Eigen::MatrixXd::Zero(10, 10), false};
  gram_matrix twice{2.0 * k.values, false};
  CHECK(relative_error(k, k) == 0.0);
  CHECK(relative_error(k, zero) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(relative_error(k, twice) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(relative_error(gram_matrix{zero.values, true}, k), undefined_metric_error);
  CHECK_THROWS_AS(relative_error(k, gram_matrix{Eigen::MatrixXd::Zero(3, 3), false}),
                  dimension_mismatch_error);
}

TEST_CASE("uniform-weight error shrinks with M") {
  const auto x = normal_matrix(200, 5, 6);
  const gaussian_kernel kernel(2.0);
  const auto exact = exact_gram(x, x, kernel);
  auto median_error = [&](Eigen::Index m) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto z = feature_map(x, sample_mc_frequencies(m, 5, 2.0, seed));
      errs.push_back(relative_error(exact, approx_gram(z, z)));
    }
    std::nth_element(errs.begin(), errs.begin() + 5, errs.end());
    return errs[5];
  };
  CHECK(median_error(512) < median_error(32));
}

TEST_CASE("median pairwise distance") {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 1.0, 3.0;  // distances 1, 2, 3
  CHECK(median_pairwise_distance(x, 1000, 0) == doctest::Approx(2.0));
  const auto y = normal_matrix(400, 3, 9);
  CHECK(median_pairwise_distance(y, 100, 1) == median_pairwise_distance(y, 100, 1));
  // For standard normal data in d = 3, |x - y|^2 / 2 is chi-square(3); its median is about 2.366.
  CHECK(std::abs(median_pairwise_distance(y, 400, 1) - std::sqrt(2.0 * 2.366)) < 0.15);
}

TEST_CASE("stein risk simulation") {
  const gaussian_kernel kernel(1.0);
  const data_sampler sampler{data_distribution::standard_normal, 5};

  const auto same = stein_risk_simulation(kernel, sampler, 4, 0.0, 0.0, 2000, 3);
  CHECK(same.risk_shrunk == same.risk_uniform);
  CHECK(same.trials == 2000);
  CHECK(same.alpha_star_estimate > 0.0);
  CHECK(same.alpha_star_estimate < 1.0);

  const auto pilot = stein_risk_simulation(kernel, sampler, 4, 0.0, 0.0, 5000, 11);
  const auto run = stein_risk_simulation(kernel, sampler, 4, pilot.alpha_star_estimate, 0.0,
                                         20000, 12);
  CHECK(run.risk_uniform - run.risk_shrunk > 3.0 * run.difference_stderr);

  const auto biased = stein_risk_simulation(kernel, sampler, 16, 0.99, 10.0, 2000, 5);
  CHECK(biased.risk_shrunk > biased.risk_uniform);

  // Closed forms for x, x' ~ N(0, I_5), sigma = 1, delta ~ N(0, 2 I):
  // with k = exp(-|delta|^2 / 2), Var_w cos(w . delta) = (1 - k^2)^2 / 2.
  const double e_k2 = std::pow(5.0, -2.5);
  const double variance = (1.0 - 2.0 * e_k2 + std::pow(9.0, -2.5)) / 2.0 / 4.0;
  const auto big = stein_risk_simulation(kernel, sampler, 4, 0.0, 0.0, 40000, 21);
  CHECK(big.risk_uniform == doctest::Approx(variance).epsilon(0.05));
  CHECK(big.mean_sq_bias == doctest::Approx(e_k2).epsilon(0.05));
  CHECK(big.alpha_star_estimate == doctest::Approx(variance / (variance + e_k2)).epsilon(0.05));

  const auto rerun = stein_risk_simulation(kernel, sampler, 4, 0.3, 0.0, 500, 3);
  const auto rerun2 = stein_risk_simulation(kernel, sampler, 4, 0.3, 0.0, 500, 3);
  CHECK(rerun.risk_shrunk == rerun2.risk_shrunk);

  CHECK_THROWS_AS(stein_risk_simulation(kernel, sampler, 4, 1.0, 0.0, 10, 1), invalid_argument_error);
  CHECK_THROWS_AS(stein_risk_simulation(kernel, sampler, 0, 0.1, 0.0, 10, 1), invalid_argument_error);
}
