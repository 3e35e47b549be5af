#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rffses/bq.hpp"
#include "rffses/errors.hpp"
#include "rffses/qmc.hpp"
#include "rffses/rng.hpp"

using namespace rffses;

static spectral_frequencies make_freqs(const Eigen::MatrixXd& w, double sigma = 1.0) {
  return spectral_frequencies(w, sigma, frequency_source::monte_carlo, 0);
}

static oracle::dense to_dense(const Eigen::MatrixXd& a) {
  oracle::dense out(a.rows(), std::vector<double>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[i][j] = a(i, j);
  return out;
}

TEST_CASE("gp covariance") {
  Eigen::MatrixXd w(3, 2);
  w << 0.0, 0.0, 1.0, 0.0, 1.0, 0.0;
  const auto k = gp_covariance(make_freqs(w), {2.0, 1e-8});
  CHECK(k(0, 0) == doctest::Approx(1.0 + 1e-8).epsilon(1e-15));
  CHECK(k(1, 2) == 1.0);
  CHECK(k(0, 1) == doctest::Approx(std::exp(-1.0 / 8.0)).epsilon(1e-15));
  CHECK((k - k.transpose()).isZero(0.0));

  const auto narrow = gp_covariance(make_freqs(w.topRows(2)), {1e-6, 1e-8});
  CHECK(narrow(0, 1) == 0.0);
  CHECK(narrow(1, 1) == doctest::Approx(1.0 + 1e-8).epsilon(1e-15));
}

TEST_CASE("gamma closed form against quadrature") {
  rng gen(4);
  for (double sigma : {0.5, 1.0, 2.0})
    for (double sgp : {0.5, 1.0, 2.0})
      for (int d : {1, 2}) {
        Eigen::MatrixXd w(3, d);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
          for (int j = 0; j < d; ++j) w(i, j) = 1.5 * gen.normal() / sigma;
        const auto g = bq_gamma(make_freqs(w, sigma), {sgp, 0.0}, gaussian_kernel(sigma));
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          std::vector<double> cc;
          for (int j = 0; j < d; ++j) cc.push_back(w(i, j));
          const double ref = oracle::gp_mean_embedding(cc, sgp, 1.0 / (sigma * sigma));
          CHECK(std::abs(g(i) - ref) < 1e-9);
        }
      }

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  CHECK(std::abs(bq_gamma(make_freqs(zero), {1.0, 0.0}, gaussian_kernel(1.0))(0) -
                 0.70710678118654752) < 1e-9);
  Eigen::MatrixXd far(1, 2);
  far << 60.0, 0.0;
  CHECK(bq_gamma(make_freqs(far), {1.0, 0.0}, gaussian_kernel(1.0))(0) < 1e-300);
  Eigen::MatrixXd some(2, 3);
  some << 0.3, -1.0, 2.0, 0.0, 0.5, 0.1;
  const auto flat = bq_gamma(make_freqs(some), {1e6, 0.0}, gaussian_kernel(1.0));
  CHECK((flat.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("bq weights") {
  Eigen::MatrixXd one(1, 2);
  one << 0.4, -0.2;
  const bq_config cfg{1.3, 1e-8};
  const gaussian_kernel kernel(1.0);
  const auto g1 = bq_gamma(make_freqs(one), cfg, kernel);
  const auto b1 = bq_weights(make_freqs(one), cfg, kernel);
  CHECK(b1.beta(0) == doctest::Approx(g1(0) / (1.0 + 1e-8)).epsilon(1e-14));
  CHECK(b1.kind == weight_kind::bq);

  // A duplicated frequency splits the single-frequency weight in two.
  Eigen::MatrixXd dup(2, 2);
  dup << 0.4, -0.2, 0.4, -0.2;
  const auto b2 = bq_weights(make_freqs(dup), {1.3, 1e-6}, kernel);
  const double single = g1(0) / (1.0 + 1e-6);
  CHECK(std::abs(b2.beta.sum() - single) < 1e-6);
  CHECK(std::abs(b2.beta(0) - b2.beta(1)) < 1e-6);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::Index m = 4 + 3 * static_cast<Eigen::Index>(seed);
    const auto f = sample_qmc_frequencies(m, 3, 1.2, seed);
    const bq_config c{0.5 + 0.2 * seed, 1e-6};
    const auto b = bq_weights(f, c, gaussian_kernel(1.2));
    const auto kgp = gp_covariance(f, c);
    const auto gamma = bq_gamma(f, c, gaussian_kernel(1.2));
    std::vector<double> rhs(gamma.data(), gamma.data() + gamma.size());
    const auto ref = oracle::gauss_solve(to_dense(kgp), rhs);
    for (Eigen::Index i = 0; i < m; ++i)
      CHECK(std::abs(b.beta(i) - ref[i]) <= 1e-8 * std::max(1.0, std::abs(ref[i])));
    CHECK((kgp * b.beta - gamma).lpNorm<Eigen::Infinity>() <=
          1e-8 * gamma.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("jitter escalation and singular prior") {
  Eigen::MatrixXd dup(3, 1);
  dup << 0.1, 0.1, 0.1;
  const auto b = bq_weights(make_freqs(dup), {1.0, 0.0}, gaussian_kernel(1.0));
  CHECK(b.lambda > 0.0);
  CHECK(b.lambda <= 1e-2);
  CHECK(b.beta.allFinite());
  Eigen::MatrixXd nan_free(2, 1);
  nan_free << 0.0, 1.0;
  CHECK_THROWS_AS(bq_weights(make_freqs(nan_free), {1.0, -1.0}, gaussian_kernel(1.0)),
                  invalid_argument_error);
}

TEST_CASE("BQ weight sum approaches one as M grows") {
  rng gen(1);
  Eigen::MatrixXd x(300, 4);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = gen.normal();
  const gaussian_kernel kernel(2.0);
  const auto grid = std::vector<double>{0.25, 0.5, 1.0, 2.0};
  auto gap = [&](Eigen::Index m) {
    const auto t = tune_sigma_gp(x, sample_qmc_frequencies(m, 4, 2.0, 3), kernel, grid, 4 * m, 5);
    return std::abs(t.weights.beta.sum() - 1.0);
  };
  CHECK(gap(256) < gap(16));
}

TEST_CASE("sigma_gp tuning returns a grid value with its table") {
  rng gen(2);
  Eigen::MatrixXd x(50, 3);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = gen.normal();
  const auto f = sample_qmc_frequencies(16, 3, 1.5, 0);
  const std::vector<double> grid{0.25, 1.0, 4.0};
  const auto t = tune_sigma_gp(x, f, gaussian_kernel(1.5), grid, 64, 9);
  CHECK(t.table.size() == 3);
  CHECK(std::find(grid.begin(), grid.end(), t.sigma_gp) != grid.end());
  for (const auto& s : t.table) CHECK(s.relative_error >= 0.0);
  const auto again = tune_sigma_gp(x, f, gaussian_kernel(1.5), grid, 64, 9);
  CHECK(again.weights.beta == t.weights.beta);
  const auto single = tune_sigma_gp(x, f, gaussian_kernel(1.5), {0.5}, 64, 9);
  CHECK(single.sigma_gp == 0.5);
}
