#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "rffses/errors.hpp"
#include "rffses/qmc.hpp"

using namespace rffses;

// Radical inverse by explicit digit expansion, for cross-checking.
static double digits_oracle(unsigned index, unsigned base) {
  std::vector<unsigned> digits;
  while (index) {
    digits.push_back(index % base);
    index /= base;
  }
  double v = 0.0, f = 1.0 / base;
  for (auto d : digits) {
    v += d * f;
    f /= base;
  }
  return v;
}

TEST_CASE("raw Halton matches hand-computed radical inverses") {
  const auto p1 = halton_points(3, 1, 0, 0).points;
  CHECK(p1(0, 0) == 0.5);
  CHECK(p1(1, 0) == 0.25);
  CHECK(p1(2, 0) == 0.75);

  const auto p2 = halton_points(2, 2, 0, 0).points;
  CHECK(p2(0, 0) == 0.5);
  CHECK(p2(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p2(1, 0) == 0.25);
  CHECK(p2(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto p5 = halton_points(200, 5, 0, 0).points;
  const unsigned bases[] = {2, 3, 5, 7, 11};
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(p5(i, j) == doctest::Approx(digits_oracle(i + 1, bases[j])).epsilon(1e-14));
}

TEST_CASE("prime table covers 1000 dimensions") {
  CHECK(nth_prime(0) == 2);
  CHECK(nth_prime(9) == 29);
  CHECK(nth_prime(999) == 7919);
  CHECK_THROWS_AS(halton_points(4, 1001, 0, 0), unsupported_dimension_error);
  CHECK_NOTHROW(halton_points(2, 1000, 3, 4));
}

TEST_CASE("scrambled and shifted points stay in [0,1), are deterministic and nested") {
  for (std::uint64_t seed : {1ULL, 7ULL, 12345ULL}) {
    const auto a = halton_points(300, 7, seed, seed + 1).points;
    CHECK((a.array() >= 0.0).all());
    CHECK((a.array() < 1.0).all());
    const auto b = halton_points(300, 7, seed, seed + 1).points;
    CHECK(a == b);
    const auto prefix = halton_points(120, 7, seed, seed + 1).points;
    CHECK(prefix == a.topRows(120));
  }
  // Different scramble seeds give different points in bases > 2.
  const auto s1 = halton_points(10, 3, 1, 0).points;
  const auto s2 = halton_points(10, 3, 2, 0).points;
  CHECK(s1.col(0) == s2.col(0));  // base 2 has no nontrivial permutation fixing 0
  CHECK(s1.col(2) != s2.col(2));
}

TEST_CASE("raw rows are pairwise distinct") {
  const auto p = halton_points(4096, 2, 0, 0).points;
  std::set<std::pair<double, double>> seen;
  for (Eigen::Index i = 0; i < p.rows(); ++i) seen.emplace(p(i, 0), p(i, 1));
  CHECK(seen.size() == 4096);
}

TEST_CASE("normal quantile agrees with a high-precision reference") {
  for (double p : {1e-300, 1e-17, 1e-9, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999,
                   1.0 - 1e-9, 1.0 - 0x1.0p-53}) {
    const double ref = oracle::normal_quantile(p);
    CHECK(normal_quantile(p) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK_THROWS_AS(normal_quantile(0.0), numeric_domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), numeric_domain_error);
}

TEST_CASE("gaussian transform") {
  unit_cube_points pts;
  pts.points.resize(3, 1);
  pts.points << 0.5, oracle::normal_cdf(1.0), 0.0;
  const auto w1 = gaussian_transform(pts, 1.0).freqs();
  CHECK(w1(0, 0) == 0.0);
  CHECK(std::abs(w1(1, 0) - 1.0) < 1e-12);
  CHECK(std::isfinite(w1(2, 0)));  // t = 0 is clamped, not an error
  CHECK(w1(2, 0) < -8.0);

  const auto w2 = gaussian_transform(pts, 2.0).freqs();
  CHECK(w2(1, 0) == doctest::Approx(0.5 * w1(1, 0)).epsilon(1e-15));

  CHECK_THROWS_AS(gaussian_transform(pts, 0.0), invalid_argument_error);
}

TEST_CASE("transformed 1-D Halton frequencies pass a Kolmogorov-Smirnov check") {
  const double sigma = 0.7;
  for (std::uint64_t seed : {0ULL, 3ULL}) {
    auto w = sample_qmc_frequencies(4096, 1, sigma, seed).freqs().col(0).eval();
    std::vector<double> v(w.data(), w.data() + w.size());
    std::sort(v.begin(), v.end());
    double ks = 0.0;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double f = oracle::normal_cdf(v[i] * sigma);
      ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    CHECK(ks < 0.05);
  }
}
