#include "rffses/qmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rffses/errors.hpp"
#include "rffses/rng.hpp"

namespace rffses {

namespace {

const std::vector<std::uint32_t>& prime_table() {
  static const std::vector<std::uint32_t> primes = [] {
    // The 1000th prime is 7919.
    constexpr std::uint32_t limit = 7920;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint32_t j = i * i; j < limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Digit permutation for one base; digit 0 stays fixed so that the implicit
// trailing zeros of every index contribute nothing.
std::vector<std::uint32_t> digit_permutation(std::uint32_t base, rng& gen) {
  std::vector<std::uint32_t> perm(base);
  for (std::uint32_t i = 0; i < base; ++i) perm[i] = i;
  if (base > 2) gen.shuffle(std::span<std::uint32_t>(perm.data() + 1, base - 1));
  return perm;
}

double radical_inverse(std::uint64_t index, std::uint32_t base,
                       const std::vector<std::uint32_t>* perm) {
  const double inv_base = 1.0 / base;
  double factor = inv_base;
  double value = 0.0;
  while (index > 0) {
    const auto digit = static_cast<std::uint32_t>(index % base);
    value += (perm ? (*perm)[digit] : digit) * factor;
    factor *= inv_base;
    index /= base;
  }
  return std::min(value, std::nextafter(1.0, 0.0));
}

}  // namespace

std::uint32_t nth_prime(Eigen::Index n) {
  const auto& primes = prime_table();
  if (n < 0 || n >= static_cast<Eigen::Index>(primes.size()))
    throw unsupported_dimension_error("no prime base for dimension index " + std::to_string(n));
  return primes[static_cast<std::size_t>(n)];
}

unit_cube_points halton_points(Eigen::Index count, Eigen::Index dim, std::uint64_t scramble_seed,
                               std::uint64_t shift_seed) {
  if (count < 1 || dim < 1) throw invalid_argument_error("Halton points need M >= 1 and d >= 1");
  if (dim > max_halton_dimension)
    throw unsupported_dimension_error("Halton dimension " + std::to_string(dim) +
                                      " exceeds the prime table (max " +
                                      std::to_string(max_halton_dimension) + ")");

  std::vector<std::vector<std::uint32_t>> perms;
  if (scramble_seed != 0) {
    rng gen(scramble_seed);
    perms.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j) perms.push_back(digit_permutation(nth_prime(j), gen));
  }
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(dim);
  if (shift_seed != 0) {
    rng gen(shift_seed);
    for (Eigen::Index j = 0; j < dim; ++j) shift(j) = gen.uniform();
  }

  unit_cube_points out;
  out.scramble_seed = scramble_seed;
  out.shift_seed = shift_seed;
  out.points.resize(count, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::uint32_t base = nth_prime(j);
    const auto* perm = perms.empty() ? nullptr : &perms[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < count; ++i) {
      double t = radical_inverse(static_cast<std::uint64_t>(i + 1), base, perm) + shift(j);
      if (t >= 1.0) t -= 1.0;
      out.points(i, j) = t;
    }
  }
  return out;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw numeric_domain_error("normal quantile needs p in (0, 1)");

  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement. In the upper tail work with the complement to keep
  // relative accuracy.
  if (p > 0.5) {
    const double e = 0.5 * std::erfc(x / std::numbers::sqrt2) - (1.0 - p);
    const double u = -e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  } else {
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

spectral_frequencies gaussian_transform(const unit_cube_points& points, double sigma) {
  if (!(sigma > 0.0)) throw invalid_argument_error("bandwidth must be positive");
  constexpr double eps = 0x1.0p-53;
  Eigen::MatrixXd w(points.points.rows(), points.points.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double t = std::clamp(points.points(i, j), eps, 1.0 - eps);
      const double q = normal_quantile(t);
      if (!std::isfinite(q)) throw numeric_domain_error("non-finite normal quantile");
      w(i, j) = q / sigma;
    }
  }
  return {std::move(w), sigma, frequency_source::quasi_monte_carlo, points.scramble_seed};
}

spectral_frequencies sample_qmc_frequencies(Eigen::Index count, Eigen::Index dim, double sigma,
                                            std::uint64_t seed) {
  // Seeds of zero would switch scrambling/shifting off; force them nonzero.
  const std::uint64_t scramble = mix_seed(seed, 101) | 1ULL;
  const std::uint64_t shift = mix_seed(seed, 202) | 1ULL;
  auto freqs = gaussian_transform(halton_points(count, dim, scramble, shift), sigma);
  return {freqs.freqs(), sigma, frequency_source::quasi_monte_carlo, seed};
}

}  // namespace rffses
