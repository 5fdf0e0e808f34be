#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "catqkd/coherent.hpp"
#include "catqkd/errors.hpp"
#include "catqkd/kernels.hpp"
#include "catqkd/measurement.hpp"
#include "oracles.hpp"

using namespace catqkd;

namespace {

// pi^{-1/2} e^{-p^2} (1 + v cos(b p)) / (1 + v e^{-b^2/4}), tabulated for sampling.
CdfTable fringe_table(double v, double b) {
  CdfTable t;
  const std::size_t n = 8001;
  const double norm = 1.0 + v * std::exp(-b * b / 4.0);
  const auto f = [&](double p) { return std::exp(-p * p) / std::sqrt(oracle::pi) * (1.0 + v * std::cos(b * p)) / norm; };
  t.grid.resize(n);
  t.cdf.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.grid[i] = -8.0 + 16.0 * static_cast<double>(i) / (n - 1.0);
  t.cdf[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    t.cdf[i] = t.cdf[i - 1] + 0.5 * (f(t.grid[i - 1]) + f(t.grid[i])) * (t.grid[i] - t.grid[i - 1]);
  for (auto& c : t.cdf) c /= t.cdf.back();
  return t;
}

double mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

double stdev(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

}  // namespace

TEST_CASE("gaussian error probability matches the numeric tail") {
  for (double m : {0.0, 0.25, 1.0, std::sqrt(2.0), 2.0, 3.5}) CHECK(std::abs(gaussian_error_prob(m) - oracle::gaussian_tail(m)) < 1e-13);
  CHECK(gaussian_error_prob(std::sqrt(2.0)) == doctest::Approx(0.0227501319481792).epsilon(1e-12));
  CHECK(gaussian_error_prob(1.0) == doctest::Approx(0.0786496035251426).epsilon(1e-12));
  CHECK(gaussian_error_prob(0.0) == 0.5);
  CHECK_THROWS_AS(gaussian_error_prob(-0.1), ParameterError);
}

TEST_CASE("helstrom error") {
  CHECK(helstrom_error(0.0) == 0.0);
  CHECK(helstrom_error(1.0) == 0.5);
  CHECK(helstrom_error(0.6) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(helstrom_error(std::exp(-0.4)) == doctest::Approx(0.128963938449785).epsilon(1e-12));
  CHECK_THROWS_AS(helstrom_error(-0.01), ParameterError);
  CHECK_THROWS_AS(helstrom_error(1.01), ParameterError);
  oracle::Gen gen(21);
  for (int i = 0; i < 1000; ++i) {
    const double s = gen.uniform(0.0, 1.0);
    const double d = 1.0 - 2.0 * helstrom_error(s);
    CHECK(std::abs(d * d + s * s - 1.0) < 1e-12);
  }
}

TEST_CASE("fringe period") {
  CHECK(fringe_period(std::sqrt(2.0)) == doctest::Approx(2.22144146907918).epsilon(1e-13));
  CHECK_THROWS_AS(fringe_period(0.0), ParameterError);
}

TEST_CASE("threshold decision") {
  CHECK(threshold_decide(0.0) == 0);
  CHECK(threshold_decide(2.1) == 0);
  CHECK(threshold_decide(-0.4) == 1);
}

TEST_CASE("cdf table is monotone from 0 to 1") {
  const auto t = quadrature_cdf_table(ket_to_operator(make_cat(1.0, Parity::odd)), {kPi / 2});
  CHECK(t.cdf.front() == 0.0);
  CHECK(t.cdf.back() == 1.0);
  CHECK(std::is_sorted(t.cdf.begin(), t.cdf.end()));
  CHECK(t.invert(0.0) == doctest::Approx(t.grid.front()));
  CHECK(t.invert(1.0) == doctest::Approx(t.grid.back()));
}

TEST_CASE("sampler passes a Kolmogorov-Smirnov test against the closed form") {
  const std::size_t n = 20000;
  // 1.63 / sqrt(n) is the 1% critical value.
  const double crit = 1.63 / std::sqrt(static_cast<double>(n));
  for (double t : {1.0, 0.8}) {
    const auto op = partial_trace(beamsplitter(ket_to_operator(make_cat(1.0, Parity::even)), t), Mode::a);
    const auto x = sample_quadrature(op, {kPi / 2}, n, 31);
    const auto cdf = [&](double p) {
      return oracle::simpson([&](double u) { return oracle::cat_p_pdf(1.0, t, true, u); }, -9.0, p, 4000);
    };
    CHECK(oracle::ks_statistic(x, cdf) < crit);
  }
  const auto x = sample_quadrature(ket_to_operator(CoherentKet::coherent(1.0)), {0.0}, n, 32);
  const auto cdf = [](double q) { return 0.5 * std::erfc(-(q - std::sqrt(2.0))); };
  CHECK(oracle::ks_statistic(x, cdf) < crit);
}

TEST_CASE("sampler is deterministic in the seed") {
  const auto op = ket_to_operator(make_cat(1.0, Parity::even));
  const auto a = sample_quadrature(op, {kPi / 2}, 1000, 5);
  const auto b = sample_quadrature(op, {kPi / 2}, 1000, 5);
  const auto c = sample_quadrature(op, {kPi / 2}, 1000, 6);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("thresholded coherent states reproduce the gaussian bit error rate") {
  const std::size_t n = 1'000'000;
  const auto x = sample_quadrature(ket_to_operator(CoherentKet::coherent(1.0)), {0.0}, n, 41);
  const auto errors = static_cast<double>(std::count_if(x.begin(), x.end(), [](double v) { return threshold_decide(v) == 1; }));
  const double p = oracle::gaussian_tail(std::sqrt(2.0));
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  CHECK(std::abs(errors / static_cast<double>(n) - p) < 5.0 * sigma);
}

TEST_CASE("visibility estimator is unbiased with calibrated standard errors") {
  const double b = 2.0 * std::sqrt(2.0);
  for (double v : {0.0, 0.3, 0.67, 1.0}) {
    const auto table = fringe_table(v, b);
    std::vector<double> vs, ses;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto x = sample_from_table(table, 10000, 1000 + seed);
      const auto est = estimate_visibility(x, b);
      CHECK(est.n_samples == 10000);
      CHECK(est.fringe_freq == b);
      vs.push_back(est.v_hat);
      ses.push_back(est.std_err);
    }
    const double sd = stdev(vs);
    CAPTURE(v);
    CHECK(std::abs(mean(vs) - v) < 5.0 * sd / 10.0);
    CHECK(mean(ses) == doctest::Approx(sd).epsilon(0.3));
  }
}

TEST_CASE("odd cat fringes read positive against the pi reference phase") {
  const auto op = ket_to_operator(make_cat(1.0, Parity::odd));
  const auto x = sample_quadrature(op, {kPi / 2}, 50000, 7);
  const double b = 2.0 * std::sqrt(2.0);
  const auto est = estimate_visibility(x, b, kPi);
  CHECK(est.v_hat == doctest::Approx(1.0).epsilon(0.03));
  CHECK(estimate_visibility(x, b, 0.0).v_hat < -0.9);
}

TEST_CASE("visibility estimator rejects unusable input") {
  std::vector<double> few(99, 0.1);
  CHECK_THROWS_AS(estimate_visibility(few, 1.0), ParameterError);
  std::vector<double> flat(500, 0.1);
  CHECK_THROWS_AS(estimate_visibility(flat, 1.0), ParameterError);
  const auto x = sample_quadrature(ket_to_operator(make_cat(1.0, Parity::even)), {kPi / 2}, 1000, 1);
  CHECK_THROWS_AS(estimate_visibility(x, 0.0), ParameterError);
  CHECK_THROWS_AS(estimate_visibility(x, -1.0), ParameterError);
}

TEST_CASE("histogram bins clip into the edge bins") {
  CHECK(kernels::detail::histogram_bin(-100.0, -5.0, 5.0, 64) == 0);
  CHECK(kernels::detail::histogram_bin(100.0, -5.0, 5.0, 64) == 63);
  CHECK(kernels::detail::histogram_bin(5.0, -5.0, 5.0, 64) == 63);
  CHECK(kernels::detail::histogram_bin(0.0, -5.0, 5.0, 64) == 32);
}

TEST_CASE("histogram and inversion kernels agree bit for bit") {
  const auto table = quadrature_cdf_table(ket_to_operator(make_cat(1.2, Parity::even)), {kPi / 2});
  oracle::Gen gen(8);
  std::vector<double> u(200000);
  for (auto& v : u) v = gen.uniform(0.0, 1.0);
  std::vector<double> xs(u.size()), xp(u.size());
  kernels::serial::invert_cdf(table, u, xs);
  kernels::omp::invert_cdf(table, u, xp);
  CHECK(xs == xp);
  std::vector<std::uint64_t> cs(64), cp(64);
  kernels::serial::histogram(xs, -5.0, 5.0, cs);
  kernels::omp::histogram(xs, -5.0, 5.0, cp);
  CHECK(cs == cp);
  CHECK(std::accumulate(cs.begin(), cs.end(), std::uint64_t{0}) == xs.size());
}
