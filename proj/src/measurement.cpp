#include "catqkd/measurement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "catqkd/errors.hpp"

namespace catqkd {
namespace {

constexpr double kTailEdge = 10.0;  // exp(-100) is far below double resolution of a count

// Integrals of pi^{-1/2} e^{-q^2} {1, cos(bq), sin(bq)} over [lo, hi], composite Simpson.
std::array<double, 3> fringe_basis_integrals(double lo, double hi, double b) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / 0.004));
  steps += steps % 2;
  steps = std::max<std::size_t>(steps, 8);
  const double h = (hi - lo) / static_cast<double>(steps);
  std::array<double, 3> acc{};
  for (std::size_t i = 0; i <= steps; ++i) {
    const double q = lo + h * static_cast<double>(i);
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double g = inv_sqrt_pi * std::exp(-q * q);
    acc[0] += w * g;
    acc[1] += w * g * std::cos(b * q);
    acc[2] += w * g * std::sin(b * q);
  }
  for (auto& a : acc) a *= h / 3.0;
  return acc;
}

}  // namespace

CdfTable quadrature_cdf_table(const CoherentOperator& op, HomodyneSetting setting,
                              std::size_t points) {
  const auto grid = standard_grid(op, points);
  const auto pdf = quadrature_pdf_on_grid(op, setting.theta, grid);
  CdfTable table;
  table.grid.resize(grid.points);
  table.cdf.resize(grid.points);
  const double h = grid.step();
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    table.grid[i] = grid.node(i);
    if (i > 0) acc += 0.5 * h * (pdf[i - 1] + pdf[i]);
    table.cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw DegenerateStateError("quadrature density integrates to zero");
  for (auto& c : table.cdf) c /= acc;
  table.cdf.back() = 1.0;
  return table;
}

std::vector<double> sample_from_table(const CdfTable& table, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> u(n);
  for (auto& x : u) x = unit(rng);
  std::vector<double> out(n);
  kernels::omp::invert_cdf(table, u, out);
  return out;
}

std::vector<double> sample_quadrature(const CoherentOperator& op, HomodyneSetting setting,
                                      std::size_t n, std::uint64_t seed) {
  return sample_from_table(quadrature_cdf_table(op, setting), n, seed);
}

double gaussian_error_prob(double mean_amp) {
  if (!(mean_amp >= 0.0)) throw ParameterError("mean amplitude must be non-negative");
  return 0.5 * std::erfc(mean_amp);
}

double helstrom_error(double overlap_mag) {
  if (!(overlap_mag >= 0.0 && overlap_mag <= 1.0))
    throw ParameterError("overlap magnitude must lie in [0, 1]");
  return 0.5 * (1.0 - std::sqrt(1.0 - overlap_mag * overlap_mag));
}

double fringe_period(double mean_amp) {
  if (!(mean_amp > 0.0)) throw ParameterError("fringe period needs a positive mean amplitude");
  return kPi / mean_amp;
}

VisibilityEstimate estimate_visibility(std::span<const double> samples, double fringe_freq,
                                       double reference_phase) {
  if (samples.size() < kMinVisibilitySamples)
    throw ParameterError("visibility estimate needs at least 100 samples");
  if (!(fringe_freq > 0.0) || !std::isfinite(fringe_freq))
    throw ParameterError("fringe frequency must be positive");

  constexpr std::size_t bins = kVisibilityBins;
  const double lo = -kVisibilityRange;
  const double hi = kVisibilityRange;
  std::vector<std::uint64_t> counts(bins);
  kernels::omp::histogram(samples, lo, hi, counts);
  if (std::any_of(counts.begin(), counts.end(),
                  [&](std::uint64_t c) { return c == samples.size(); }))
    throw ParameterError("degenerate histogram: every sample fell in one bin");

  const double n = static_cast<double>(samples.size());
  const double width = (hi - lo) / static_cast<double>(bins);
  Eigen::MatrixXd design(bins, 3);
  Eigen::VectorXd y(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    // Out-of-range samples were clipped into the edge bins, so those bins
    // integrate the model out to the tails.
    const double a = k == 0 ? -kTailEdge : lo + width * static_cast<double>(k);
    const double b = k + 1 == bins ? kTailEdge : lo + width * static_cast<double>(k + 1);
    const auto basis = fringe_basis_integrals(a, b, fringe_freq);
    const auto row = static_cast<Eigen::Index>(k);
    for (Eigen::Index j = 0; j < 3; ++j) design(row, j) = n * basis[static_cast<std::size_t>(j)];
    y(row) = static_cast<double>(counts[k]);
  }

  // Poisson weights, first from the data, then from the fitted model.
  Eigen::VectorXd weight = y.cwiseMax(1.0).cwiseInverse();
  Eigen::Vector3d params = Eigen::Vector3d::Zero();
  Eigen::Matrix3d normal;
  for (int iter = 0; iter < 5; ++iter) {
    normal = design.transpose() * weight.asDiagonal() * design;
    params = normal.ldlt().solve(design.transpose() * weight.asDiagonal() * y);
    weight = (design * params).cwiseMax(0.5).cwiseInverse();
  }
  normal = design.transpose() * weight.asDiagonal() * design;
  const Eigen::Matrix3d cov = normal.inverse();

  const double amp = params(0);
  const double c1 = params(1);  // A V cos(phase)
  const double c2 = params(2);  // -A V sin(phase)
  if (!(amp > 0.0)) throw ParameterError("degenerate histogram: fitted envelope is empty");

  const double magnitude = std::hypot(c1, c2);
  const double along = c1 * std::cos(reference_phase) - c2 * std::sin(reference_phase);
  const double sign = along < 0.0 ? -1.0 : 1.0;

  VisibilityEstimate est;
  est.n_samples = samples.size();
  est.fringe_freq = fringe_freq;
  est.phase = std::atan2(-c2, c1);
  est.v_hat = sign * magnitude / amp;

  Eigen::Vector3d grad;
  if (magnitude > 0.0) {
    grad << -est.v_hat / amp, sign * c1 / (magnitude * amp), sign * c2 / (magnitude * amp);
  } else {
    grad << 0.0, std::cos(reference_phase) / amp, -std::sin(reference_phase) / amp;
  }
  est.std_err = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
  return est;
}

}  // namespace catqkd
