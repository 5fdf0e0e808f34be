#pragma once

// Homodyne detection: sampling quadrature outcomes, bit decisions, error
// probabilities and fringe-visibility estimation from finite data.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "catqkd/coherent.hpp"
#include "catqkd/kernels.hpp"
#include "catqkd/pulse.hpp"

namespace catqkd {

struct HomodyneSetting {
  double theta = 0.0;  // LO-relative signal phase in radians
};

struct VisibilityEstimate {
  double v_hat = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
  double fringe_freq = 0.0;
  double phase = 0.0;  // fitted offset of the cos(b p + phase) fringe
};

/// Normalized CDF of X(theta) on the standard grid, for inverse-CDF sampling.
CdfTable quadrature_cdf_table(const CoherentOperator& op, HomodyneSetting setting,
                              std::size_t points = kDefaultGridPoints);

/// `n` i.i.d. draws from `table`; the uniforms come from one mt19937_64
/// seeded with `seed`, so equal seeds give equal output.
std::vector<double> sample_from_table(const CdfTable& table, std::size_t n, std::uint64_t seed);

std::vector<double> sample_quadrature(const CoherentOperator& op, HomodyneSetting setting,
                                      std::size_t n, std::uint64_t seed);

/// Bit 0 for x >= 0, bit 1 for x < 0.
inline Bit threshold_decide(double x) { return x >= 0.0 ? Bit{0} : Bit{1}; }

/// Probability that thresholding at zero misreads a coherent state whose
/// quadrature density is pi^{-1/2} exp(-(x - m)^2): erfc(m) / 2.
double gaussian_error_prob(double mean_amp);

/// Minimum error for telling apart two equiprobable pure states with
/// |<psi0|psi1>| = s: (1 - sqrt(1 - s^2)) / 2.
double helstrom_error(double overlap_mag);

/// Period pi / <alpha> of the cat-state interference fringe.
double fringe_period(double mean_amp);

/// Histogram layout used by the visibility fit.
inline constexpr std::size_t kVisibilityBins = 64;
inline constexpr double kVisibilityRange = 5.0;
inline constexpr std::size_t kMinVisibilitySamples = 100;

/// Fits p(q) = A pi^{-1/2} e^{-q^2} [1 + V cos(b q + phase)] to a 64-bin
/// histogram over [-5, 5] by iteratively reweighted least squares.
///
/// The envelope is fixed; A, V and the phase are free. V is reported with
/// the sign of the fringe component along `reference_phase` (0 for an even
/// cat, pi for an odd one), so a fringe-free input scatters around zero
/// instead of being biased upward. std_err comes from the fit covariance.
///
/// Throws ParameterError for fewer than 100 samples, a non-positive fringe
/// frequency, or a histogram with every sample in one bin.
VisibilityEstimate estimate_visibility(std::span<const double> samples, double fringe_freq,
                                       double reference_phase = 0.0);

}  // namespace catqkd
