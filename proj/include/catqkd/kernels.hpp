#pragma once

// Data-parallel inner loops.
//
// Each kernel exists twice with identical signatures: `serial` is the plain
// reference loop, `omp` is the OpenMP version used by the library. Both
// produce bit-identical results (no floating-point reductions are split
// across threads), which the kernel tests assert.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "catqkd/coherent.hpp"
#include "catqkd/pulse.hpp"

namespace catqkd {

/// Tabulated cumulative distribution on a sorted grid, cdf.front() == 0 and
/// cdf.back() == 1. Sampling inverts the piecewise-linear CDF.
struct CdfTable {
  std::vector<double> grid;
  std::vector<double> cdf;

  double invert(double u) const;
};

/// Everything the per-pulse loop needs, precomputed once per session.
/// tables[state][setting]: state 0 = |alpha>, 1 = |-alpha>, 2 = cat.
struct PulsePlan {
  double decoy_fraction = 0.5;
  std::array<std::array<const CdfTable*, 2>, 3> tables{};
  std::optional<double> eve_error_rate;  // set when an eavesdropper is present
};

namespace kernels {

bool openmp_enabled();
int max_threads();

namespace serial {
void pdf_grid(std::span<const Dyad> dyads, double theta, std::span<const double> q,
              std::span<double> out);
void invert_cdf(const CdfTable& table, std::span<const double> u, std::span<double> out);
void histogram(std::span<const double> x, double lo, double hi,
               std::span<std::uint64_t> counts);
void simulate_pulses(const PulsePlan& plan, std::uint64_t seed,
                     std::span<PulseRecord> out);
}  // namespace serial

namespace omp {
void pdf_grid(std::span<const Dyad> dyads, double theta, std::span<const double> q,
              std::span<double> out);
void invert_cdf(const CdfTable& table, std::span<const double> u, std::span<double> out);
void histogram(std::span<const double> x, double lo, double hi,
               std::span<std::uint64_t> counts);
void simulate_pulses(const PulsePlan& plan, std::uint64_t seed,
                     std::span<PulseRecord> out);
}  // namespace omp

namespace detail {
// Per-element bodies shared by both loop variants.
double pdf_point(std::span<const Dyad> dyads, double theta, double q);
std::size_t histogram_bin(double x, double lo, double hi, std::size_t bins);
PulseRecord simulate_pulse(const PulsePlan& plan, std::uint64_t seed, std::uint64_t index);
}  // namespace detail

}  // namespace kernels
}  // namespace catqkd
