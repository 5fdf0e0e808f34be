#include <algorithm>
#include <cmath>

#include "catqkd/kernels.hpp"

namespace catqkd {

std::mt19937_64 pulse_stream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

double CdfTable::invert(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.begin()) return grid.front();
  if (it == cdf.end()) return grid.back();
  const auto k = static_cast<std::size_t>(it - cdf.begin());
  const double frac = (u - cdf[k - 1]) / (cdf[k] - cdf[k - 1]);
  return grid[k - 1] + frac * (grid[k] - grid[k - 1]);
}

namespace kernels {
namespace detail {

double pdf_point(std::span<const Dyad> dyads, double theta, double q) {
  Complex s{};
  for (const auto& d : dyads)
    s += d.coeff * quadrature_wavefunction(d.ket, theta, q) *
         std::conj(quadrature_wavefunction(d.bra, theta, q));
  return std::max(s.real(), 0.0);
}

std::size_t histogram_bin(double x, double lo, double hi, std::size_t bins) {
  if (!(x >= lo)) return 0;
  if (x >= hi) return bins - 1;
  const auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
  return std::min(k, bins - 1);
}

PulseRecord simulate_pulse(const PulsePlan& plan, std::uint64_t seed, std::uint64_t index) {
  auto rng = pulse_stream(seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PulseRecord r;
  r.index = index;
  r.subset = unit(rng) < plan.decoy_fraction ? Subset::decoy : Subset::key;

  std::size_t state = 2;
  if (r.subset == Subset::key) {
    r.alice_bit = static_cast<Bit>(unit(rng) < 0.5 ? 1 : 0);
    state = *r.alice_bit;
  }
  r.setting = unit(rng) < 0.5 ? Setting::x_quadrature : Setting::p_quadrature;
  const auto setting_index = r.setting == Setting::x_quadrature ? 0u : 1u;
  r.outcome = plan.tables[state][setting_index]->invert(unit(rng));
  r.kept_after_sift = (r.subset == Subset::key && r.setting == Setting::x_quadrature) ||
                      (r.subset == Subset::decoy && r.setting == Setting::p_quadrature);

  if (r.subset == Subset::key && plan.eve_error_rate) {
    const bool wrong = unit(rng) < *plan.eve_error_rate;
    r.eve_guess = static_cast<Bit>(*r.alice_bit ^ (wrong ? 1 : 0));
  }
  return r;
}

}  // namespace detail

namespace serial {

void pdf_grid(std::span<const Dyad> dyads, double theta, std::span<const double> q,
              std::span<double> out) {
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = detail::pdf_point(dyads, theta, q[i]);
}

void invert_cdf(const CdfTable& table, std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = table.invert(u[i]);
}

void histogram(std::span<const double> x, double lo, double hi, std::span<std::uint64_t> counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (double v : x) ++counts[detail::histogram_bin(v, lo, hi, counts.size())];
}

void simulate_pulses(const PulsePlan& plan, std::uint64_t seed, std::span<PulseRecord> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::simulate_pulse(plan, seed, i);
}

}  // namespace serial
}  // namespace kernels
}  // namespace catqkd
