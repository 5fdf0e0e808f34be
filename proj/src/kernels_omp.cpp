#include <algorithm>
#include <vector>

#include "catqkd/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace catqkd::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

void pdf_grid(std::span<const Dyad> dyads, double theta, std::span<const double> q,
              std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(q.size());
#pragma omp parallel for schedule(static) if (n > 512)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::pdf_point(dyads, theta, q[i]);
}

void invert_cdf(const CdfTable& table, std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = table.invert(u[i]);
}

void histogram(std::span<const double> x, double lo, double hi, std::span<std::uint64_t> counts) {
  std::fill(counts.begin(), counts.end(), 0);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::size_t bins = counts.size();
#pragma omp parallel if (n > 65536)
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) ++local[detail::histogram_bin(x[i], lo, hi, bins)];
#pragma omp critical(catqkd_histogram_merge)
    for (std::size_t k = 0; k < bins; ++k) counts[k] += local[k];
  }
}

void simulate_pulses(const PulsePlan& plan, std::uint64_t seed, std::span<PulseRecord> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (n > 1024)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = detail::simulate_pulse(plan, seed, static_cast<std::uint64_t>(i));
}

}  // namespace omp
}  // namespace catqkd::kernels
