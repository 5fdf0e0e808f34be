// Wall-clock comparison of the serial reference kernels against the OpenMP
// versions. Usage: catqkd_bench [n_pulses] [repeats]

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "catqkd/coherent.hpp"
#include "catqkd/kernels.hpp"
#include "catqkd/measurement.hpp"
#include "catqkd/protocol.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    body();
    const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const std::string& name, double serial_ms, double omp_ms) {
  std::cout << std::left << std::setw(18) << name << std::right << std::fixed
            << std::setprecision(2) << std::setw(12) << serial_ms << std::setw(12) << omp_ms
            << std::setw(10) << serial_ms / omp_ms << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace catqkd;
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1'000'000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  std::cout << "openmp=" << (kernels::openmp_enabled() ? "on" : "off")
            << " threads=" << kernels::max_threads() << " n=" << n << " repeats=" << repeats
            << '\n';
  std::cout << std::left << std::setw(18) << "kernel" << std::right << std::setw(12)
            << "serial_ms" << std::setw(12) << "omp_ms" << std::setw(10) << "speedup" << '\n';

  const auto cat = ket_to_operator(make_cat(Complex{1.0, 0.0}, Parity::even));
  const auto dyads = cat.dyads();
  std::vector<double> q(n / 10 + 2);
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(q.size() - 1);
  std::vector<double> pdf(q.size());
  report("pdf_grid",
         best_of(repeats, [&] { kernels::serial::pdf_grid(dyads, kPi / 2, q, pdf); }),
         best_of(repeats, [&] { kernels::omp::pdf_grid(dyads, kPi / 2, q, pdf); }));

  const auto table = quadrature_cdf_table(cat, {kPi / 2});
  std::vector<double> u(n);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& x : u) x = unif(rng);
  std::vector<double> samples(n);
  report("invert_cdf",
         best_of(repeats, [&] { kernels::serial::invert_cdf(table, u, samples); }),
         best_of(repeats, [&] { kernels::omp::invert_cdf(table, u, samples); }));

  std::vector<std::uint64_t> counts(kVisibilityBins);
  report("histogram", best_of(repeats, [&] {
           std::fill(counts.begin(), counts.end(), 0);
           kernels::serial::histogram(samples, -kVisibilityRange, kVisibilityRange, counts);
         }),
         best_of(repeats, [&] {
           std::fill(counts.begin(), counts.end(), 0);
           kernels::omp::histogram(samples, -kVisibilityRange, kVisibilityRange, counts);
         }));

  SessionConfig config;
  config.n_pulses = n;
  config.alpha = 1.0;
  config.attack_T = 0.8;
  report("run_session",
         best_of(repeats, [&] { (void)run_session(config, Execution::serial); }),
         best_of(repeats, [&] { (void)run_session(config, Execution::parallel); }));
  return 0;
}
