#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace catqkd {

using Bit = std::uint8_t;

enum class Subset { key, decoy };

/// Homodyne local-oscillator setting used by Bob for one pulse.
enum class Setting { x_quadrature, p_quadrature };  // theta = 0, theta = pi/2

inline constexpr double kPi = 3.14159265358979323846;

inline double theta_of(Setting s) { return s == Setting::x_quadrature ? 0.0 : kPi / 2.0; }

struct PulseRecord {
  std::uint64_t index = 0;
  Subset subset = Subset::key;
  std::optional<Bit> alice_bit;  // key pulses only
  Setting setting = Setting::x_quadrature;
  double outcome = 0.0;
  bool kept_after_sift = false;
  std::optional<Bit> eve_guess;  // key pulses under attack only
};

/// Independent generator for pulse `index` of the session seeded with `seed`.
/// Serial and parallel pulse loops draw identical numbers for each pulse.
std::mt19937_64 pulse_stream(std::uint64_t seed, std::uint64_t index);

}  // namespace catqkd
