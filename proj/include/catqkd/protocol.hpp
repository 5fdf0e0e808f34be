#pragma once

// Monte Carlo sessions of the three-state protocol: key pulses |+-alpha>,
// decoy cat states, an optional beamsplitter eavesdropper, channel loss and
// detector inefficiency, randomized homodyne detection, sifting, QBER and
// visibility estimation, and the I_AB > I_AE verdict.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catqkd/coherent.hpp"
#include "catqkd/measurement.hpp"
#include "catqkd/pulse.hpp"

namespace catqkd {

struct SessionConfig {
  std::uint64_t n_pulses = 0;
  double alpha = 0.0;
  double decoy_fraction = 0.5;
  Parity cat_parity = Parity::even;
  double channel_transmittance = 1.0;  // epsilon
  double detector_efficiency = 1.0;    // eta
  std::optional<double> attack_T;      // absent: no eavesdropper
  double qber_disclosure_fraction = 0.1;
  std::uint64_t rng_seed = 0;
};

/// Throws ConfigError naming the first field out of range.
void validate(const SessionConfig& config);

/// epsilon * eta * T, with T = 1 when there is no eavesdropper.
double effective_transmittance(const SessionConfig& config);

/// Smallest amplitude that still shows one full fringe inside the Gaussian
/// envelope: pi / (4 sqrt(2 ln 2)).
double min_alpha_threshold();
bool min_alpha_ok(double alpha);

struct QberEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n_disclosed = 0;
  std::size_t n_errors = 0;
};

enum class Verdict { secure_margin, insecure, inconclusive };

const char* to_string(Verdict v);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SecurityReport {
  double i_ab_hat = 0.0;
  double i_ae_bound = 1.0;
  double margin = -1.0;
  Verdict verdict = Verdict::inconclusive;
  Interval i_ab_band;  // two-standard-error bands
  Interval i_ae_band;
  double v_corrected = 0.0;
  std::vector<std::string> flags;
};

struct SiftResult {
  std::vector<Bit> alice_bits;
  std::vector<Bit> bob_bits;
  std::vector<std::uint64_t> key_pulse_indices;
  std::vector<double> decoy_outcomes;
};

struct SessionTranscript {
  SessionConfig config;
  std::vector<PulseRecord> pulses;
  std::vector<Bit> sifted_key_alice;
  std::vector<Bit> sifted_key_bob;
  std::vector<std::size_t> disclosed_positions;  // indices into the sifted key
  std::vector<Bit> final_key_alice;
  std::vector<Bit> final_key_bob;
  std::optional<QberEstimate> qber;
  std::optional<VisibilityEstimate> visibility;
  double eve_error_rate = 0.0;  // analytic Helstrom rate; 0.5 without attack
  SecurityReport report;
  std::vector<std::string> warnings;
};

/// Key pulses measured at theta = 0 become bit pairs (Bob thresholds at 0);
/// decoy pulses measured at theta = pi/2 are kept for the fringe; the rest
/// is discarded.
SiftResult sift(std::span<const PulseRecord> pulses);

/// Verdict from the disclosed QBER and the decoy visibility.
///
/// The visibility is corrected for the known loss, v / exp(-2 (1 - eps eta) |alpha|^2),
/// clamped to [0, 1], so every remaining loss of coherence is charged to Eve.
/// Missing estimates give an inconclusive report with a flag.
SecurityReport analyze_security(const std::optional<QberEstimate>& qber,
                                const std::optional<VisibilityEstimate>& visibility,
                                const SessionConfig& config);

enum class Execution { parallel, serial };

/// Deterministic in `config.rng_seed`; both execution modes produce the same
/// transcript. Throws ConfigError for an invalid configuration.
SessionTranscript run_session(const SessionConfig& config,
                              Execution execution = Execution::parallel);

/// Bob's marginal state for the given prepared state after the attack
/// splitter (if any) and the loss splitter epsilon * eta.
CoherentOperator channel_output(const CoherentOperator& prepared, const SessionConfig& config);

}  // namespace catqkd
