#pragma once

// JSON session configs, JSON transcript summaries and the per-pulse CSV.

#include <iosfwd>

#include "json.hpp"

#include "catqkd/protocol.hpp"

namespace catqkd {

/// Reads a config object. Only the SessionConfig field names are accepted;
/// n_pulses and alpha are required, everything else has a default.
/// Throws ConfigError naming the offending field.
SessionConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SessionConfig& config);

nlohmann::json transcript_to_json(const SessionTranscript& transcript);

inline constexpr const char* kPulsesCsvHeader = "index,subset,alice_bit,theta,outcome,kept,bob_bit";

/// One row per pulse; theta printed as 0 or pi/2, absent bits left empty.
void write_pulses_csv(std::ostream& out, const SessionTranscript& transcript);

}  // namespace catqkd
