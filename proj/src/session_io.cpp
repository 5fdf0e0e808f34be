#include "catqkd/session_io.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>

#include "catqkd/csv.hpp"
#include "catqkd/errors.hpp"

namespace catqkd {
namespace {

constexpr std::array<const char*, 9> kFields = {
    "n_pulses",           "alpha",       "decoy_fraction", "cat_parity",
    "channel_transmittance", "detector_efficiency", "attack_T", "qber_disclosure_fraction",
    "rng_seed"};

double read_number(const nlohmann::json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_number()) throw ConfigError(field, "must be a number");
  return v.get<double>();
}

std::uint64_t read_count(const nlohmann::json& j, const char* field) {
  const auto& v = j.at(field);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(field, "must be non-negative");
  throw ConfigError(field, "must be an integer");
}

std::string bit_string(const std::vector<Bit>& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

}  // namespace

SessionConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(kFields.begin(), kFields.end(), [&](const char* f) { return key == f; }) ==
        kFields.end())
      throw ConfigError(key, "unknown field");
  }
  for (const char* required : {"n_pulses", "alpha"})
    if (!j.contains(required)) throw ConfigError(required, "missing required field");

  SessionConfig c;
  c.n_pulses = read_count(j, "n_pulses");
  c.alpha = read_number(j, "alpha");
  if (j.contains("decoy_fraction")) c.decoy_fraction = read_number(j, "decoy_fraction");
  if (j.contains("cat_parity")) {
    const auto& p = j.at("cat_parity");
    if (p == "even")
      c.cat_parity = Parity::even;
    else if (p == "odd")
      c.cat_parity = Parity::odd;
    else
      throw ConfigError("cat_parity", "must be \"even\" or \"odd\"");
  }
  if (j.contains("channel_transmittance"))
    c.channel_transmittance = read_number(j, "channel_transmittance");
  if (j.contains("detector_efficiency"))
    c.detector_efficiency = read_number(j, "detector_efficiency");
  if (j.contains("attack_T") && !j.at("attack_T").is_null()) c.attack_T = read_number(j, "attack_T");
  if (j.contains("qber_disclosure_fraction"))
    c.qber_disclosure_fraction = read_number(j, "qber_disclosure_fraction");
  if (j.contains("rng_seed")) c.rng_seed = read_count(j, "rng_seed");

  validate(c);
  return c;
}

nlohmann::json config_to_json(const SessionConfig& c) {
  nlohmann::json j;
  j["n_pulses"] = c.n_pulses;
  j["alpha"] = c.alpha;
  j["decoy_fraction"] = c.decoy_fraction;
  j["cat_parity"] = c.cat_parity == Parity::even ? "even" : "odd";
  j["channel_transmittance"] = c.channel_transmittance;
  j["detector_efficiency"] = c.detector_efficiency;
  j["attack_T"] = c.attack_T ? nlohmann::json(*c.attack_T) : nlohmann::json(nullptr);
  j["qber_disclosure_fraction"] = c.qber_disclosure_fraction;
  j["rng_seed"] = c.rng_seed;
  return j;
}

nlohmann::json transcript_to_json(const SessionTranscript& tr) {
  std::size_t key = 0;
  for (const auto& p : tr.pulses) key += p.subset == Subset::key ? 1 : 0;
  const auto sifted = sift(tr.pulses);

  nlohmann::json j;
  j["config"] = config_to_json(tr.config);
  j["effective_transmittance"] = effective_transmittance(tr.config);
  j["counts"] = {{"pulses", tr.pulses.size()},
                 {"key", key},
                 {"decoy", tr.pulses.size() - key},
                 {"sifted", tr.sifted_key_alice.size()},
                 {"disclosed", tr.disclosed_positions.size()},
                 {"final_key", tr.final_key_alice.size()},
                 {"kept_decoy", sifted.decoy_outcomes.size()}};
  if (tr.qber) {
    j["qber"] = {{"value", tr.qber->value},
                 {"std_err", tr.qber->std_err},
                 {"n_disclosed", tr.qber->n_disclosed},
                 {"n_errors", tr.qber->n_errors}};
  } else {
    j["qber"] = nullptr;
  }
  if (tr.visibility) {
    j["visibility"] = {{"v_hat", tr.visibility->v_hat},
                       {"std_err", tr.visibility->std_err},
                       {"n_samples", tr.visibility->n_samples},
                       {"fringe_freq", tr.visibility->fringe_freq},
                       {"phase", tr.visibility->phase}};
  } else {
    j["visibility"] = nullptr;
  }
  j["eve_error_rate"] = tr.eve_error_rate;
  const auto& r = tr.report;
  j["report"] = {{"i_ab_hat", r.i_ab_hat},
                 {"i_ae_bound", r.i_ae_bound},
                 {"margin", r.margin},
                 {"verdict", to_string(r.verdict)},
                 {"i_ab_band", {r.i_ab_band.lo, r.i_ab_band.hi}},
                 {"i_ae_band", {r.i_ae_band.lo, r.i_ae_band.hi}},
                 {"v_corrected", r.v_corrected},
                 {"flags", r.flags}};
  j["warnings"] = tr.warnings;
  j["final_key_alice"] = bit_string(tr.final_key_alice);
  j["final_key_bob"] = bit_string(tr.final_key_bob);
  return j;
}

void write_pulses_csv(std::ostream& out, const SessionTranscript& tr) {
  out << kPulsesCsvHeader << '\n';
  for (const auto& p : tr.pulses) {
    out << p.index << ',' << (p.subset == Subset::key ? "key" : "decoy") << ',';
    if (p.alice_bit) out << static_cast<int>(*p.alice_bit);
    out << ',' << (p.setting == Setting::x_quadrature ? "0" : "pi/2") << ','
        << csv::format_double(p.outcome) << ',' << (p.kept_after_sift ? 1 : 0) << ',';
    if (p.subset == Subset::key && p.kept_after_sift)
      out << static_cast<int>(threshold_decide(p.outcome));
    out << '\n';
  }
}

}  // namespace catqkd
