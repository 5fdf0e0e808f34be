#include "catqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "catqkd/errors.hpp"
#include "catqkd/infotheory.hpp"
#include "catqkd/kernels.hpp"

namespace catqkd {
namespace {

void require_range(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

double info_from_qber(double q) { return 1.0 - binary_entropy(std::clamp(q, 0.0, 1.0)); }

// Range of 1 - H(q) over q in [lo, hi]; the function falls towards q = 1/2.
Interval info_band(double lo, double hi) {
  const double far = std::abs(lo - 0.5) > std::abs(hi - 0.5) ? lo : hi;
  const double lower = (lo <= 0.5 && hi >= 0.5) ? 0.0 : std::min(info_from_qber(lo), info_from_qber(hi));
  return {lower, info_from_qber(far)};
}

}  // namespace

void validate(const SessionConfig& c) {
  require_range(c.n_pulses >= 100, "n_pulses", "must be at least 100");
  require_range(std::isfinite(c.alpha) && c.alpha > 0.0, "alpha", "must be a positive real");
  require_range(c.decoy_fraction > 0.0 && c.decoy_fraction < 1.0, "decoy_fraction",
                "must lie in (0, 1)");
  require_range(c.channel_transmittance >= 0.0 && c.channel_transmittance <= 1.0,
                "channel_transmittance", "must lie in [0, 1]");
  require_range(c.detector_efficiency >= 0.0 && c.detector_efficiency <= 1.0,
                "detector_efficiency", "must lie in [0, 1]");
  if (c.attack_T)
    require_range(*c.attack_T >= 0.0 && *c.attack_T <= 1.0, "attack_T", "must lie in [0, 1]");
  require_range(c.qber_disclosure_fraction > 0.0 && c.qber_disclosure_fraction <= 1.0,
                "qber_disclosure_fraction", "must lie in (0, 1]");
}

double effective_transmittance(const SessionConfig& c) {
  return c.channel_transmittance * c.detector_efficiency * c.attack_T.value_or(1.0);
}

double min_alpha_threshold() { return kPi / (4.0 * std::sqrt(2.0 * std::log(2.0))); }

bool min_alpha_ok(double alpha) { return alpha > min_alpha_threshold(); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::secure_margin: return "secure_margin";
    case Verdict::insecure: return "insecure";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SiftResult sift(std::span<const PulseRecord> pulses) {
  SiftResult out;
  for (const auto& p : pulses) {
    if (p.subset == Subset::key && p.setting == Setting::x_quadrature) {
      out.alice_bits.push_back(p.alice_bit.value_or(0));
      out.bob_bits.push_back(threshold_decide(p.outcome));
      out.key_pulse_indices.push_back(p.index);
    } else if (p.subset == Subset::decoy && p.setting == Setting::p_quadrature) {
      out.decoy_outcomes.push_back(p.outcome);
    }
  }
  return out;
}

SecurityReport analyze_security(const std::optional<QberEstimate>& qber,
                                const std::optional<VisibilityEstimate>& visibility,
                                const SessionConfig& config) {
  SecurityReport r;
  if (!qber) r.flags.emplace_back("qber_undefined");
  if (!visibility) r.flags.emplace_back("visibility_undefined");

  if (qber) {
    r.i_ab_hat = info_from_qber(qber->value);
    r.i_ab_band = info_band(std::max(qber->value - 2.0 * qber->std_err, 0.0),
                            std::min(qber->value + 2.0 * qber->std_err, 1.0));
  } else {
    r.i_ab_band = {0.0, 1.0};
  }

  if (visibility) {
    const double loss = config.channel_transmittance * config.detector_efficiency;
    const double factor = std::exp(-2.0 * (1.0 - loss) * config.alpha * config.alpha);
    const double v = visibility->v_hat / factor;
    const double se = visibility->std_err / factor;
    r.v_corrected = std::clamp(v, 0.0, 1.0);
    r.i_ae_bound = leakage_vs_visibility(r.v_corrected);
    r.i_ae_band = {leakage_vs_visibility(std::clamp(v + 2.0 * se, 0.0, 1.0)),
                   leakage_vs_visibility(std::clamp(v - 2.0 * se, 0.0, 1.0))};
  } else {
    r.i_ae_bound = 1.0;
    r.i_ae_band = {0.0, 1.0};
  }

  r.margin = r.i_ab_hat - r.i_ae_bound;
  if (!qber || !visibility)
    r.verdict = Verdict::inconclusive;
  else if (r.i_ab_band.lo > r.i_ae_band.hi)
    r.verdict = Verdict::secure_margin;
  else if (r.i_ab_band.hi < r.i_ae_band.lo)
    r.verdict = Verdict::insecure;
  else
    r.verdict = Verdict::inconclusive;
  return r;
}

CoherentOperator channel_output(const CoherentOperator& prepared, const SessionConfig& config) {
  CoherentOperator op = prepared;
  if (config.attack_T) op = partial_trace(beamsplitter(op, *config.attack_T), Mode::a);
  return partial_trace(
      beamsplitter(op, config.channel_transmittance * config.detector_efficiency), Mode::a);
}

SessionTranscript run_session(const SessionConfig& config, Execution execution) {
  validate(config);

  SessionTranscript tr;
  tr.config = config;
  if (!min_alpha_ok(config.alpha))
    tr.warnings.emplace_back("alpha below the one-fringe threshold; visibility may be unresolvable");

  const Complex alpha{config.alpha, 0.0};
  const std::array<CoherentOperator, 3> prepared = {
      ket_to_operator(CoherentKet::coherent(alpha)),
      ket_to_operator(CoherentKet::coherent(-alpha)),
      ket_to_operator(make_cat(alpha, config.cat_parity)),
  };
  std::array<std::array<CdfTable, 2>, 3> tables;
  PulsePlan plan;
  plan.decoy_fraction = config.decoy_fraction;
  for (std::size_t s = 0; s < 3; ++s) {
    const auto received = channel_output(prepared[s], config);
    for (std::size_t k = 0; k < 2; ++k) {
      const Setting setting = k == 0 ? Setting::x_quadrature : Setting::p_quadrature;
      tables[s][k] = quadrature_cdf_table(received, {theta_of(setting)});
      plan.tables[s][k] = &tables[s][k];
    }
  }

  tr.eve_error_rate = 0.5;
  if (config.attack_T) {
    // Eve holds |-+sqrt(R) alpha> in the reflected mode.
    const double reflect = std::sqrt(1.0 - *config.attack_T);
    const double s = std::abs(overlap(-reflect * alpha, reflect * alpha));
    tr.eve_error_rate = helstrom_error(s);
    plan.eve_error_rate = tr.eve_error_rate;
  }

  tr.pulses.resize(config.n_pulses);
  if (execution == Execution::parallel)
    kernels::omp::simulate_pulses(plan, config.rng_seed, tr.pulses);
  else
    kernels::serial::simulate_pulses(plan, config.rng_seed, tr.pulses);

  auto sifted = sift(tr.pulses);
  tr.sifted_key_alice = std::move(sifted.alice_bits);
  tr.sifted_key_bob = std::move(sifted.bob_bits);

  const std::size_t n_sifted = tr.sifted_key_alice.size();
  if (n_sifted > 0) {
    const auto wanted = static_cast<std::size_t>(
        std::llround(config.qber_disclosure_fraction * static_cast<double>(n_sifted)));
    const std::size_t n_disclosed = std::clamp<std::size_t>(wanted, 1, n_sifted);
    std::vector<std::size_t> all(n_sifted);
    std::iota(all.begin(), all.end(), std::size_t{0});
    // Pulse index n_pulses is never used by a pulse, so its stream is free.
    auto rng = pulse_stream(config.rng_seed, config.n_pulses);
    std::sample(all.begin(), all.end(), std::back_inserter(tr.disclosed_positions), n_disclosed, rng);

    QberEstimate q;
    q.n_disclosed = n_disclosed;
    std::vector<bool> disclosed(n_sifted, false);
    for (std::size_t pos : tr.disclosed_positions) {
      disclosed[pos] = true;
      if (tr.sifted_key_alice[pos] != tr.sifted_key_bob[pos]) ++q.n_errors;
    }
    q.value = static_cast<double>(q.n_errors) / static_cast<double>(n_disclosed);
    q.std_err = std::sqrt(q.value * (1.0 - q.value) / static_cast<double>(n_disclosed));
    tr.qber = q;

    for (std::size_t i = 0; i < n_sifted; ++i) {
      if (disclosed[i]) continue;
      tr.final_key_alice.push_back(tr.sifted_key_alice[i]);
      tr.final_key_bob.push_back(tr.sifted_key_bob[i]);
    }
  }

  const double t_eff = effective_transmittance(config);
  std::vector<std::string> extra_flags;
  if (sifted.decoy_outcomes.size() < kMinVisibilitySamples) {
    extra_flags.emplace_back("too_few_decoy_samples");
  } else if (t_eff <= 0.0) {
    // Bob receives vacuum: no fringe exists at any frequency.
    VisibilityEstimate none;
    none.n_samples = sifted.decoy_outcomes.size();
    tr.visibility = none;
    extra_flags.emplace_back("fringe_unobservable");
  } else {
    const double mean_amp = std::sqrt(2.0) * config.alpha;
    const double fringe_freq = 2.0 * std::sqrt(t_eff) * mean_amp;
    const double reference = config.cat_parity == Parity::even ? 0.0 : kPi;
    tr.visibility = estimate_visibility(sifted.decoy_outcomes, fringe_freq, reference);
  }

  tr.report = analyze_security(tr.qber, tr.visibility, config);
  tr.report.flags.insert(tr.report.flags.end(), extra_flags.begin(), extra_flags.end());
  return tr;
}

}  // namespace catqkd
