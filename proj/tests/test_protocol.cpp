#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "catqkd/errors.hpp"
#include "catqkd/infotheory.hpp"
#include "catqkd/protocol.hpp"
#include "catqkd/session_io.hpp"
#include "oracles.hpp"

using namespace catqkd;

namespace {

SessionConfig base(std::uint64_t n = 100000) {
  SessionConfig c;
  c.n_pulses = n;
  c.alpha = 1.0;
  return c;
}

std::string field_of(const SessionConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::string pulses_csv(const SessionTranscript& tr) {
  std::ostringstream os;
  write_pulses_csv(os, tr);
  return os.str();
}

double expected_qber(const SessionConfig& c) {
  return oracle::gaussian_tail(std::sqrt(2.0 * effective_transmittance(c)) * c.alpha);
}

double expected_visibility(const SessionConfig& c) {
  return std::exp(-2.0 * (1.0 - effective_transmittance(c)) * c.alpha * c.alpha);
}

double sifted_error_rate(const SessionTranscript& tr) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < tr.sifted_key_alice.size(); ++i) e += tr.sifted_key_alice[i] != tr.sifted_key_bob[i];
  return static_cast<double>(e) / static_cast<double>(tr.sifted_key_alice.size());
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  auto c = base();
  CHECK(field_of(c) == "");
  c.n_pulses = 99;
  CHECK(field_of(c) == "n_pulses");
  c = base(); c.alpha = 0.0;
  CHECK(field_of(c) == "alpha");
  c = base(); c.alpha = NAN;
  CHECK(field_of(c) == "alpha");
  c = base(); c.decoy_fraction = 1.0;
  CHECK(field_of(c) == "decoy_fraction");
  c = base(); c.decoy_fraction = 0.0;
  CHECK(field_of(c) == "decoy_fraction");
  c = base(); c.channel_transmittance = 1.5;
  CHECK(field_of(c) == "channel_transmittance");
  c = base(); c.detector_efficiency = -0.1;
  CHECK(field_of(c) == "detector_efficiency");
  c = base(); c.attack_T = 1.2;
  CHECK(field_of(c) == "attack_T");
  c = base(); c.qber_disclosure_fraction = 0.0;
  CHECK(field_of(c) == "qber_disclosure_fraction");
  c = base(); c.qber_disclosure_fraction = 1.0;
  CHECK(field_of(c) == "");
  CHECK_THROWS_AS(run_session(SessionConfig{}), ConfigError);
}

TEST_CASE("effective transmittance") {
  auto c = base();
  CHECK(effective_transmittance(c) == 1.0);
  c.channel_transmittance = 0.5;
  c.attack_T = 1.0;
  CHECK(effective_transmittance(c) == 0.5);
  c.channel_transmittance = 0.9;
  c.detector_efficiency = 0.8;
  c.attack_T = 0.5;
  CHECK(effective_transmittance(c) == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("minimum amplitude for one visible fringe") {
  CHECK(min_alpha_threshold() == doctest::Approx(kPi / (4.0 * std::sqrt(2.0 * std::log(2.0)))).epsilon(1e-15));
  CHECK(std::abs(min_alpha_threshold() - 0.667055782079625) < 1e-12);
  CHECK(min_alpha_ok(0.67));
  CHECK(min_alpha_ok(1.0));
  CHECK_FALSE(min_alpha_ok(0.3));
  CHECK_FALSE(min_alpha_ok(min_alpha_threshold()));
}

TEST_CASE("sifting keeps key pulses measured in x and decoys measured in p") {
  std::vector<PulseRecord> p(4);
  p[0] = {0, Subset::key, Bit{0}, Setting::p_quadrature, 1.0, false, std::nullopt};
  p[1] = {1, Subset::decoy, std::nullopt, Setting::p_quadrature, 0.3, true, std::nullopt};
  p[2] = {2, Subset::key, Bit{1}, Setting::x_quadrature, -0.4, true, std::nullopt};
  p[3] = {3, Subset::decoy, std::nullopt, Setting::x_quadrature, 0.9, false, std::nullopt};
  const auto s = sift(p);
  CHECK(s.alice_bits == std::vector<Bit>{1});
  CHECK(s.bob_bits == std::vector<Bit>{1});
  CHECK(s.key_pulse_indices == std::vector<std::uint64_t>{2});
  CHECK(s.decoy_outcomes == std::vector<double>{0.3});
}

TEST_CASE("security analysis examples") {
  const auto c = base();
  const QberEstimate low{0.0228, 0.003, 2500, 57};
  VisibilityEstimate full;
  full.v_hat = 1.0;
  full.std_err = 0.01;
  auto r = analyze_security(low, full, c);
  CHECK(r.verdict == Verdict::secure_margin);
  CHECK(r.i_ae_bound == 0.0);
  CHECK(r.margin == doctest::Approx(1.0 - oracle::entropy2(0.0228)).epsilon(1e-12));
  CHECK(std::abs(r.margin - 0.844) < 1e-3);

  const QberEstimate half{0.5, 0.01, 2500, 1250};
  VisibilityEstimate kappa;
  kappa.v_hat = std::exp(-2.0);
  kappa.std_err = 0.01;
  r = analyze_security(half, kappa, c);
  CHECK(r.margin < 0.0);
  CHECK(r.verdict == Verdict::insecure);

  const QberEstimate noisy{0.1, 0.05, 40, 4};
  VisibilityEstimate vague;
  vague.v_hat = 0.6;
  vague.std_err = 0.2;
  r = analyze_security(noisy, vague, c);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(r.i_ab_band.lo <= r.i_ab_hat);
  CHECK(r.i_ab_hat <= r.i_ab_band.hi);
  CHECK(r.i_ae_band.lo <= r.i_ae_bound);
  CHECK(r.i_ae_bound <= r.i_ae_band.hi);

  r = analyze_security(low, std::nullopt, c);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(std::find(r.flags.begin(), r.flags.end(), "visibility_undefined") != r.flags.end());
}

TEST_CASE("loss correction divides out the known channel") {
  auto c = base();
  c.channel_transmittance = 0.5;
  VisibilityEstimate v;
  v.v_hat = std::exp(-1.0);
  v.std_err = 0.01;
  const auto r = analyze_security(QberEstimate{0.05, 0.004, 2500, 125}, v, c);
  CHECK(r.v_corrected == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.i_ae_bound == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("honest session is secure") {
  const auto tr = run_session(base());
  REQUIRE(tr.qber);
  REQUIRE(tr.visibility);
  const double p = expected_qber(tr.config);
  CHECK(std::abs(p - 0.0227501319481792) < 1e-12);
  CHECK(std::abs(tr.qber->value - p) < 5.0 * std::sqrt(p * (1 - p) / tr.qber->n_disclosed));
  CHECK(std::abs(tr.visibility->v_hat - 1.0) < 0.02);
  CHECK(tr.report.verdict == Verdict::secure_margin);
  CHECK(tr.warnings.empty());
  CHECK(tr.sifted_key_alice.size() == tr.sifted_key_bob.size());
  CHECK(tr.final_key_alice.size() + tr.disclosed_positions.size() == tr.sifted_key_alice.size());
}

TEST_CASE("full interception leaves Bob with vacuum") {
  auto c = base();
  c.attack_T = 0.0;
  const auto tr = run_session(c);
  REQUIRE(tr.qber);
  CHECK(std::abs(tr.qber->value - 0.5) < 5.0 * std::sqrt(0.25 / tr.qber->n_disclosed));
  CHECK(tr.eve_error_rate == doctest::Approx(helstrom_error(std::exp(-2.0))).epsilon(1e-14));
  CHECK(tr.report.verdict == Verdict::insecure);
  CHECK(std::find(tr.report.flags.begin(), tr.report.flags.end(), "fringe_unobservable") != tr.report.flags.end());
}

TEST_CASE("sessions replay bit for bit and do not depend on the execution mode") {
  auto c = base(20000);
  c.attack_T = 0.7;
  c.rng_seed = 99;
  const auto a = run_session(c);
  const auto b = run_session(c);
  const auto s = run_session(c, Execution::serial);
  CHECK(transcript_to_json(a).dump() == transcript_to_json(b).dump());
  CHECK(transcript_to_json(a).dump() == transcript_to_json(s).dump());
  CHECK(pulses_csv(a) == pulses_csv(b));
  CHECK(pulses_csv(a) == pulses_csv(s));
  c.rng_seed = 100;
  CHECK(pulses_csv(run_session(c)) != pulses_csv(a));
}

TEST_CASE("pulse records satisfy the sifting invariant") {
  auto c = base(5000);
  c.attack_T = 0.9;
  const auto tr = run_session(c);
  for (const auto& p : tr.pulses) {
    CHECK(p.kept_after_sift == ((p.subset == Subset::key) == (p.setting == Setting::x_quadrature)));
    CHECK(p.alice_bit.has_value() == (p.subset == Subset::key));
    CHECK(p.eve_guess.has_value() == (p.subset == Subset::key));
  }
}

TEST_CASE("simulated statistics agree with the closed forms") {
  struct Case {
    double alpha, eps, eta;
    std::optional<double> t;
  };
  const std::vector<Case> grid = {{1.0, 1.0, 1.0, std::nullopt}, {1.0, 1.0, 1.0, 0.8}, {1.5, 0.7, 0.9, 0.9},
                                  {0.8, 0.5, 1.0, std::nullopt}, {1.2, 1.0, 0.6, 0.5}};
  std::uint64_t seed = 500;
  for (const auto& g : grid) {
    auto c = base(200000);
    c.alpha = g.alpha;
    c.channel_transmittance = g.eps;
    c.detector_efficiency = g.eta;
    c.attack_T = g.t;
    c.rng_seed = seed++;
    const auto tr = run_session(c);
    CAPTURE(g.alpha);
    CAPTURE(g.eps * g.eta * g.t.value_or(1.0));
    REQUIRE(tr.visibility);

    const double p = expected_qber(c);
    const double n = static_cast<double>(tr.sifted_key_alice.size());
    CHECK(std::abs(sifted_error_rate(tr) - p) < 5.0 * std::sqrt(p * (1 - p) / n));
    CHECK(std::abs(tr.qber->value - p) < 5.0 * std::sqrt(p * (1 - p) / tr.qber->n_disclosed));

    const double v = expected_visibility(c);
    CHECK(std::abs(tr.visibility->v_hat - v) < 5.0 * tr.visibility->std_err);
    const double loss = g.eps * g.eta;
    CHECK(tr.visibility->v_hat <= std::exp(-2.0 * (1.0 - loss) * g.alpha * g.alpha) + 3.0 * tr.visibility->std_err);

    const double d = c.decoy_fraction;
    const double ps = (1.0 - d) / 2.0;
    CHECK(std::abs(n - c.n_pulses * ps) < 5.0 * std::sqrt(c.n_pulses * ps * (1.0 - ps)));

    if (g.t) {
      const double vb = std::exp(-2.0 * (1.0 - *g.t) * g.alpha * g.alpha);
      const double de = 1.0 - 2.0 * tr.eve_error_rate;
      CHECK(std::abs(de * de + vb * vb - 1.0) < 1e-12);
      CHECK(std::abs(tr.eve_error_rate - helstrom_error(vb)) < 1e-15);
      std::size_t wrong = 0, trials = 0;
      for (const auto& pr : tr.pulses) {
        if (!pr.eve_guess) continue;
        ++trials;
        wrong += *pr.eve_guess != *pr.alice_bit;
      }
      const double q = tr.eve_error_rate;
      CHECK(std::abs(static_cast<double>(wrong) / trials - q) < 5.0 * std::sqrt(q * (1 - q) / trials));
    } else {
      CHECK(tr.eve_error_rate == 0.5);
    }
  }
}

TEST_CASE("odd cats are detected with the opposite reference phase") {
  auto c = base();
  c.cat_parity = Parity::odd;
  c.attack_T = 0.8;
  const auto tr = run_session(c);
  REQUIRE(tr.visibility);
  CHECK(std::abs(tr.visibility->v_hat - std::exp(-0.4)) < 5.0 * tr.visibility->std_err);
}

TEST_CASE("too few decoys yields an inconclusive flagged report") {
  auto c = base(1000);
  c.decoy_fraction = 0.01;
  const auto tr = run_session(c);
  CHECK_FALSE(tr.visibility);
  CHECK(tr.report.verdict == Verdict::inconclusive);
  CHECK(std::find(tr.report.flags.begin(), tr.report.flags.end(), "too_few_decoy_samples") != tr.report.flags.end());
}

TEST_CASE("small amplitudes warn but still run") {
  auto c = base(2000);
  c.alpha = 0.5;
  const auto tr = run_session(c);
  CHECK(tr.warnings.size() == 1);
  CHECK(tr.pulses.size() == 2000);
}
