#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "catqkd/coherent.hpp"
#include "catqkd/csv.hpp"
#include "catqkd/errors.hpp"
#include "catqkd/infotheory.hpp"
#include "catqkd/measurement.hpp"
#include "catqkd/protocol.hpp"
#include "catqkd/session_io.hpp"

namespace catqkd::cli {
namespace {

namespace fs = std::filesystem;
using csv::format_double;

CoherentOperator build_state(const StateDescriptor& desc) {
  const Complex a{desc.alpha, 0.0};
  CoherentOperator op = [&] {
    if (desc.state == "vacuum") return ket_to_operator(CoherentKet::coherent(0.0));
    if (desc.state == "coherent") return ket_to_operator(CoherentKet::coherent(a));
    if (desc.state == "cat-even") return ket_to_operator(make_cat(a, Parity::even));
    if (desc.state == "cat-odd") return ket_to_operator(make_cat(a, Parity::odd));
    throw ParameterError("unknown state '" + desc.state + "'");
  }();
  if (desc.attack_T) op = partial_trace(beamsplitter(op, *desc.attack_T), Mode::a);
  if (desc.transmittance != 1.0) op = partial_trace(beamsplitter(op, desc.transmittance), Mode::a);
  return op;
}

void write_fig1(std::size_t n, std::ostream& out) {
  out << "qeb,qee,iab,iae,sum,gb,ge\n";
  for (const auto& pt : tradeoff_fig1(n)) {
    const auto& m = pt.metrics;
    out << format_double(m.q_e_bob) << ',' << format_double(m.q_e_eve) << ','
        << format_double(m.i_ab) << ',' << format_double(m.i_ae) << ',' << format_double(pt.sum)
        << ',' << format_double(m.g_bob) << ',' << format_double(m.g_eve) << '\n';
  }
}

void write_fig4(std::size_t n, const std::vector<double>& mean_photons, std::ostream& out) {
  if (n < 2) throw ParameterError("fig4 needs at least two points");
  out << "vb,iae";
  for (double m : mean_photons) out << ",iab_n" << format_double(m);
  out << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const double vb = static_cast<double>(k) / static_cast<double>(n - 1);
    out << format_double(vb) << ',' << format_double(leakage_vs_visibility(vb));
    for (double m : mean_photons) {
      out << ',';
      if (vb >= std::exp(-2.0 * m)) out << format_double(bob_info_vs_visibility(vb, m));
    }
    out << '\n';
  }
}

void write_pdf_dump(const CurveRequest& req, std::ostream& out) {
  const auto op = build_state(req.state);
  auto grid = standard_grid(op, req.n_points.value_or(kDefaultGridPoints));
  if (req.q_min) grid.lo = *req.q_min;
  if (req.q_max) grid.hi = *req.q_max;
  if (!(grid.hi > grid.lo)) throw ParameterError("q range must be increasing");
  const auto pdf = quadrature_pdf_on_grid(op, req.theta, grid);
  out << "q,pdf\n";
  for (std::size_t i = 0; i < pdf.size(); ++i)
    out << format_double(grid.node(i)) << ',' << format_double(pdf[i]) << '\n';
}

void write_wcp_gram(const CurveRequest& req, std::ostream& out) {
  std::ofstream matrix;
  if (req.matrix_out) {
    matrix.open(*req.matrix_out);
    if (!matrix) throw std::ios_base::failure("cannot write " + req.matrix_out->string());
    matrix << "alpha,i,j,re,im\n";
  }
  out << "alpha,min_eigenvalue,determinant\n";
  for (double alpha : req.alphas) {
    const auto states = wcp_states(alpha);
    const auto gram = gram_matrix(std::span<const TwoModeCoherentKet>(states));
    const auto ev = gram_eigenvalues(gram);
    double det = 1.0;
    for (double e : ev) det *= e;
    out << format_double(alpha) << ',' << format_double(ev.front()) << ',' << format_double(det)
        << '\n';
    if (matrix.is_open())
      for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
          matrix << format_double(alpha) << ',' << i << ',' << j << ','
                 << format_double(gram(i, j).real()) << ',' << format_double(gram(i, j).imag())
                 << '\n';
  }
}

// Buffers output so a failed computation never leaves a partial file behind.
template <class Writer>
int write_file(const fs::path& path, std::ostream& err, Writer&& writer) {
  std::ostringstream buffer;
  try {
    writer(buffer);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << path.string() << '\n';
    return kIoError;
  }
  file << buffer.str();
  file.flush();
  if (!file) {
    err << "error: failed writing " << path.string() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace

double parse_theta(const std::string& text) {
  if (text == "pi/2") return kPi / 2.0;
  if (text == "pi") return kPi;
  return csv::parse_double(text);
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  SessionConfig config;
  try {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("<file>", "cannot read " + opts.config_path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    config = config_from_json(j);
    if (opts.seed) config.rng_seed = *opts.seed;
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kConfigError;
  }

  const auto transcript = run_session(config);

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << opts.out_dir.string() << ": " << ec.message() << '\n';
    return kIoError;
  }
  const int rc = write_file(opts.out_dir / "transcript.json", err, [&](std::ostream& o) {
    o << transcript_to_json(transcript).dump(2) << '\n';
  });
  if (rc != kOk) return rc;
  if (opts.pulses_csv) {
    const int rc2 = write_file(opts.out_dir / "pulses.csv", err,
                               [&](std::ostream& o) { write_pulses_csv(o, transcript); });
    if (rc2 != kOk) return rc2;
  }

  for (const auto& w : transcript.warnings) err << "warning: " << w << '\n';
  const auto& r = transcript.report;
  out << "verdict=" << to_string(r.verdict)
      << " qber=" << (transcript.qber ? format_double(transcript.qber->value) : "n/a")
      << " v_hat=" << (transcript.visibility ? format_double(transcript.visibility->v_hat) : "n/a")
      << " i_ab=" << format_double(r.i_ab_hat) << " i_ae=" << format_double(r.i_ae_bound)
      << " margin=" << format_double(r.margin) << '\n';

  if (opts.strict && r.verdict == Verdict::inconclusive) return kStrictInconclusive;
  return kOk;
}

void write_curve(const CurveRequest& req, std::ostream& out) {
  switch (req.kind) {
    case CurveKind::fig1: write_fig1(req.n_points.value_or(512), out); break;
    case CurveKind::fig4: write_fig4(req.n_points.value_or(512), req.mean_photons, out); break;
    case CurveKind::pdf_dump: write_pdf_dump(req, out); break;
    case CurveKind::wcp_gram: write_wcp_gram(req, out); break;
  }
}

int cmd_curves(const CurveRequest& req, const fs::path& out_path, std::ostream& err) {
  return write_file(out_path, err, [&](std::ostream& o) { write_curve(req, o); });
}

int cmd_sample(const SampleRequest& req, const fs::path& out_path, std::ostream& err) {
  return write_file(out_path, err, [&](std::ostream& o) {
    const auto samples = sample_quadrature(build_state(req.state), {req.theta}, req.n, req.seed);
    o << "q\n";
    for (double x : samples) o << format_double(x) << '\n';
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Coherent-state BB84 simulator with cat-state eavesdropping detection"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run one protocol session from a JSON config");
  simulate->add_option("--config", sim.config_path, "Session config (JSON)")->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "Override rng_seed");
  simulate->add_flag("--pulses-csv", sim.pulses_csv, "Also write pulses.csv");
  simulate->add_flag("--strict", sim.strict, "Exit 3 when the verdict is inconclusive");

  CurveRequest curve;
  std::string kind;
  std::string curve_theta = "0";
  std::size_t n_points = 0;
  double attack_t = 0.0;
  fs::path curve_out;
  auto* curves = app.add_subcommand("curves", "Write trade-off curves and distributions as CSV");
  curves->add_option("--kind", kind, "Curve to emit")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig4", "pdf-dump", "wcp-gram"}));
  auto* points_opt = curves->add_option("--points", n_points, "Number of grid points")
                         ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  curves->add_option("--mean-photon", curve.mean_photons, "fig4: mean photon numbers")
      ->delimiter(',');
  curves->add_option("--state", curve.state.state, "pdf-dump: vacuum|coherent|cat-even|cat-odd");
  curves->add_option("--alpha", curve.state.alpha, "pdf-dump: coherent amplitude");
  curves->add_option("--theta", curve_theta, "pdf-dump: LO phase (0, pi/2 or radians)");
  auto* curve_attack = curves->add_option("--attack-T", attack_t, "pdf-dump: attack splitter T");
  curves->add_option("--transmittance", curve.state.transmittance,
                     "pdf-dump: channel times detector efficiency");
  curves->add_option("--q-min", curve.q_min, "pdf-dump: lower grid edge");
  curves->add_option("--q-max", curve.q_max, "pdf-dump: upper grid edge");
  curves->add_option("--alphas", curve.alphas, "wcp-gram: amplitudes")->delimiter(',');
  curves->add_option("--matrix-out", curve.matrix_out, "wcp-gram: full Gram matrices as CSV");
  curves->add_option("--out", curve_out, "Output CSV path")->required();

  SampleRequest sample;
  std::string sample_theta = "0";
  double sample_attack = 0.0;
  fs::path sample_out;
  auto* sampler = app.add_subcommand("sample", "Draw homodyne outcomes as single-column CSV");
  sampler->add_option("--state", sample.state.state, "vacuum|coherent|cat-even|cat-odd");
  sampler->add_option("--alpha", sample.state.alpha, "Coherent amplitude");
  sampler->add_option("--theta", sample_theta, "LO phase (0, pi/2 or radians)");
  auto* sample_attack_opt = sampler->add_option("--attack-T", sample_attack, "Attack splitter T");
  sampler->add_option("--transmittance", sample.state.transmittance, "Channel times efficiency");
  sampler->add_option("--n", sample.n, "Number of samples");
  sampler->add_option("--seed", sample.seed, "Generator seed");
  sampler->add_option("--out", sample_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = seed;
      return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*curves) {
      if (kind == "fig1") curve.kind = CurveKind::fig1;
      if (kind == "fig4") curve.kind = CurveKind::fig4;
      if (kind == "pdf-dump") curve.kind = CurveKind::pdf_dump;
      if (kind == "wcp-gram") curve.kind = CurveKind::wcp_gram;
      if (*points_opt) curve.n_points = n_points;
      if (*curve_attack) curve.state.attack_T = attack_t;
      curve.theta = parse_theta(curve_theta);
      return cmd_curves(curve, curve_out, std::cerr);
    }
    if (*sampler) {
      if (*sample_attack_opt) sample.state.attack_T = sample_attack;
      sample.theta = parse_theta(sample_theta);
      return cmd_sample(sample, sample_out, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace catqkd::cli
