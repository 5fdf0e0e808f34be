#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace catqkd::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kStrictInconclusive = 3,
  kIoError = 4,
};

struct SimulateOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  bool pulses_csv = false;
  bool strict = false;
};

/// Runs one session; writes transcript.json (and pulses.csv) into out_dir and
/// prints a one-line verdict summary to `out`.
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

enum class CurveKind { fig1, fig4, pdf_dump, wcp_gram };

/// A single-mode state, optionally sent through the attack and loss splitters.
struct StateDescriptor {
  std::string state = "cat-even";  // vacuum | coherent | cat-even | cat-odd
  double alpha = 1.0;
  std::optional<double> attack_T;
  double transmittance = 1.0;
};

struct CurveRequest {
  CurveKind kind = CurveKind::fig1;
  std::optional<std::size_t> n_points;           // fig1, fig4 (512); pdf_dump (4096)
  std::vector<double> mean_photons = {1.0, 2.0};  // fig4
  StateDescriptor state;                                // pdf_dump
  double theta = 0.0;                             // pdf_dump
  std::optional<double> q_min;                    // pdf_dump, default standard grid
  std::optional<double> q_max;
  std::vector<double> alphas = {1.0, 0.5, 0.1, 0.01};  // wcp_gram
  std::optional<std::filesystem::path> matrix_out;     // wcp_gram full matrices
};

/// Writes the requested curve as CSV. Throws ParameterError on bad parameters.
void write_curve(const CurveRequest& req, std::ostream& out);

int cmd_curves(const CurveRequest& req, const std::filesystem::path& out_path, std::ostream& err);

struct SampleRequest {
  StateDescriptor state;
  double theta = 0.0;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

/// Single-column CSV with header `q`.
int cmd_sample(const SampleRequest& req, const std::filesystem::path& out_path, std::ostream& err);

/// Parses "0", "pi/2", "pi" or a number of radians.
double parse_theta(const std::string& text);

/// Full command-line entry point.
int run(int argc, char** argv);

}  // namespace catqkd::cli
