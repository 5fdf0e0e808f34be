#include "catqkd/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catqkd/errors.hpp"
#include "catqkd/measurement.hpp"

namespace catqkd {
namespace {

constexpr double kSumTol = 1e-12;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

DiscreteChannel::DiscreteChannel(std::vector<double> priors, Eigen::MatrixXd conditionals)
    : priors_(std::move(priors)), conditionals_(std::move(conditionals)) {
  if (priors_.empty() || static_cast<Eigen::Index>(priors_.size()) != conditionals_.rows())
    throw ParameterError("channel needs one conditional row per prior");
  if (conditionals_.cols() < 1) throw ParameterError("channel needs at least one output");
  for (double p : priors_)
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("priors must lie in [0, 1]");
  if (std::abs(std::accumulate(priors_.begin(), priors_.end(), 0.0) - 1.0) > kSumTol)
    throw ParameterError("priors must sum to 1");
  for (Eigen::Index i = 0; i < conditionals_.rows(); ++i) {
    for (Eigen::Index j = 0; j < conditionals_.cols(); ++j) {
      const double p = conditionals_(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("conditionals must lie in [0, 1]");
    }
    if (std::abs(conditionals_.row(i).sum() - 1.0) > kSumTol)
      throw ParameterError("each conditional row must sum to 1");
  }
}

DiscreteChannel DiscreteChannel::binary_symmetric(double error) {
  Eigen::MatrixXd p(2, 2);
  p << 1.0 - error, error, error, 1.0 - error;
  return DiscreteChannel({0.5, 0.5}, p);
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("binary entropy argument must lie in [0, 1]");
  return -plogp(q) - plogp(1.0 - q);
}

double mutual_information(const DiscreteChannel& ch) {
  const auto& prior = ch.priors();
  const auto& cond = ch.conditionals();
  double h_prior = 0.0;
  for (double p : prior) h_prior -= plogp(p);

  double h_posterior = 0.0;
  for (Eigen::Index j = 0; j < cond.cols(); ++j) {
    double q_j = 0.0;
    for (Eigen::Index i = 0; i < cond.rows(); ++i) q_j += cond(i, j) * prior[static_cast<std::size_t>(i)];
    if (q_j <= 0.0) continue;
    double h_j = 0.0;
    for (Eigen::Index i = 0; i < cond.rows(); ++i)
      h_j -= plogp(cond(i, j) * prior[static_cast<std::size_t>(i)] / q_j);
    h_posterior += q_j * h_j;
  }
  return std::max(h_prior - h_posterior, 0.0);
}

bool exclusion_check(double i_a, double i_b, std::size_t dim) {
  return i_a + i_b <= std::log2(static_cast<double>(dim)) + 1e-12;
}

TradeoffPoint tradeoff_point(double q_e_bob) {
  if (!(q_e_bob >= 0.0 && q_e_bob <= 0.5))
    throw ParameterError("Bob's error probability must lie in [0, 1/2]");
  const double v = 1.0 - 2.0 * q_e_bob;
  const double d = std::sqrt(std::max(1.0 - v * v, 0.0));
  TradeoffPoint pt;
  auto& m = pt.metrics;
  m.q_e_bob = q_e_bob;
  m.q_e_eve = 0.5 * (1.0 - d);
  m.i_ab = 1.0 - binary_entropy(m.q_e_bob);
  m.i_ae = 1.0 - binary_entropy(m.q_e_eve);
  m.g_bob = v;
  m.g_eve = d;
  pt.sum = m.i_ab + m.i_ae;
  return pt;
}

std::vector<TradeoffPoint> tradeoff_fig1(std::size_t n_points) {
  if (n_points < 2) throw ParameterError("trade-off curve needs at least two points");
  std::vector<TradeoffPoint> out;
  out.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double q = 0.5 * static_cast<double>(k) / static_cast<double>(n_points - 1);
    out.push_back(tradeoff_point(q));
  }
  return out;
}

double leakage_vs_visibility(double v_b) {
  if (!(v_b >= 0.0 && v_b <= 1.0)) throw ParameterError("visibility must lie in [0, 1]");
  const double d = std::sqrt(std::clamp(1.0 - v_b * v_b, 0.0, 1.0));
  return 1.0 - binary_entropy(0.5 * (1.0 - d));
}

double bob_info_vs_visibility(double v_b, double mean_photon) {
  if (!(mean_photon > 0.0)) throw ParameterError("mean photon number must be positive");
  if (!(v_b <= 1.0)) throw ParameterError("visibility must not exceed 1");
  const double kappa = std::exp(-2.0 * mean_photon);
  if (!(v_b >= kappa)) throw DomainError("visibility below the overlap floor exp(-2|alpha|^2)");
  // V_B = exp(-2 (1 - T) |alpha|^2)  =>  T = 1 + ln(V_B) / (2 |alpha|^2)
  const double t = std::clamp(1.0 + std::log(v_b) / (2.0 * mean_photon), 0.0, 1.0);
  const double q = gaussian_error_prob(std::sqrt(2.0 * t * mean_photon));
  return 1.0 - binary_entropy(q);
}

}  // namespace catqkd
