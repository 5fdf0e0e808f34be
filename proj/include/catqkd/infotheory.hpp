#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace catqkd {

/// Inputs i with prior p_i, outputs j with P(j|i) in row i.
class DiscreteChannel {
 public:
  /// Throws ParameterError unless priors and every row sum to 1 within
  /// 1e-12 and all entries lie in [0, 1].
  DiscreteChannel(std::vector<double> priors, Eigen::MatrixXd conditionals);

  static DiscreteChannel binary_symmetric(double error);

  const std::vector<double>& priors() const noexcept { return priors_; }
  const Eigen::MatrixXd& conditionals() const noexcept { return conditionals_; }

 private:
  std::vector<double> priors_;
  Eigen::MatrixXd conditionals_;
};

struct InfoMetrics {
  double q_e_bob = 0.0;
  double q_e_eve = 0.0;
  double i_ab = 0.0;
  double i_ae = 0.0;
  double g_bob = 0.0;
  double g_eve = 0.0;
};

struct TradeoffPoint {
  InfoMetrics metrics;
  double sum = 0.0;  // i_ab + i_ae
};

/// H(q) in bits, with 0 log 0 = 0. Throws ParameterError outside [0, 1].
double binary_entropy(double q);

/// I = H(prior) - H(prior | output), through the Bayes posterior.
double mutual_information(const DiscreteChannel& ch);

/// i_a + i_b <= log2(dim) + 1e-12
bool exclusion_check(double i_a, double i_b, std::size_t dim);

/// One point of the symmetric-attack trade-off at Bob's error `q_e_bob`:
/// V = 1 - 2 Q_B, Q_E = (1 - sqrt(1 - V^2)) / 2, G_B = V, G_E = sqrt(1 - V^2).
TradeoffPoint tradeoff_point(double q_e_bob);

/// `n_points` equally spaced points over Q_B in [0, 1/2], endpoints included.
std::vector<TradeoffPoint> tradeoff_fig1(std::size_t n_points);

/// Eve's information 1 - H(Q_E(V_B)) after a beamsplitter attack that leaves
/// Bob with fringe visibility `v_b`.
double leakage_vs_visibility(double v_b);

/// Bob's information for thresholded homodyne detection of |+-alpha> after
/// the beamsplitter that produced visibility `v_b`, with |alpha|^2 = mean_photon.
/// Throws DomainError when v_b < exp(-2 mean_photon) (no physical transmittance).
double bob_info_vs_visibility(double v_b, double mean_photon);

}  // namespace catqkd
