#pragma once

// Single-photon BB84 under the optimal symmetric individual attack, expressed
// through the channel it induces on Bob's qubit. The attack is fully
// described by its fidelity F, disturbance D = 1 - F and visibility V = F - D.

#include <Eigen/Dense>

#include "catqkd/pulse.hpp"

namespace catqkd {

enum class Basis { plus, cross };

/// Density matrix on C^2 in the + basis: |0+> = (1, 0), |1+> = (0, 1),
/// |0x> = (|0+> + |1+>)/sqrt(2), |1x> = (|0+> - |1+>)/sqrt(2).
class QubitState {
 public:
  /// Throws ParameterError unless the matrix is Hermitian, unit trace and
  /// positive semidefinite (all within 1e-12).
  explicit QubitState(const Eigen::Matrix2cd& rho);

  static QubitState bb84(Basis basis, Bit bit);
  static QubitState maximally_mixed();

  const Eigen::Matrix2cd& matrix() const noexcept { return rho_; }
  Eigen::Vector2d eigenvalues() const;

 private:
  Eigen::Matrix2cd rho_;
};

class SymmetricAttack {
 public:
  /// Throws ParameterError unless 1/2 <= F <= 1.
  static SymmetricAttack from_fidelity(double fidelity);
  /// Throws ParameterError unless 0 <= V <= 1.
  static SymmetricAttack from_visibility(double visibility);

  double fidelity() const noexcept { return fidelity_; }
  double disturbance() const noexcept { return 1.0 - fidelity_; }
  double visibility() const noexcept { return 2.0 * fidelity_ - 1.0; }
  /// Eve's optimal distinguishability sqrt(1 - V^2).
  double distinguishability() const;

 private:
  explicit SymmetricAttack(double fidelity) : fidelity_(fidelity) {}
  double fidelity_;
};

/// Bob's marginal F rho_i + D rho_{1-i} for a BB84 input state.
/// Throws ParameterError when `input` is not one of the four BB84 states.
QubitState attack_channel_bob(const QubitState& input, const SymmetricAttack& attack);

/// P(j|i) for Bob's measurement in the transmission basis: (1 +- V)/2.
Eigen::Matrix2d bob_conditionals(const SymmetricAttack& attack);

/// P(j|i) for Eve's optimal measurement: (1 +- sqrt(1 - V^2))/2.
Eigen::Matrix2d eve_conditionals(const SymmetricAttack& attack);

/// Visibility of a state prepared in `basis`: twice the magnitude of its
/// off-diagonal element written in the complementary basis.
double visibility_of(const QubitState& state, Basis basis);

}  // namespace catqkd
