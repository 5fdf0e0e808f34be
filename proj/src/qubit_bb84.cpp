#include "catqkd/qubit_bb84.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "catqkd/errors.hpp"

namespace catqkd {
namespace {

constexpr double kTol = 1e-12;

Eigen::Matrix2cd hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h;
  h << s, s, s, -s;
  return h;
}

Eigen::Matrix2cd projector(Basis basis, Bit bit) {
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  v(bit) = 1.0;
  if (basis == Basis::cross) v = hadamard() * v;
  return v * v.adjoint();
}

std::optional<std::pair<Basis, Bit>> identify_bb84(const Eigen::Matrix2cd& rho) {
  for (Basis b : {Basis::plus, Basis::cross})
    for (Bit bit : {Bit{0}, Bit{1}})
      if ((rho - projector(b, bit)).cwiseAbs().maxCoeff() <= kTol) return std::pair{b, bit};
  return std::nullopt;
}

}  // namespace

QubitState::QubitState(const Eigen::Matrix2cd& rho) : rho_(rho) {
  if (!rho_.allFinite()) throw ParameterError("qubit state must be finite");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kTol)
    throw ParameterError("qubit state must be Hermitian");
  if (std::abs(rho_.trace() - std::complex<double>(1.0, 0.0)) > kTol)
    throw ParameterError("qubit state must have unit trace");
  if (eigenvalues().minCoeff() < -kTol) throw ParameterError("qubit state must be positive");
}

QubitState QubitState::bb84(Basis basis, Bit bit) {
  if (bit > 1) throw ParameterError("bit must be 0 or 1");
  return QubitState(projector(basis, bit));
}

QubitState QubitState::maximally_mixed() {
  return QubitState(0.5 * Eigen::Matrix2cd::Identity());
}

Eigen::Vector2d QubitState::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

SymmetricAttack SymmetricAttack::from_fidelity(double fidelity) {
  if (!(fidelity >= 0.5 && fidelity <= 1.0))
    throw ParameterError("attack fidelity must lie in [1/2, 1]");
  return SymmetricAttack(fidelity);
}

SymmetricAttack SymmetricAttack::from_visibility(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw ParameterError("attack visibility must lie in [0, 1]");
  return SymmetricAttack(0.5 * (1.0 + visibility));
}

double SymmetricAttack::distinguishability() const {
  const double v = visibility();
  return std::sqrt(std::max(1.0 - v * v, 0.0));
}

QubitState attack_channel_bob(const QubitState& input, const SymmetricAttack& attack) {
  const auto which = identify_bb84(input.matrix());
  if (!which) throw ParameterError("attack channel accepts only the four BB84 states");
  const auto [basis, bit] = *which;
  const Bit other = static_cast<Bit>(1 - bit);
  return QubitState(attack.fidelity() * projector(basis, bit) +
                    attack.disturbance() * projector(basis, other));
}

Eigen::Matrix2d bob_conditionals(const SymmetricAttack& attack) {
  const double f = attack.fidelity();
  const double d = attack.disturbance();
  Eigen::Matrix2d p;
  p << f, d, d, f;
  return p;
}

Eigen::Matrix2d eve_conditionals(const SymmetricAttack& attack) {
  const double right = 0.5 * (1.0 + attack.distinguishability());
  Eigen::Matrix2d p;
  p << right, 1.0 - right, 1.0 - right, right;
  return p;
}

double visibility_of(const QubitState& state, Basis basis) {
  // The matrix is stored in the + basis; a cross-basis state is read there
  // directly, a plus-basis state is first rotated into the cross basis.
  const Eigen::Matrix2cd rho =
      basis == Basis::cross ? state.matrix() : Eigen::Matrix2cd(hadamard() * state.matrix() * hadamard());
  return std::min(2.0 * std::abs(rho(0, 1)), 1.0);
}

}  // namespace catqkd
