#pragma once

// Exact algebra over finite superpositions of coherent states.
//
// Every state and operator used by the protocol lives in the span of a few
// coherent states, so kets are stored as lists of (coefficient, amplitude)
// pairs and density operators as lists of dyads c |a><b|. Inner products are
// closed form, so no Fock-space truncation is involved anywhere.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace catqkd {

using Complex = std::complex<double>;

enum class Parity { even, odd };
enum class Mode { a, b };

struct KetTerm {
  Complex coeff;
  Complex amplitude;
};

/// Single-mode ket sum_i c_i |a_i>. Never empty; all numbers finite.
class CoherentKet {
 public:
  explicit CoherentKet(std::vector<KetTerm> terms);

  /// The normalized coherent state |amplitude>.
  static CoherentKet coherent(Complex amplitude);

  std::span<const KetTerm> terms() const noexcept { return terms_; }
  double squared_norm() const;

 private:
  std::vector<KetTerm> terms_;
};

struct TwoModeKetTerm {
  Complex coeff;
  Complex amplitude_a;
  Complex amplitude_b;
};

/// Two-mode ket sum_i c_i |a_i>|b_i>; used for the weak-coherent-pulse states.
class TwoModeCoherentKet {
 public:
  explicit TwoModeCoherentKet(std::vector<TwoModeKetTerm> terms);

  std::span<const TwoModeKetTerm> terms() const noexcept { return terms_; }
  double squared_norm() const;

 private:
  std::vector<TwoModeKetTerm> terms_;
};

/// One term c |ket><bra|.
struct Dyad {
  Complex coeff;
  Complex ket;
  Complex bra;
};

/// Operator sum_k c_k |ket_k><bra_k| on one mode. Dyads are kept exactly as
/// produced; nearby amplitudes are never merged. Never empty.
class CoherentOperator {
 public:
  explicit CoherentOperator(std::vector<Dyad> dyads);

  std::span<const Dyad> dyads() const noexcept { return dyads_; }

  /// sum_k c_k <bra_k|ket_k>
  Complex trace() const;

  /// Every dyad (c, a, b) has a partner (conj(c), b, a), or is itself
  /// self-adjoint. Amplitudes are matched within `tol`.
  bool is_hermitian(double tol = 1e-12) const;

  double max_amplitude() const;

 private:
  std::vector<Dyad> dyads_;
};

struct TwoModeDyad {
  Complex coeff;
  Complex ket_a;
  Complex ket_b;
  Complex bra_a;
  Complex bra_b;
};

class TwoModeCoherentOperator {
 public:
  explicit TwoModeCoherentOperator(std::vector<TwoModeDyad> dyads);

  std::span<const TwoModeDyad> dyads() const noexcept { return dyads_; }
  Complex trace() const;
  bool is_hermitian(double tol = 1e-12) const;

 private:
  std::vector<TwoModeDyad> dyads_;
};

/// <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)
Complex overlap(Complex a, Complex b);

/// (|alpha> +- |-alpha>) / sqrt(2(1 +- kappa)), + for even parity.
/// Throws DegenerateStateError for an odd cat at alpha = 0.
CoherentKet make_cat(Complex alpha, Parity parity);

/// Rescales to unit norm; coefficient ratios are unchanged.
/// Throws DegenerateStateError when the squared norm is <= 1e-30.
CoherentKet normalize(const CoherentKet& ket);

CoherentOperator ket_to_operator(const CoherentKet& ket);

/// Mixes mode a (carrying `op`) with vacuum in mode b on a beamsplitter of
/// intensity transmittance T: |a>|0> -> |sqrt(T) a>|-sqrt(1-T) a>.
/// Throws ParameterError unless 0 <= T <= 1.
TwoModeCoherentOperator beamsplitter(const CoherentOperator& op, double transmittance);

/// Traces out the mode not kept; each dyad picks up <bra_m|ket_m>.
CoherentOperator partial_trace(const TwoModeCoherentOperator& op, Mode keep);

/// Quadrature wavefunction <q_theta|alpha> for X(theta) = x cos(theta) + p sin(theta).
Complex quadrature_wavefunction(Complex amplitude, double theta, double q);

/// Probability density of measuring X(theta) = q on the state `op`.
/// Tiny negative round-off is clamped to zero.
double quadrature_pdf(const CoherentOperator& op, double theta, double q);

/// Uniform grid used for quadrature integration and sampling:
/// `points` nodes spanning +-(sqrt(2) * max|amplitude| + 6).
struct QuadratureGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;

  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double node(std::size_t i) const { return lo + step() * static_cast<double>(i); }
};

inline constexpr std::size_t kDefaultGridPoints = 4096;

QuadratureGrid standard_grid(const CoherentOperator& op,
                             std::size_t points = kDefaultGridPoints);

/// Density evaluated at every node of `grid`.
std::vector<double> quadrature_pdf_on_grid(const CoherentOperator& op, double theta,
                                           const QuadratureGrid& grid);

/// Trapezoid integral of the quadrature density over the standard grid.
double integrate_quadrature_pdf(const CoherentOperator& op, double theta,
                                std::size_t points = kDefaultGridPoints);

/// Matrix of inner products G_ij = <psi_i|psi_j>.
Eigen::MatrixXcd gram_matrix(std::span<const CoherentKet> kets);
Eigen::MatrixXcd gram_matrix(std::span<const TwoModeCoherentKet> kets);

/// Eigenvalues of a Hermitian Gram matrix in ascending order.
std::vector<double> gram_eigenvalues(const Eigen::MatrixXcd& gram);

/// The four weak-coherent-pulse BB84 states
/// |a>|a>, |a>|-a>, |a>|ia>, |a>|-ia>.
std::array<TwoModeCoherentKet, 4> wcp_states(double alpha);

}  // namespace catqkd
