#include "catqkd/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catqkd/errors.hpp"
#include "catqkd/kernels.hpp"

namespace catqkd {
namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex z, const char* what) {
  if (!finite(z)) throw ParameterError(std::string(what) + " must be finite");
}

bool near(Complex x, Complex y, double tol) { return std::abs(x - y) <= tol; }

}  // namespace

CoherentKet::CoherentKet(std::vector<KetTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ParameterError("CoherentKet needs at least one term");
  for (const auto& t : terms_) {
    require_finite(t.coeff, "ket coefficient");
    require_finite(t.amplitude, "coherent amplitude");
  }
}

CoherentKet CoherentKet::coherent(Complex amplitude) {
  return CoherentKet({{Complex{1.0, 0.0}, amplitude}});
}

double CoherentKet::squared_norm() const {
  Complex s{};
  for (const auto& ti : terms_)
    for (const auto& tj : terms_)
      s += std::conj(ti.coeff) * tj.coeff * overlap(ti.amplitude, tj.amplitude);
  return s.real();
}

TwoModeCoherentKet::TwoModeCoherentKet(std::vector<TwoModeKetTerm> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw ParameterError("TwoModeCoherentKet needs at least one term");
  for (const auto& t : terms_) {
    require_finite(t.coeff, "ket coefficient");
    require_finite(t.amplitude_a, "coherent amplitude");
    require_finite(t.amplitude_b, "coherent amplitude");
  }
}

double TwoModeCoherentKet::squared_norm() const {
  Complex s{};
  for (const auto& ti : terms_)
    for (const auto& tj : terms_)
      s += std::conj(ti.coeff) * tj.coeff * overlap(ti.amplitude_a, tj.amplitude_a) *
           overlap(ti.amplitude_b, tj.amplitude_b);
  return s.real();
}

CoherentOperator::CoherentOperator(std::vector<Dyad> dyads) : dyads_(std::move(dyads)) {
  if (dyads_.empty()) throw ParameterError("CoherentOperator needs at least one dyad");
  for (const auto& d : dyads_) {
    require_finite(d.coeff, "dyad coefficient");
    require_finite(d.ket, "coherent amplitude");
    require_finite(d.bra, "coherent amplitude");
  }
}

Complex CoherentOperator::trace() const {
  Complex s{};
  for (const auto& d : dyads_) s += d.coeff * overlap(d.bra, d.ket);
  return s;
}

bool CoherentOperator::is_hermitian(double tol) const {
  for (const auto& d : dyads_) {
    if (near(d.ket, d.bra, tol) && std::abs(d.coeff.imag()) <= tol) continue;
    const bool paired = std::any_of(dyads_.begin(), dyads_.end(), [&](const Dyad& e) {
      return near(e.ket, d.bra, tol) && near(e.bra, d.ket, tol) &&
             near(e.coeff, std::conj(d.coeff), tol);
    });
    if (!paired) return false;
  }
  return true;
}

double CoherentOperator::max_amplitude() const {
  double m = 0.0;
  for (const auto& d : dyads_) m = std::max({m, std::abs(d.ket), std::abs(d.bra)});
  return m;
}

TwoModeCoherentOperator::TwoModeCoherentOperator(std::vector<TwoModeDyad> dyads)
    : dyads_(std::move(dyads)) {
  if (dyads_.empty()) throw ParameterError("TwoModeCoherentOperator needs at least one dyad");
  for (const auto& d : dyads_) {
    require_finite(d.coeff, "dyad coefficient");
    for (Complex z : {d.ket_a, d.ket_b, d.bra_a, d.bra_b}) require_finite(z, "coherent amplitude");
  }
}

Complex TwoModeCoherentOperator::trace() const {
  Complex s{};
  for (const auto& d : dyads_) s += d.coeff * overlap(d.bra_a, d.ket_a) * overlap(d.bra_b, d.ket_b);
  return s;
}

bool TwoModeCoherentOperator::is_hermitian(double tol) const {
  for (const auto& d : dyads_) {
    if (near(d.ket_a, d.bra_a, tol) && near(d.ket_b, d.bra_b, tol) &&
        std::abs(d.coeff.imag()) <= tol)
      continue;
    const bool paired = std::any_of(dyads_.begin(), dyads_.end(), [&](const TwoModeDyad& e) {
      return near(e.ket_a, d.bra_a, tol) && near(e.ket_b, d.bra_b, tol) &&
             near(e.bra_a, d.ket_a, tol) && near(e.bra_b, d.ket_b, tol) &&
             near(e.coeff, std::conj(d.coeff), tol);
    });
    if (!paired) return false;
  }
  return true;
}

Complex overlap(Complex a, Complex b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

CoherentKet make_cat(Complex alpha, Parity parity) {
  require_finite(alpha, "cat amplitude");
  // 2(1 +- kappa) with kappa = exp(-2|alpha|^2); expm1 keeps the odd case
  // accurate at small amplitude.
  const double x = -2.0 * std::norm(alpha);
  const double norm2 = parity == Parity::even ? 2.0 * (1.0 + std::exp(x)) : -2.0 * std::expm1(x);
  if (!(norm2 > 1e-30))
    throw DegenerateStateError("odd cat state with zero amplitude has no normalization");
  const double c = 1.0 / std::sqrt(norm2);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return CoherentKet({{Complex{c, 0.0}, alpha}, {Complex{sign * c, 0.0}, -alpha}});
}

CoherentKet normalize(const CoherentKet& ket) {
  const double n2 = ket.squared_norm();
  if (!(n2 > 1e-30)) throw DegenerateStateError("cannot normalize a ket with near-zero norm");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<KetTerm> terms(ket.terms().begin(), ket.terms().end());
  for (auto& t : terms) t.coeff *= scale;
  return CoherentKet(std::move(terms));
}

CoherentOperator ket_to_operator(const CoherentKet& ket) {
  std::vector<Dyad> dyads;
  dyads.reserve(ket.terms().size() * ket.terms().size());
  for (const auto& ti : ket.terms())
    for (const auto& tj : ket.terms())
      dyads.push_back({ti.coeff * std::conj(tj.coeff), ti.amplitude, tj.amplitude});
  return CoherentOperator(std::move(dyads));
}

TwoModeCoherentOperator beamsplitter(const CoherentOperator& op, double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0))
    throw ParameterError("beamsplitter transmittance must lie in [0, 1]");
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  std::vector<TwoModeDyad> out;
  out.reserve(op.dyads().size());
  for (const auto& d : op.dyads())
    out.push_back({d.coeff, t * d.ket, -r * d.ket, t * d.bra, -r * d.bra});
  return TwoModeCoherentOperator(std::move(out));
}

CoherentOperator partial_trace(const TwoModeCoherentOperator& op, Mode keep) {
  std::vector<Dyad> out;
  out.reserve(op.dyads().size());
  for (const auto& d : op.dyads()) {
    if (keep == Mode::a)
      out.push_back({d.coeff * overlap(d.bra_b, d.ket_b), d.ket_a, d.bra_a});
    else
      out.push_back({d.coeff * overlap(d.bra_a, d.ket_a), d.ket_b, d.bra_b});
  }
  return CoherentOperator(std::move(out));
}

Complex quadrature_wavefunction(Complex amplitude, double theta, double q) {
  static const double quarter_root_pi = std::pow(kPi, -0.25);
  const Complex rotated = amplitude * std::polar(1.0, -theta);
  const Complex exponent = -0.5 * q * q + std::sqrt(2.0) * rotated * q -
                           0.5 * rotated * rotated - 0.5 * std::norm(amplitude);
  return quarter_root_pi * std::exp(exponent);
}

double quadrature_pdf(const CoherentOperator& op, double theta, double q) {
  return kernels::detail::pdf_point(op.dyads(), theta, q);
}

QuadratureGrid standard_grid(const CoherentOperator& op, std::size_t points) {
  if (points < 2) throw ParameterError("quadrature grid needs at least two points");
  const double half = std::sqrt(2.0) * op.max_amplitude() + 6.0;
  return {-half, half, points};
}

std::vector<double> quadrature_pdf_on_grid(const CoherentOperator& op, double theta,
                                           const QuadratureGrid& grid) {
  std::vector<double> q(grid.points);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = grid.node(i);
  std::vector<double> pdf(grid.points);
  kernels::omp::pdf_grid(op.dyads(), theta, q, pdf);
  return pdf;
}

double integrate_quadrature_pdf(const CoherentOperator& op, double theta, std::size_t points) {
  const auto grid = standard_grid(op, points);
  const auto pdf = quadrature_pdf_on_grid(op, theta, grid);
  double s = 0.5 * (pdf.front() + pdf.back());
  for (std::size_t i = 1; i + 1 < pdf.size(); ++i) s += pdf[i];
  return s * grid.step();
}

Eigen::MatrixXcd gram_matrix(std::span<const CoherentKet> kets) {
  const auto n = static_cast<Eigen::Index>(kets.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex s{};
      for (const auto& ti : kets[i].terms())
        for (const auto& tj : kets[j].terms())
          s += std::conj(ti.coeff) * tj.coeff * overlap(ti.amplitude, tj.amplitude);
      g(i, j) = s;
    }
  return g;
}

Eigen::MatrixXcd gram_matrix(std::span<const TwoModeCoherentKet> kets) {
  const auto n = static_cast<Eigen::Index>(kets.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex s{};
      for (const auto& ti : kets[i].terms())
        for (const auto& tj : kets[j].terms())
          s += std::conj(ti.coeff) * tj.coeff * overlap(ti.amplitude_a, tj.amplitude_a) *
               overlap(ti.amplitude_b, tj.amplitude_b);
      g(i, j) = s;
    }
  return g;
}

std::vector<double> gram_eigenvalues(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::array<TwoModeCoherentKet, 4> wcp_states(double alpha) {
  const Complex a{alpha, 0.0};
  const Complex i{0.0, 1.0};
  auto product = [&](Complex second) { return TwoModeCoherentKet({{Complex{1.0, 0.0}, a, second}}); };
  return {product(a), product(-a), product(i * a), product(-i * a)};
}

}  // namespace catqkd
