#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockbridge/dynamics.hpp"
#include "fockbridge/fock.hpp"
#include "fockbridge/symbolic.hpp"

namespace fockbridge {

// Mixed-state operator built from classical samples. entries is Hermitian
// within 1e-12 entrywise and PSD within -1e-10 at test sizes;
// truncation_tail bounds the probability mass the cutoff discarded, so
// trace(entries) is within truncation_tail of 1.
struct DensityMatrix {
  FockBasis basis;
  OperatorMatrix entries;
  double truncation_tail = 0.0;
};

// Two-sided comparison record. lhs is the operator-side value, rhs the
// classical-side value; abs_gap = |lhs - rhs| always. The error budget is
// layered: float_estimate (roundoff), truncation_estimate (cutoff tail),
// mc_estimate (sampling error; zero whenever both sides consume the same
// samples). passed means abs_gap <= tolerance().
struct EquivalenceReport {
  std::string experiment;
  cplx lhs{};
  cplx rhs{};
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double float_estimate = 0.0;
  double truncation_estimate = 0.0;
  double mc_estimate = 0.0;
  // check_eq6 only: |central finite difference of the conjugation flow -
  // lhs|, an independent cross-check of the commutator trace.
  double fd_gap = 0.0;
  int modes = 0;
  int cutoff = 0;
  std::uint64_t seed = 0;
  bool passed = false;

  double tolerance() const {
    return float_estimate + truncation_estimate + mc_estimate;
  }
};

// P(X > cutoff) for X ~ Poisson(lambda), summed upward from the smallest
// discarded term so no 1 - cdf cancellation occurs.
double poisson_tail(double lambda, int cutoff);

// Smallest cutoff M (floor 1) whose per-mode occupation tail at coherent
// amplitude max_amplitude stays within tolerance: the occupation of a
// coherent state is Poisson with lambda = max_amplitude^2.
int cutoff_estimate(double max_amplitude, double tolerance);

// Upper bound on the probability mass of the coherent state at s that a
// truncation at basis.cutoff() discards (sum of per-mode Poisson tails).
double state_tail_bound(const ClassicalState& s, const FockBasis& basis);

// Unnormalized generating vector: coefficient at occupation (i_1..i_N) is
// prod_j y_j^{i_j} / sqrt(i_j!). Squared norm tends to exp(|y|^2) as the
// cutoff grows. The real overload is the phase-space special case.
FockVector v_vector(const std::vector<cplx>& y, const FockBasis& basis);
FockVector v_vector(const std::vector<double>& phi, const FockBasis& basis);

// Per-mode complex amplitudes z_j = (phi_j + i pi_j)/sqrt2.
std::vector<cplx> coherent_amplitudes(const ClassicalState& s);

// Unit-norm coherent state at s: per mode, coefficient at occupation n is
// exp(-|z_j|^2/2) z_j^n / sqrt(n!), renormalized after truncation. Throws
// std::invalid_argument naming the required cutoff when the truncated tail
// at basis.cutoff() exceeds max_tail.
FockVector coherent_vector(const ClassicalState& s, const FockBasis& basis,
                           double max_tail = 1e-6);

// The same state built as exp((1/sqrt2) sum_j ((phi_j + i pi_j) a_j^+ -
// (phi_j - i pi_j) a_j)) |0>, by matrix exponential. Unitary image of the
// vacuum, so unit norm within 1e-10 at adequate cutoff.
FockVector displacement_vector(const ClassicalState& s,
                               const FockBasis& basis);

// rho = sum_k weight_k w_k w_k^H over coherent states of the samples, with
// compensated accumulation so the result is independent of sample order
// within 1e-12. truncation_tail is the worst per-sample tail bound.
DensityMatrix density_from_ensemble(const Ensemble& e, const FockBasis& basis,
                                    double max_tail = 1e-6);

enum class FieldKind { phi, pi };

// Re Tr(rho * F_j) for F = Phi or Pi. The trace of a Hermitian pair is
// real up to roundoff; the discarded imaginary residue (<= 1e-10 on test
// sizes) is written to *imag_residue when given.
double expect_field(const DensityMatrix& rho, int mode,
                    FieldKind kind = FieldKind::phi,
                    double* imag_residue = nullptr);

// Tr(rho * g_n) where g_n is the normal-substituted operator of g.
// Equals the classical ensemble average of g up to truncation + float
// error. Requires basis.cutoff() >= degree(g).
cplx expect_normal(const DensityMatrix& rho, const PhiPiPolynomial& g);

// <w| g_n |w> for a single unit vector; the samplewise form of
// expect_normal, with no density matrix formed.
cplx expect_normal_pure(const FockVector& w, const PhiPiPolynomial& g);

// G(t) = U(t)^H G(0) U(t) with U(t) = exp(-i H_n t) and
// G(0) = g_n. Solves Gdot = -i [G, H_n] exactly in the truncated space.
OperatorMatrix heisenberg_operator(const PhiPiPolynomial& g,
                                   const HamiltonianSpec& H,
                                   const FockBasis& basis, double t);

// Fixed-step RK4 integration of Gdot = -i [G, H_n]; cross-validation for
// heisenberg_operator, not a replacement.
OperatorMatrix heisenberg_operator_ode(const PhiPiPolynomial& g,
                                       const HamiltonianSpec& H,
                                       const FockBasis& basis, double t,
                                       double dt);

// Flow-derivative identity at t = 0. For kind = phi: lhs =
// -i Tr(rho [Phi_j, H_n]), rhs = <dH/dpi_j> over the ensemble; for
// kind = pi the rhs is -<dH/dphi_j>. fd_gap cross-checks lhs against the
// central finite difference of Tr(rho G(t)) at +-fd_step.
EquivalenceReport check_eq6(const Ensemble& e, const HamiltonianSpec& H,
                            int mode, const FockBasis& basis, double fd_step,
                            FieldKind kind = FieldKind::phi,
                            double max_tail = 1e-6);

// Extrapolation gap between operator-side evolution and classical flow:
// lhs = Tr(rho(0) G(t)), rhs = <g(phi(t), pi(t))> with every sample
// integrated by RK4 at step dt. The identity is exact at t = 0 and for
// quadratic H; elsewhere the report quantifies the breakdown.
EquivalenceReport eq10_gap(const Ensemble& e, const HamiltonianSpec& H,
                           const PhiPiPolynomial& g, const FockBasis& basis,
                           double t, double dt, double max_tail = 1e-6);

// Tr(rho (H_sym - H_n)) for the harmonic Hamiltonian sum_j
// (phi_j^2 + pi_j^2)/2, where H_sym averages over all operator orderings.
// The difference operator is (modes/2) * I, so the value is modes/2
// independent of rho; the overload taking rho verifies that.
double zero_point_gap(const FockBasis& basis);
double zero_point_gap(const FockBasis& basis, const DensityMatrix& rho);

} // namespace fockbridge
