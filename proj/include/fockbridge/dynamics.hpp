#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fockbridge/symbolic.hpp"

namespace fockbridge {

// Phase-space point. Flattened coordinate order everywhere (CSV columns,
// distribution parameters) is phi_1..phi_N then pi_1..pi_N.
struct ClassicalState {
  std::vector<double> phi;
  std::vector<double> pi;

  friend bool operator==(const ClassicalState&,
                         const ClassicalState&) = default;
};

bool all_finite(const ClassicalState& s);

// Classical energy polynomial. Coefficients must be real (the energy is
// real); degree is capped by the symbolic layer's substitution cap.
struct HamiltonianSpec {
  int modes;
  PhiPiPolynomial h;

  HamiltonianSpec(int modes, PhiPiPolynomial h);
};

// Fixed-step flow record. Steps are uniform except that the last one is
// shortened when t_final is not a multiple of dt, so times.back() lands on
// t_final exactly.
struct Trajectory {
  std::vector<double> times;
  std::vector<ClassicalState> states;
};

// Empirical phase-space measure: weighted samples, weights summing to 1
// within 1e-12. seed and distribution record provenance.
struct Ensemble {
  std::vector<ClassicalState> samples;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string distribution;
};

struct DistributionSpec {
  enum class Kind { delta_at_state, product_gaussian, uniform_box };

  Kind kind = Kind::delta_at_state;
  // All vectors use the flattened coordinate order, length 2N.
  std::vector<double> mean;    // delta center / gaussian means
  std::vector<double> stddev;  // gaussian only, entries >= 0
  std::vector<double> lo, hi;  // uniform box only, lo[i] <= hi[i]
  std::uint64_t seed = 0;
};

enum class IntegrationMethod { rk4, implicit_midpoint };

// Philox4x32-10 counter-based generator: one 128-bit block per
// (seed, sample, block) triple with no sequential state, so per-sample
// draws are identical whether samples are produced in order or in
// parallel. Counter words are (block lo, block hi, sample lo, sample hi);
// the key is the seed split into 32-bit halves.
std::array<std::uint32_t, 4> philox_block(std::uint64_t seed,
                                          std::uint64_t sample,
                                          std::uint64_t block);

// Two doubles in [0, 1) from one block, 53-bit mantissas.
std::array<double, 2> philox_uniforms(std::uint64_t seed,
                                      std::uint64_t sample,
                                      std::uint64_t block);

// phidot_j = dH/dpi_j, pidot_j = -dH/dphi_j at s.
std::pair<std::vector<double>, std::vector<double>>
lagrange_euler_rhs(const HamiltonianSpec& h, const ClassicalState& s);

// Fixed-step integration of the Lagrange-Euler flow. implicit_midpoint
// solves its stage by fixed-point iteration (tolerance 1e-13, 50 iteration
// cap) and throws std::runtime_error with step diagnostics when the
// iteration stalls; rk4 is the explicit cross-check.
Trajectory integrate(const HamiltonianSpec& h, const ClassicalState& s0,
                     double t_final, double dt, IntegrationMethod method);

double energy(const HamiltonianSpec& h, const ClassicalState& s);

// Deterministic given d.seed; weights all 1/count.
Ensemble sample_ensemble(const DistributionSpec& d, int count);

// Integrates every sample to time t, preserving weights and order.
Ensemble evolve_ensemble(const HamiltonianSpec& h, const Ensemble& e,
                         double t, double dt, IntegrationMethod method);

// CSV columns: t, phi_1..phi_N, pi_1..pi_N (ensembles use weight in place
// of t). JSON bodies mirror the struct fields.
std::string trajectory_csv(const Trajectory& traj);
std::string ensemble_csv(const Ensemble& e);
std::string trajectory_json(const Trajectory& traj);
std::string ensemble_json(const Ensemble& e);

} // namespace fockbridge
