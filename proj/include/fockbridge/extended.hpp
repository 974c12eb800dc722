#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fockbridge/dynamics.hpp"
#include "fockbridge/fock.hpp"

namespace fockbridge {

// Fock space over 2N modes split into two blocks: the a-block is modes
// 1..N and the b-block of mode j is stored as mode j+N, so every b
// generator is an ordinary ladder operator on the second block.
struct DoubledBasis {
  int modes; // N, per block
  FockBasis full;

  DoubledBasis(int modes, int cutoff);
  int b_mode(int j) const { return modes + j; }
};

// exp(sum_j (z_j a_j^+ + conj(z_j) b_j^+) - s/sqrt2) |0> with
// z_j = (phi_j + i pi_j)/sqrt2 and s = sum_j (phi_j^2 + pi_j^2), taken
// literally: the scalar term makes the result unnormalized, with norm
// e^{(1/2 - 1/sqrt2) s} before truncation. The norm is written to
// *norm_out (when given) and never silently fixed. Throws
// std::invalid_argument naming the required cutoff when the truncated
// tail exceeds max_tail.
FockVector extended_coherent_vector(const ClassicalState& s,
                                    const DoubledBasis& basis,
                                    double* norm_out = nullptr,
                                    double max_tail = 1e-6);

// Two-block field operators
//   Phi_j = (a_j + a_j^+ + b_j + b_j^+) / (2 sqrt2)
//   Pi_j  = (a_j - a_j^+ - b_j + b_j^+) / (2i sqrt2)
// Both Hermitian; same-kind pairs commute exactly across modes.
struct ExtendedFieldOps {
  OperatorMatrix phi;
  OperatorMatrix pi;
};
ExtendedFieldOps extended_field_ops(int mode, const DoubledBasis& basis);

// sum_j (a_j a_j^+ - b_j b_j^+). The literal reading multiplies the
// ladder matrices; the normal_ordered reading uses number operators (the
// +-1 constants cancel between blocks). The two differ only by
// truncation-boundary terms and roundoff.
enum class G0Reading { literal, normal_ordered };
OperatorMatrix g0_operator(const DoubledBasis& basis,
                           G0Reading reading = G0Reading::literal);

// exp(-i G0 t) * A * exp(+i G0 t); a unitary group action in t.
OperatorMatrix interaction_picture(const OperatorMatrix& a,
                                   const DoubledBasis& basis, double t);

// One commutator measurement on the interior subspace (margin 1):
// which is "qq" for [q_j(t), q_k(t')], "qp" for [q_j(t), p_k(t')],
// "pp" for [p_j(t), p_k(t')], with q = interaction-picture Phi and
// p = interaction-picture Pi. fit is the scalar c minimizing
// ||P C P - c P||_F over the interior projector P; residual is that
// minimum.
struct SurveyRow {
  int j;
  int k;
  double t;
  double tprime;
  std::string which;
  double operator_norm;
  cplx fit;
  double fit_residual;
};

std::vector<SurveyRow> commutator_survey(
    const DoubledBasis& basis,
    const std::vector<std::pair<double, double>>& times);

// t, t' on the grid {0, 0.25, 0.5, 1.0}, all 16 ordered pairs.
std::vector<std::pair<double, double>> default_survey_times();

// CSV columns: j,k,t,tprime,which,operator_norm,fit_re,fit_im,
// fit_residual.
std::string survey_csv(const std::vector<SurveyRow>& rows);

} // namespace fockbridge
