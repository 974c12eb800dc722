#include "fockbridge/extended.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "fockbridge/bridge.hpp"
#include "fockbridge/numeric.hpp"
#include "fockbridge/symbolic.hpp"

namespace fockbridge {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok)
    throw std::invalid_argument(message);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Ladder terms of one block mode, as an expression over the full space.
OperatorExpr block_sum(const DoubledBasis& basis, int mode, Coeff ca,
                       Coeff cad, Coeff cb, Coeff cbd) {
  const int n = basis.full.modes();
  OperatorExpr e(n);
  e += ca * OperatorExpr::annihilate(n, mode);
  e += cad * OperatorExpr::create(n, mode);
  e += cb * OperatorExpr::annihilate(n, basis.b_mode(mode));
  e += cbd * OperatorExpr::create(n, basis.b_mode(mode));
  return e;
}

} // namespace

DoubledBasis::DoubledBasis(int modes, int cutoff)
    : modes(modes), full(2 * modes, cutoff) {
  require(modes >= 1, "DoubledBasis: modes must be at least 1");
}

FockVector extended_coherent_vector(const ClassicalState& s,
                                    const DoubledBasis& basis,
                                    double* norm_out, double max_tail) {
  require(static_cast<int>(s.phi.size()) == basis.modes &&
              static_cast<int>(s.pi.size()) == basis.modes,
          "extended_coherent_vector: state size does not match basis modes");

  const std::vector<cplx> z = coherent_amplitudes(s);
  // Both blocks carry the same per-mode amplitude magnitude, so each
  // contributes the same Poisson tail.
  const auto tail_at = [&](int cutoff) {
    double t = 0.0;
    for (const cplx& zj : z)
      t += 2.0 * poisson_tail(std::norm(zj), cutoff);
    return t;
  };
  const double tail = tail_at(basis.full.cutoff());
  if (tail > max_tail) {
    int needed = basis.full.cutoff();
    double t = tail;
    while (t > max_tail && needed < 1000) {
      ++needed;
      t = tail_at(needed);
    }
    throw std::invalid_argument(
        "extended_coherent_vector: truncated tail " + std::to_string(tail) +
        " at cutoff " + std::to_string(basis.full.cutoff()) + " exceeds " +
        std::to_string(max_tail) + "; cutoff " + std::to_string(needed) +
        " required");
  }

  std::vector<cplx> y(2 * basis.modes);
  double s_sum = 0.0;
  for (int j = 0; j < basis.modes; ++j) {
    y[j] = z[j];
    y[basis.modes + j] = std::conj(z[j]);
    s_sum += s.phi[j] * s.phi[j] + s.pi[j] * s.pi[j];
  }

  FockVector w = v_vector(y, basis.full);
  w *= cplx{std::exp(-s_sum / std::sqrt(2.0)), 0.0};
  if (norm_out)
    *norm_out = w.norm();
  return w;
}

ExtendedFieldOps extended_field_ops(int mode, const DoubledBasis& basis) {
  require(mode >= 1 && mode <= basis.modes,
          "extended_field_ops: mode out of range");
  // 1/(2 sqrt2) = sqrt2/4 and 1/(2i sqrt2) = -i sqrt2/4, both exact.
  const Coeff q{QSqrt2{Rational{}, Rational{1, 4}}};
  const Coeff p{QSqrt2{}, QSqrt2{Rational{}, Rational{-1, 4}}};
  const OperatorExpr phi = block_sum(basis, mode, q, q, q, q);
  const OperatorExpr pi =
      block_sum(basis, mode, p, Coeff{Rational{-1}} * p,
                Coeff{Rational{-1}} * p, p);
  return {evaluate_matrix(phi, basis.full), evaluate_matrix(pi, basis.full)};
}

OperatorMatrix g0_operator(const DoubledBasis& basis, G0Reading reading) {
  const FockBasis& full = basis.full;
  OperatorMatrix g = OperatorMatrix::zero(full, OperatorMatrix::Storage::dense);
  for (int j = 1; j <= basis.modes; ++j) {
    const int b = basis.b_mode(j);
    if (reading == G0Reading::literal) {
      g += annihilation_matrix(j, full).to_dense() *
           creation_matrix(j, full).to_dense();
      g -= annihilation_matrix(b, full).to_dense() *
           creation_matrix(b, full).to_dense();
    } else {
      g += number_matrix(j, full).to_dense();
      g -= number_matrix(b, full).to_dense();
    }
  }
  return g;
}

OperatorMatrix interaction_picture(const OperatorMatrix& a,
                                   const DoubledBasis& basis, double t) {
  require(a.dim() == basis.full.dim(),
          "interaction_picture: operator dimension does not match basis");
  if (t == 0.0)
    return a;
  const OperatorMatrix g0 = g0_operator(basis);
  const OperatorMatrix u = expm(cplx{0.0, -t} * g0);
  return u * a * u.adjoint();
}

std::vector<SurveyRow> commutator_survey(
    const DoubledBasis& basis,
    const std::vector<std::pair<double, double>>& times) {
  const OperatorMatrix proj = interior_projector(basis.full, 1);
  double rank = 0.0;
  for (std::size_t i = 0; i < basis.full.dim(); ++i)
    rank += proj.at(i, i).real();
  require(rank > 0.0, "commutator_survey: interior subspace is empty");

  // Every row reuses the picture-rotated fields for its two times, so the
  // conjugations are cached per (mode, time).
  std::map<std::pair<int, double>, ExtendedFieldOps> rotated;
  const auto fields_at = [&](int mode, double t) -> const ExtendedFieldOps& {
    const auto key = std::make_pair(mode, t);
    auto it = rotated.find(key);
    if (it == rotated.end()) {
      ExtendedFieldOps ops = extended_field_ops(mode, basis);
      it = rotated
               .emplace(key, ExtendedFieldOps{
                                 interaction_picture(ops.phi, basis, t),
                                 interaction_picture(ops.pi, basis, t)})
               .first;
    }
    return it->second;
  };

  std::vector<SurveyRow> rows;
  for (const auto& [t, tprime] : times) {
    for (int j = 1; j <= basis.modes; ++j) {
      for (int k = 1; k <= basis.modes; ++k) {
        const ExtendedFieldOps& left = fields_at(j, t);
        const ExtendedFieldOps& right = fields_at(k, tprime);
        const std::array<std::pair<const char*,
                                   std::pair<const OperatorMatrix*,
                                             const OperatorMatrix*>>,
                         3>
            combos{{{"qq", {&left.phi, &right.phi}},
                    {"qp", {&left.phi, &right.pi}},
                    {"pp", {&left.pi, &right.pi}}}};
        for (const auto& [which, ab] : combos) {
          const OperatorMatrix c = commutator(*ab.first, *ab.second);
          const OperatorMatrix pcp = proj * c * proj;
          // i [A, B] is Hermitian for Hermitian A, B, so the two-norm
          // comes from the Hermitian power iteration.
          const double norm = norm_two_hermitian(cplx{0.0, 1.0} * pcp);
          const cplx fit = pcp.trace() / rank;
          OperatorMatrix defect = pcp;
          defect -= fit * proj;
          rows.push_back({j, k, t, tprime, which, norm, fit,
                          defect.norm_fro()});
        }
      }
    }
  }
  return rows;
}

std::vector<std::pair<double, double>> default_survey_times() {
  const double grid[] = {0.0, 0.25, 0.5, 1.0};
  std::vector<std::pair<double, double>> times;
  for (double t : grid)
    for (double tprime : grid)
      times.emplace_back(t, tprime);
  return times;
}

std::string survey_csv(const std::vector<SurveyRow>& rows) {
  std::string out =
      "j,k,t,tprime,which,operator_norm,fit_re,fit_im,fit_residual\n";
  for (const SurveyRow& r : rows) {
    out += std::to_string(r.j) + "," + std::to_string(r.k) + "," +
           format_double(r.t) + "," + format_double(r.tprime) + "," +
           r.which + "," + format_double(r.operator_norm) + "," +
           format_double(r.fit.real()) + "," + format_double(r.fit.imag()) +
           "," + format_double(r.fit_residual) + "\n";
  }
  return out;
}

} // namespace fockbridge
