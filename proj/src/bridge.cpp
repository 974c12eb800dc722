#include "fockbridge/bridge.hpp"

#include <cmath>
#include <stdexcept>

#include "fockbridge/numeric.hpp"

namespace fockbridge {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok)
    throw std::invalid_argument(message);
}

// Per-mode coefficient ladders c[n] = scale * y^n / sqrt(n!), built by the
// stable recurrence c[n] = c[n-1] * y / sqrt(n).
std::vector<cplx> mode_ladder(cplx y, int cutoff, double scale) {
  std::vector<cplx> c(static_cast<std::size_t>(cutoff) + 1);
  c[0] = {scale, 0.0};
  for (int n = 1; n <= cutoff; ++n)
    c[static_cast<std::size_t>(n)] =
        c[static_cast<std::size_t>(n) - 1] * y / std::sqrt(double(n));
  return c;
}

FockVector product_vector(const std::vector<std::vector<cplx>>& ladders,
                          const FockBasis& basis) {
  FockVector v(basis);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::vector<int> occ = basis.occupation(i);
    cplx c{1.0, 0.0};
    for (std::size_t j = 0; j < occ.size(); ++j)
      c *= ladders[j][static_cast<std::size_t>(occ[j])];
    v[i] = c;
  }
  return v;
}

OperatorMatrix normal_matrix(const PhiPiPolynomial& g,
                             const FockBasis& basis) {
  require(g.modes() == basis.modes(),
          "polynomial and basis mode counts differ");
  require(g.degree() <= basis.cutoff(),
          "cutoff " + std::to_string(basis.cutoff()) +
              " is below the polynomial degree " +
              std::to_string(g.degree()));
  return evaluate_matrix(substitute_normal(g), basis);
}

double frobenius(const OperatorMatrix& m) { return m.norm_fro(); }

// Discarding tail mass tau from a unit state perturbs Tr(rho G) by at most
// 2 ||G|| sqrt(tau) (cross terms) plus |value| tau (lost weight); the
// Frobenius norm is the cheap rigorous stand-in for ||G||_2.
double truncation_budget(double tail, double norm_bound, double value) {
  return 2.0 * norm_bound * std::sqrt(tail) + std::abs(value) * tail;
}

double float_budget(const cplx& lhs, const cplx& rhs) {
  return 1e-11 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

void finish_report(EquivalenceReport& r) {
  r.abs_gap = std::abs(r.lhs - r.rhs);
  const double denom = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.rel_gap = denom > 0.0 ? r.abs_gap / denom : 0.0;
  r.passed = r.abs_gap <= r.tolerance();
}

PhiPiPolynomial harmonic_polynomial(int modes) {
  PhiPiPolynomial h(modes);
  for (int j = 1; j <= modes; ++j) {
    std::vector<int> phi2(2 * static_cast<std::size_t>(modes), 0);
    phi2[static_cast<std::size_t>(j) - 1] = 2;
    h.add_term(std::move(phi2), Coeff(Rational(1, 2)));
    std::vector<int> pi2(2 * static_cast<std::size_t>(modes), 0);
    pi2[static_cast<std::size_t>(modes + j) - 1] = 2;
    h.add_term(std::move(pi2), Coeff(Rational(1, 2)));
  }
  return h;
}

} // namespace

double poisson_tail(double lambda, int cutoff) {
  require(lambda >= 0.0, "poisson_tail: lambda must be >= 0");
  require(cutoff >= 0, "poisson_tail: cutoff must be >= 0");
  if (lambda == 0.0)
    return 0.0;
  // First discarded term e^-lambda lambda^(c+1)/(c+1)!, in log space so
  // large cutoffs underflow to 0 instead of overflowing the power.
  const int first = cutoff + 1;
  double log_term =
      -lambda + first * std::log(lambda) - std::lgamma(double(first) + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (int n = first; n < first + 4000; ++n) {
    sum += term;
    term *= lambda / double(n + 1);
    if (term < sum * 1e-18 && n > lambda)
      break;
  }
  return std::min(sum, 1.0);
}

int cutoff_estimate(double max_amplitude, double tolerance) {
  require(tolerance > 0.0 && tolerance < 1.0,
          "cutoff_estimate: tolerance must lie in (0, 1)");
  require(max_amplitude >= 0.0,
          "cutoff_estimate: max_amplitude must be >= 0");
  const double lambda = max_amplitude * max_amplitude;
  int m = 1;
  while (poisson_tail(lambda, m) > tolerance) {
    ++m;
    if (m > 100000)
      throw std::runtime_error("cutoff_estimate: no cutoff below 100000");
  }
  return m;
}

double state_tail_bound(const ClassicalState& s, const FockBasis& basis) {
  const std::vector<cplx> z = coherent_amplitudes(s);
  require(static_cast<int>(z.size()) == basis.modes(),
          "state_tail_bound: state and basis mode counts differ");
  double tail = 0.0;
  for (const cplx& zj : z)
    tail += poisson_tail(std::norm(zj), basis.cutoff());
  return std::min(tail, 1.0);
}

FockVector v_vector(const std::vector<cplx>& y, const FockBasis& basis) {
  require(static_cast<int>(y.size()) == basis.modes(),
          "v_vector: argument and basis mode counts differ");
  std::vector<std::vector<cplx>> ladders;
  ladders.reserve(y.size());
  for (const cplx& yj : y)
    ladders.push_back(mode_ladder(yj, basis.cutoff(), 1.0));
  return product_vector(ladders, basis);
}

FockVector v_vector(const std::vector<double>& phi, const FockBasis& basis) {
  return v_vector(std::vector<cplx>(phi.begin(), phi.end()), basis);
}

std::vector<cplx> coherent_amplitudes(const ClassicalState& s) {
  require(s.phi.size() == s.pi.size(),
          "coherent_amplitudes: phi and pi lengths differ");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cplx> z;
  z.reserve(s.phi.size());
  for (std::size_t j = 0; j < s.phi.size(); ++j)
    z.push_back(cplx{s.phi[j], s.pi[j]} * inv_sqrt2);
  return z;
}

FockVector coherent_vector(const ClassicalState& s, const FockBasis& basis,
                           double max_tail) {
  const double tail = state_tail_bound(s, basis);
  if (tail > max_tail) {
    const std::vector<cplx> z = coherent_amplitudes(s);
    int needed = basis.cutoff();
    double t = tail;
    while (t > max_tail && needed < 100000) {
      ++needed;
      t = 0.0;
      for (const cplx& zj : z)
        t += poisson_tail(std::norm(zj), needed);
    }
    throw std::invalid_argument(
        "coherent_vector: truncated tail " + std::to_string(tail) +
        " at cutoff " + std::to_string(basis.cutoff()) + " exceeds " +
        std::to_string(max_tail) + "; cutoff " + std::to_string(needed) +
        " required");
  }

  std::vector<std::vector<cplx>> ladders;
  for (const cplx& zj : coherent_amplitudes(s))
    ladders.push_back(
        mode_ladder(zj, basis.cutoff(), std::exp(-0.5 * std::norm(zj))));
  FockVector w = product_vector(ladders, basis);
  w *= cplx{1.0 / w.norm(), 0.0};
  return w;
}

FockVector displacement_vector(const ClassicalState& s,
                               const FockBasis& basis) {
  const std::vector<cplx> z = coherent_amplitudes(s);
  require(static_cast<int>(z.size()) == basis.modes(),
          "displacement_vector: state and basis mode counts differ");
  OperatorMatrix gen = OperatorMatrix::zero(basis);
  for (int j = 1; j <= basis.modes(); ++j) {
    const cplx zj = z[static_cast<std::size_t>(j) - 1];
    gen += zj * creation_matrix(j, basis).to_dense();
    gen += -std::conj(zj) * annihilation_matrix(j, basis).to_dense();
  }
  return expm(gen).apply(
      FockVector::ket(basis, std::vector<int>(basis.modes(), 0)));
}

DensityMatrix density_from_ensemble(const Ensemble& e, const FockBasis& basis,
                                    double max_tail) {
  require(!e.samples.empty(), "density_from_ensemble: empty ensemble");
  require(e.weights.size() == e.samples.size(),
          "density_from_ensemble: weights and samples lengths differ");
  double wsum = 0.0;
  for (double w : e.weights) {
    require(w >= 0.0, "density_from_ensemble: negative weight");
    wsum += w;
  }
  require(std::abs(wsum - 1.0) <= 1e-12,
          "density_from_ensemble: weights must sum to 1");

  OperatorMatrix entries = OperatorMatrix::zero(basis);
  std::vector<cplx> comp(basis.dim() * basis.dim());
  double tail = 0.0;
  for (std::size_t k = 0; k < e.samples.size(); ++k) {
    const FockVector w = coherent_vector(e.samples[k], basis, max_tail);
    tail = std::max(tail, state_tail_bound(e.samples[k], basis));
    kern::crank1_herm(entries.dense_data().data(), comp.data(), w.data(),
                      e.weights[k], basis.dim());
  }
  return {basis, std::move(entries), tail};
}

double expect_field(const DensityMatrix& rho, int mode, FieldKind kind,
                    double* imag_residue) {
  require(mode >= 1 && mode <= rho.basis.modes(),
          "expect_field: mode out of range");
  const OperatorMatrix f = kind == FieldKind::phi
                               ? field_phi(mode, rho.basis)
                               : field_pi(mode, rho.basis);
  const cplx tr = trace_product(rho.entries, f);
  if (imag_residue)
    *imag_residue = std::abs(tr.imag());
  return tr.real();
}

cplx expect_normal(const DensityMatrix& rho, const PhiPiPolynomial& g) {
  return trace_product(rho.entries, normal_matrix(g, rho.basis));
}

cplx expect_normal_pure(const FockVector& w, const PhiPiPolynomial& g) {
  const OperatorMatrix gn = normal_matrix(g, w.basis());
  return w.dot(gn.apply(w));
}

OperatorMatrix heisenberg_operator(const PhiPiPolynomial& g,
                                   const HamiltonianSpec& H,
                                   const FockBasis& basis, double t) {
  require(std::isfinite(t), "heisenberg_operator: t must be finite");
  const OperatorMatrix g0 = normal_matrix(g, basis);
  if (t == 0.0)
    return g0;
  const OperatorMatrix hn = normal_matrix(H.h, basis);
  const OperatorMatrix u = expm(cplx{0.0, -t} * hn.to_dense());
  return u.adjoint() * g0 * u;
}

OperatorMatrix heisenberg_operator_ode(const PhiPiPolynomial& g,
                                       const HamiltonianSpec& H,
                                       const FockBasis& basis, double t,
                                       double dt) {
  require(std::isfinite(t) && t >= 0.0,
          "heisenberg_operator_ode: t must be finite and >= 0");
  require(dt > 0.0, "heisenberg_operator_ode: dt must be positive");
  const OperatorMatrix hn = normal_matrix(H.h, basis).to_dense();
  OperatorMatrix gmat = normal_matrix(g, basis).to_dense();

  const auto rhs = [&hn](const OperatorMatrix& m) {
    return cplx{0.0, -1.0} * commutator(m, hn);
  };
  double now = 0.0;
  while (now < t * (1.0 - 1e-15)) {
    const double step = std::min(dt, t - now);
    const OperatorMatrix k1 = rhs(gmat);
    const OperatorMatrix k2 = rhs(gmat + cplx{0.5 * step, 0.0} * k1);
    const OperatorMatrix k3 = rhs(gmat + cplx{0.5 * step, 0.0} * k2);
    const OperatorMatrix k4 = rhs(gmat + cplx{step, 0.0} * k3);
    OperatorMatrix incr = k1 + cplx{2.0, 0.0} * k2;
    incr += cplx{2.0, 0.0} * k3;
    incr += k4;
    gmat += cplx{step / 6.0, 0.0} * incr;
    now = std::min(now + step, t);
  }
  return gmat;
}

EquivalenceReport check_eq6(const Ensemble& e, const HamiltonianSpec& H,
                            int mode, const FockBasis& basis, double fd_step,
                            FieldKind kind, double max_tail) {
  require(fd_step > 0.0, "check_eq6: fd_step must be positive");
  require(mode >= 1 && mode <= basis.modes(),
          "check_eq6: mode out of range");

  const DensityMatrix rho = density_from_ensemble(e, basis, max_tail);
  const OperatorMatrix hn = normal_matrix(H.h, basis);
  const OperatorMatrix f = kind == FieldKind::phi ? field_phi(mode, basis)
                                                  : field_pi(mode, basis);
  const OperatorMatrix comm = commutator(f, hn);
  const cplx lhs = cplx{0.0, -1.0} * trace_product(rho.entries, comm);

  const Var conjugate_var = kind == FieldKind::phi
                                ? Var{Var::Kind::pi, mode}
                                : Var{Var::Kind::phi, mode};
  const PhiPiPolynomial dh = H.h.derivative(conjugate_var);
  const double sign = kind == FieldKind::phi ? 1.0 : -1.0;
  cplx rhs{};
  for (std::size_t k = 0; k < e.samples.size(); ++k)
    rhs += e.weights[k] * sign *
           dh.evaluate(e.samples[k].phi, e.samples[k].pi);

  const PhiPiPolynomial field = PhiPiPolynomial::variable(
      basis.modes(), {kind == FieldKind::phi ? Var::Kind::phi : Var::Kind::pi,
                      mode});
  const cplx plus = trace_product(
      rho.entries, heisenberg_operator(field, H, basis, fd_step));
  const cplx minus = trace_product(
      rho.entries, heisenberg_operator(field, H, basis, -fd_step));
  const double fd = (plus - minus).real() / (2.0 * fd_step);

  EquivalenceReport r;
  r.experiment = std::string("flow-derivative-") +
                 (kind == FieldKind::phi ? "phi" : "pi") + "-mode-" +
                 std::to_string(mode);
  r.lhs = lhs;
  r.rhs = rhs;
  r.float_estimate = float_budget(lhs, rhs);
  r.truncation_estimate =
      truncation_budget(rho.truncation_tail, frobenius(comm), std::abs(lhs));
  r.mc_estimate = 0.0;
  r.fd_gap = std::abs(fd - lhs.real());
  r.modes = basis.modes();
  r.cutoff = basis.cutoff();
  r.seed = e.seed;
  finish_report(r);
  return r;
}

EquivalenceReport eq10_gap(const Ensemble& e, const HamiltonianSpec& H,
                           const PhiPiPolynomial& g, const FockBasis& basis,
                           double t, double dt, double max_tail) {
  require(t >= 0.0, "eq10_gap: t must be >= 0");

  const DensityMatrix rho = density_from_ensemble(e, basis, max_tail);
  const OperatorMatrix gt = heisenberg_operator(g, H, basis, t);
  const cplx lhs = trace_product(rho.entries, gt);

  const Ensemble evolved =
      evolve_ensemble(H, e, t, dt, IntegrationMethod::rk4);
  cplx rhs{};
  for (std::size_t k = 0; k < evolved.samples.size(); ++k)
    rhs += evolved.weights[k] *
           g.evaluate(evolved.samples[k].phi, evolved.samples[k].pi);

  EquivalenceReport r;
  r.experiment = "evolution-extrapolation-t" + std::to_string(t);
  r.lhs = lhs;
  r.rhs = rhs;
  // The classical side carries an O(dt^4) per-unit-time stepping error on
  // top of the shared budgets.
  r.float_estimate = float_budget(lhs, rhs) +
                     10.0 * t * dt * dt * dt * dt * (1.0 + std::abs(rhs));
  r.truncation_estimate =
      truncation_budget(rho.truncation_tail, frobenius(gt), std::abs(lhs));
  r.mc_estimate = 0.0;
  r.modes = basis.modes();
  r.cutoff = basis.cutoff();
  r.seed = e.seed;
  finish_report(r);
  return r;
}

double zero_point_gap(const FockBasis& basis) {
  const PhiPiPolynomial h = harmonic_polynomial(basis.modes());
  OperatorPolynomial diff = substitute_symmetric(h);
  diff += Coeff(Rational(-1)) * substitute_normal(h);
  const OperatorMatrix d = evaluate_matrix(diff, basis);
  return d.at(0, 0).real();
}

double zero_point_gap(const FockBasis& basis, const DensityMatrix& rho) {
  const PhiPiPolynomial h = harmonic_polynomial(basis.modes());
  OperatorPolynomial diff = substitute_symmetric(h);
  diff += Coeff(Rational(-1)) * substitute_normal(h);
  const OperatorMatrix d = evaluate_matrix(diff, basis);
  return trace_product(rho.entries, d).real();
}

} // namespace fockbridge
