#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fockbridge/bridge.hpp"
#include "fockbridge/numeric.hpp"

using namespace fockbridge;

namespace {

PhiPiPolynomial harmonic_poly(int modes) {
  PhiPiPolynomial h(modes);
  for (int j = 1; j <= modes; ++j) {
    std::vector<int> p2(2 * static_cast<std::size_t>(modes), 0);
    p2[static_cast<std::size_t>(j) - 1] = 2;
    h.add_term(std::move(p2), Coeff(Rational(1, 2)));
    std::vector<int> q2(2 * static_cast<std::size_t>(modes), 0);
    q2[static_cast<std::size_t>(modes + j) - 1] = 2;
    h.add_term(std::move(q2), Coeff(Rational(1, 2)));
  }
  return h;
}

HamiltonianSpec harmonic(int modes) { return {modes, harmonic_poly(modes)}; }

HamiltonianSpec quartic(int modes, const Rational& lambda) {
  PhiPiPolynomial h = harmonic_poly(modes);
  for (int j = 1; j <= modes; ++j) {
    std::vector<int> p4(2 * static_cast<std::size_t>(modes), 0);
    p4[static_cast<std::size_t>(j) - 1] = 4;
    h.add_term(std::move(p4), Coeff(lambda));
  }
  return {modes, h};
}

PhiPiPolynomial monomial(int modes, std::vector<int> exps, Coeff c) {
  PhiPiPolynomial g(modes);
  g.add_term(std::move(exps), c);
  return g;
}

// Random state with every |z_j| <= amp.
ClassicalState random_state(int modes, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.0, amp);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  ClassicalState s;
  for (int j = 0; j < modes; ++j) {
    const double r = radius(rng) * std::sqrt(2.0);
    const double a = angle(rng);
    s.phi.push_back(r * std::cos(a));
    s.pi.push_back(r * std::sin(a));
  }
  return s;
}

PhiPiPolynomial random_poly(int modes, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_int_distribution<int> slot(0, 2 * modes - 1);
  std::uniform_int_distribution<int> num(-3, 3);
  PhiPiPolynomial g(modes);
  for (int t = 0; t < 4; ++t) {
    std::vector<int> exps(2 * static_cast<std::size_t>(modes), 0);
    const int d = deg(rng);
    for (int i = 0; i < d; ++i)
      exps[static_cast<std::size_t>(slot(rng))] += 1;
    g.add_term(std::move(exps), Coeff(Rational(num(rng), 2)));
  }
  return g;
}

double brute_poisson_tail(double lambda, int cutoff) {
  double kept = 0.0, term = std::exp(-lambda);
  for (int n = 0; n <= cutoff; ++n) {
    kept += term;
    term *= lambda / double(n + 1);
  }
  return 1.0 - kept;
}

} // namespace

TEST_CASE("cutoff estimation follows the occupation tail") {
  CHECK(cutoff_estimate(0.0, 1e-12) == 1);
  CHECK_THROWS_AS(cutoff_estimate(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cutoff_estimate(1.0, 1.0), std::invalid_argument);

  for (double lambda : {0.25, 1.0, 2.25}) {
    for (int m : {1, 3, 8, 15})
      CHECK(std::abs(poisson_tail(lambda, m) - brute_poisson_tail(lambda, m)) <=
            1e-13);
    const int m = cutoff_estimate(std::sqrt(lambda), 1e-10);
    CHECK(poisson_tail(lambda, m) <= 1e-10);
    CHECK((m == 1 || poisson_tail(lambda, m - 1) > 1e-10));
  }

  int prev = 0;
  for (double amp : {0.0, 0.3, 0.7, 1.0, 1.3, 1.5, 2.0}) {
    const int m = cutoff_estimate(amp, 1e-10);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("generating vector coefficients and norm") {
  const FockBasis basis(1, 6);
  const FockVector zero = v_vector(std::vector<double>{0.0}, basis);
  CHECK(zero[0] == cplx{1.0, 0.0});
  for (std::size_t i = 1; i < basis.dim(); ++i)
    CHECK(zero[i] == cplx{0.0, 0.0});

  const FockVector one = v_vector(std::vector<double>{1.0}, basis);
  CHECK(std::abs(one[0] - 1.0) == 0.0);
  CHECK(std::abs(one[1] - 1.0) == 0.0);
  CHECK(std::abs(one[2] - 1.0 / std::sqrt(2.0)) <= 1e-16);
  CHECK(std::abs(one[3] - 1.0 / std::sqrt(6.0)) <= 1e-16);

  CHECK_THROWS_AS(v_vector(std::vector<double>{1.0, 2.0}, basis),
                  std::invalid_argument);

  std::mt19937_64 rng(7);
  const int m = cutoff_estimate(1.5, 1e-12);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int modes = 1 + static_cast<int>(rng() % 2);
    const FockBasis b(modes, m);
    std::vector<cplx> y;
    double lambda = 0.0, tail = 0.0;
    for (int j = 0; j < modes; ++j) {
      cplx yj{coord(rng), coord(rng)};
      yj *= 1.5 / std::max(1.0, std::abs(yj));
      y.push_back(yj);
      lambda += std::norm(yj);
      tail += poisson_tail(std::norm(yj), m);
    }
    const double want = std::exp(lambda);
    const double got = v_vector(y, b).squared_norm();
    CHECK(std::abs(got - want) <= want * (2.0 * tail + 1e-12));
    CHECK(std::abs(got - want) <= want * 1e-9);
  }
}

TEST_CASE("coherent states are unit eigenvector candidates") {
  const int m = cutoff_estimate(1.5, 1e-10);
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 30; ++rep) {
    const int modes = 1 + static_cast<int>(rng() % 2);
    const FockBasis basis(modes, m);
    const ClassicalState s = random_state(modes, 1.5, rng);
    const FockVector w = coherent_vector(s, basis);
    CHECK(std::abs(w.norm() - 1.0) <= 1e-14);

    const std::vector<cplx> z = coherent_amplitudes(s);
    for (int j = 1; j <= modes; ++j) {
      const cplx zj = z[static_cast<std::size_t>(j) - 1];
      FockVector zw = w;
      zw *= zj;
      const FockVector r = annihilation_matrix(j, basis).apply(w) - zw;

      // The defect of the truncated eigenvalue relation lives entirely on
      // kets with occupation N_j at the cutoff; off the boundary the two
      // sides cancel to roundoff.
      double interior_sq = 0.0;
      double full_sq = 0.0;
      for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double p = std::norm(r[i]);
        full_sq += p;
        if (basis.occupation(i)[static_cast<std::size_t>(j) - 1] < m)
          interior_sq += p;
      }
      CHECK(std::sqrt(interior_sq) <= 1e-12);
      CHECK(std::sqrt(full_sq) <=
            std::abs(zj) * std::sqrt(poisson_tail(std::norm(zj), m - 1)) +
                1e-12);
    }
  }

  const FockBasis vac_basis(2, 3);
  const FockVector vac = coherent_vector({{0.0, 0.0}, {0.0, 0.0}}, vac_basis);
  CHECK(vac[0] == cplx{1.0, 0.0});
  for (std::size_t i = 1; i < vac_basis.dim(); ++i)
    CHECK(vac[i] == cplx{0.0, 0.0});

  const FockBasis tiny(1, 2);
  CHECK_THROWS_WITH_AS(coherent_vector({{3.0}, {0.0}}, tiny, 1e-10),
                       doctest::Contains("required"), std::invalid_argument);
}

TEST_CASE("displacement construction agrees with the closed form") {
  const int m = cutoff_estimate(1.5, 1e-12);
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 6; ++rep) {
    const int modes = 1 + (rep % 2);
    const FockBasis basis(modes, m);
    const ClassicalState s = random_state(modes, 1.5, rng);
    const FockVector d = displacement_vector(s, basis);
    CHECK(std::abs(d.norm() - 1.0) <= 1e-10);
    const FockVector w = coherent_vector(s, basis);
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i)
      diff_sq += std::norm(d[i] - w[i]);
    CHECK(std::sqrt(diff_sq) <= 1e-8);
  }

  const FockBasis basis(1, 5);
  const FockVector d0 = displacement_vector({{0.0}, {0.0}}, basis);
  CHECK(std::abs(d0[0] - 1.0) <= 1e-15);
}

TEST_CASE("density matrices from ensembles") {
  const FockBasis basis(1, 10);
  DistributionSpec spec;
  spec.kind = DistributionSpec::Kind::product_gaussian;
  spec.mean = {0.8, 0.0};
  spec.stddev = {0.3, 0.3};
  spec.seed = 31;
  const Ensemble e = sample_ensemble(spec, 40);
  const DensityMatrix rho = density_from_ensemble(e, basis);

  CHECK(rho.entries.is_hermitian(1e-12));
  CHECK(std::abs(rho.entries.trace().real() - 1.0) <=
        rho.truncation_tail + 1e-12);
  CHECK(hermitian_eigenvalues(rho.entries).front() >= -1e-10);

  // Accumulation is order independent.
  Ensemble shuffled = e;
  std::mt19937_64 perm_rng(5);
  std::vector<std::size_t> order(e.samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), perm_rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.samples[i] = e.samples[order[i]];
    shuffled.weights[i] = e.weights[order[i]];
  }
  const DensityMatrix rho2 = density_from_ensemble(shuffled, basis);
  CHECK((rho.entries - rho2.entries).max_abs() <= 1e-12);

  // Pure state: rank-1 projector.
  DistributionSpec delta;
  delta.kind = DistributionSpec::Kind::delta_at_state;
  delta.mean = {1.0, -0.5};
  const Ensemble pure = sample_ensemble(delta, 1);
  const DensityMatrix rho_pure = density_from_ensemble(pure, basis);
  const auto ev = hermitian_eigenvalues(rho_pure.entries);
  CHECK(std::abs(ev.back() - 1.0) <= 1e-10);
  for (std::size_t i = 0; i + 1 < ev.size(); ++i)
    CHECK(std::abs(ev[i]) <= 1e-10);

  // Vacuum delta: |0><0| exactly.
  DistributionSpec vac;
  vac.kind = DistributionSpec::Kind::delta_at_state;
  vac.mean = {0.0, 0.0};
  const DensityMatrix rho_vac =
      density_from_ensemble(sample_ensemble(vac, 3), basis);
  CHECK(rho_vac.entries.at(0, 0) == cplx{1.0, 0.0});
  CHECK(rho_vac.entries.max_abs() == 1.0);
  CHECK(rho_vac.entries.norm_fro() == 1.0);

  Ensemble bad = pure;
  bad.weights = {0.5};
  CHECK_THROWS_AS(density_from_ensemble(bad, basis), std::invalid_argument);

  const FockBasis tiny(1, 2);
  CHECK_THROWS_AS(density_from_ensemble(e, tiny, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("field expectations read off the phase-space point") {
  const FockBasis basis(1, cutoff_estimate(1.46, 1e-12));
  DistributionSpec delta;
  delta.kind = DistributionSpec::Kind::delta_at_state;
  delta.mean = {1.25, -0.5};
  const DensityMatrix rho =
      density_from_ensemble(sample_ensemble(delta, 1), basis);

  double residue = -1.0;
  CHECK(std::abs(expect_field(rho, 1, FieldKind::phi, &residue) - 1.25) <=
        1e-8);
  CHECK(residue <= 1e-10);
  CHECK(std::abs(expect_field(rho, 1, FieldKind::pi) + 0.5) <= 1e-8);

  DistributionSpec vac;
  vac.kind = DistributionSpec::Kind::delta_at_state;
  vac.mean = {0.0, 0.0};
  const DensityMatrix rho_vac =
      density_from_ensemble(sample_ensemble(vac, 1), basis);
  CHECK(std::abs(expect_field(rho_vac, 1)) <= 1e-14);

  CHECK_THROWS_AS(expect_field(rho, 2), std::invalid_argument);

  // The identity holds samplewise, so an ensemble average carries no Monte
  // Carlo error against the empirical mean.
  DistributionSpec gauss;
  gauss.kind = DistributionSpec::Kind::product_gaussian;
  gauss.mean = {0.4, -0.2};
  gauss.stddev = {0.25, 0.25};
  gauss.seed = 8;
  const Ensemble e = sample_ensemble(gauss, 200);
  const DensityMatrix rho_e = density_from_ensemble(e, basis);
  double mean_phi = 0.0;
  for (std::size_t k = 0; k < e.samples.size(); ++k)
    mean_phi += e.weights[k] * e.samples[k].phi[0];
  CHECK(std::abs(expect_field(rho_e, 1) - mean_phi) <= 1e-8);
}

TEST_CASE("normal-substituted expectations match classical values") {
  const FockBasis basis(1, cutoff_estimate(1.46, 1e-12));
  DistributionSpec delta;
  delta.kind = DistributionSpec::Kind::delta_at_state;
  delta.mean = {1.25, -0.5};
  const DensityMatrix rho =
      density_from_ensemble(sample_ensemble(delta, 1), basis);

  const PhiPiPolynomial one =
      PhiPiPolynomial::constant(1, Coeff(Rational(1)));
  CHECK(std::abs(expect_normal(rho, one) - cplx{1.0, 0.0}) <=
        rho.truncation_tail + 1e-12);

  const PhiPiPolynomial phi2 = monomial(1, {2, 0}, Coeff(Rational(1)));
  CHECK(std::abs(expect_normal(rho, phi2) - cplx{1.5625, 0.0}) <= 1e-8);

  const FockBasis tiny(1, 1);
  DensityMatrix rho_tiny{
      tiny, OperatorMatrix::identity(tiny), 0.0};
  CHECK_THROWS_AS(expect_normal(rho_tiny, phi2), std::invalid_argument);
}

TEST_CASE("pure-state expectations hold samplewise") {
  std::mt19937_64 rng(47);
  const FockBasis basis(2, 16);
  for (int rep = 0; rep < 40; ++rep) {
    const ClassicalState s = random_state(2, 1.0, rng);
    const FockVector w = coherent_vector(s, basis, 1e-8);
    const PhiPiPolynomial g = random_poly(2, rng);
    const cplx got = expect_normal_pure(w, g);
    const cplx want = g.evaluate(s.phi, s.pi);
    const double tail = state_tail_bound(s, basis);
    CHECK(std::abs(got - want) <= 1e-8 + 40.0 * std::sqrt(tail));
    CHECK(std::abs(got.imag()) <= 1e-8);
  }

  // Linearity in g at a fixed state.
  const ClassicalState s = random_state(2, 0.9, rng);
  const FockVector w = coherent_vector(s, basis, 1e-8);
  const PhiPiPolynomial g1 = random_poly(2, rng);
  const PhiPiPolynomial g2 = random_poly(2, rng);
  const cplx sum = expect_normal_pure(w, g1 + g2);
  CHECK(std::abs(sum - expect_normal_pure(w, g1) -
                 expect_normal_pure(w, g2)) <= 1e-12);
}

TEST_CASE("ladder identity between field matrices") {
  // (Phi_j + i Pi_j)/sqrt2 reduces to a_j with exact coefficients, so the
  // matrices agree bitwise at any cutoff.
  for (int modes : {1, 2}) {
    OperatorExpr combo = phi_expr(modes, 1) + Coeff::i() * pi_expr(modes, 1);
    combo *= Coeff::inv_sqrt2();
    const OperatorPolynomial reduced = rewrite_to_normal_form(combo);
    OperatorPolynomial want(modes);
    want.add_term({{1, false}}, Coeff(Rational(1)));
    CHECK(reduced == want);

    const FockBasis basis(modes, 7);
    CHECK((evaluate_matrix(reduced, basis).to_dense() -
           annihilation_matrix(1, basis).to_dense())
              .max_abs() == 0.0);
  }
}

TEST_CASE("conjugation flow solves the operator equation of motion") {
  const FockBasis basis(1, 12);
  const HamiltonianSpec h = harmonic(1);
  const PhiPiPolynomial phi1 = monomial(1, {1, 0}, Coeff(Rational(1)));

  const OperatorMatrix g0 = heisenberg_operator(phi1, h, basis, 0.0);
  CHECK((g0.to_dense() - field_phi(1, basis).to_dense()).max_abs() == 0.0);

  for (double t : {0.3, 0.7, 2.0}) {
    const OperatorMatrix gt = heisenberg_operator(phi1, h, basis, t);
    const OperatorMatrix want =
        cplx{std::cos(t), 0.0} * field_phi(1, basis).to_dense() +
        cplx{std::sin(t), 0.0} * field_pi(1, basis).to_dense();
    CHECK((gt - want).max_abs() <= 1e-10);
  }

  // The Hamiltonian itself is a fixed point of its own flow.
  const HamiltonianSpec q = quartic(1, Rational(1, 10));
  const OperatorMatrix q0 = heisenberg_operator(q.h, q, basis, 0.0);
  const OperatorMatrix qt = heisenberg_operator(q.h, q, basis, 1.3);
  CHECK((qt - q0.to_dense()).max_abs() <= 1e-10);

  // Unitary conjugation preserves spectra.
  const PhiPiPolynomial phi2 = monomial(1, {2, 0}, Coeff(Rational(1)));
  const auto ev0 = hermitian_eigenvalues(heisenberg_operator(phi2, q, basis, 0.0));
  const auto evt = hermitian_eigenvalues(heisenberg_operator(phi2, q, basis, 0.9));
  REQUIRE(ev0.size() == evt.size());
  for (std::size_t i = 0; i < ev0.size(); ++i)
    CHECK(std::abs(ev0[i] - evt[i]) <= 1e-8);

  // Direct integration of the equation of motion cross-validates the
  // conjugation path.
  const OperatorMatrix ode =
      heisenberg_operator_ode(phi2, q, basis, 0.7, 2e-4);
  const OperatorMatrix conj = heisenberg_operator(phi2, q, basis, 0.7);
  CHECK((ode - conj).max_abs() <= 1e-8);
}

TEST_CASE("flow-derivative identity at t = 0") {
  const FockBasis basis(1, cutoff_estimate(1.2, 1e-12));
  DistributionSpec d10;
  d10.kind = DistributionSpec::Kind::delta_at_state;
  d10.mean = {1.0, 0.0};
  const Ensemble pure10 = sample_ensemble(d10, 1);

  const EquivalenceReport zero =
      check_eq6(pure10, harmonic(1), 1, basis, 1e-4);
  CHECK(std::abs(zero.lhs) <= zero.tolerance());
  CHECK(std::abs(zero.rhs) <= 1e-14);
  CHECK(zero.passed);

  DistributionSpec d01;
  d01.kind = DistributionSpec::Kind::delta_at_state;
  d01.mean = {0.0, 1.0};
  const Ensemble pure01 = sample_ensemble(d01, 1);
  const EquivalenceReport unit =
      check_eq6(pure01, harmonic(1), 1, basis, 1e-4);
  CHECK(std::abs(unit.lhs - cplx{1.0, 0.0}) <= 1e-6);
  CHECK(std::abs(unit.rhs - cplx{1.0, 0.0}) <= 1e-14);
  CHECK(unit.abs_gap <= 1e-6);
  CHECK(unit.fd_gap <= 1e-6);
  CHECK(unit.passed);

  // Conjugate-variable form on the same state: lhs = rhs = -1.
  const EquivalenceReport conj =
      check_eq6(pure10, harmonic(1), 1, basis, 1e-4, FieldKind::pi);
  CHECK(std::abs(conj.lhs - cplx{-1.0, 0.0}) <= 1e-6);
  CHECK(std::abs(conj.rhs - cplx{-1.0, 0.0}) <= 1e-14);
  CHECK(conj.fd_gap <= 1e-6);
  CHECK(conj.passed);

  // Anharmonic flow over an ensemble, both field kinds.
  DistributionSpec gauss;
  gauss.kind = DistributionSpec::Kind::product_gaussian;
  gauss.mean = {0.6, -0.3};
  gauss.stddev = {0.2, 0.2};
  gauss.seed = 11;
  const Ensemble e = sample_ensemble(gauss, 100);
  const HamiltonianSpec q = quartic(1, Rational(1, 10));
  const FockBasis qbasis(1, cutoff_estimate(1.4, 1e-12));
  for (FieldKind kind : {FieldKind::phi, FieldKind::pi}) {
    const EquivalenceReport r = check_eq6(e, q, 1, qbasis, 1e-4, kind);
    CHECK(r.abs_gap <= 1e-6 + r.truncation_estimate);
    CHECK(r.fd_gap <= 1e-6);
    CHECK(r.passed);
  }

  // Complex-chart combination: the phi and pi reports assemble the
  // annihilator's flow identity <zdot> = -i Tr(rho [a, H_n]).
  const EquivalenceReport rp = check_eq6(e, q, 1, qbasis, 1e-4);
  const EquivalenceReport rq =
      check_eq6(e, q, 1, qbasis, 1e-4, FieldKind::pi);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cplx lhs_z = (rp.lhs + cplx{0.0, 1.0} * rq.lhs) * inv_sqrt2;
  const cplx rhs_z = (rp.rhs + cplx{0.0, 1.0} * rq.rhs) * inv_sqrt2;
  CHECK(std::abs(lhs_z - rhs_z) <= 1e-6 + rp.truncation_estimate +
                                       rq.truncation_estimate);
}

TEST_CASE("evolution extrapolation gap") {
  DistributionSpec delta;
  delta.kind = DistributionSpec::Kind::delta_at_state;
  delta.mean = {1.0, 0.4};
  const Ensemble pure = sample_ensemble(delta, 1);
  const PhiPiPolynomial phi2 = monomial(1, {2, 0}, Coeff(Rational(1)));
  const FockBasis basis(1, cutoff_estimate(1.3, 1e-12));

  const EquivalenceReport at0 =
      eq10_gap(pure, harmonic(1), phi2, basis, 0.0, 1e-3);
  CHECK(at0.abs_gap <= at0.tolerance());

  // Quadratic flow preserves the correspondence at any t.
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const PhiPiPolynomial g = random_poly(1, rng);
    const EquivalenceReport r =
        eq10_gap(pure, harmonic(1), g, basis, 0.7, 1e-3);
    CHECK(r.abs_gap <= 1e-6);
    CHECK(r.passed);
  }

  // The anharmonic flow does not: the gap is a physical effect an order
  // of magnitude above the numerical budget.
  DistributionSpec wide;
  wide.kind = DistributionSpec::Kind::delta_at_state;
  wide.mean = {1.5, 0.0};
  const Ensemble pure15 = sample_ensemble(wide, 1);
  const FockBasis qbasis(1, cutoff_estimate(1.5, 1e-12) + 4);
  const EquivalenceReport q = eq10_gap(pure15, quartic(1, Rational(1, 10)),
                                       phi2, qbasis, 1.0, 1e-3);
  CHECK(q.abs_gap > 10.0 * q.tolerance());
  CHECK_FALSE(q.passed);
}

TEST_CASE("ordering gap of the harmonic Hamiltonian") {
  CHECK(zero_point_gap(FockBasis(1, 4)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(zero_point_gap(FockBasis(2, 3)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zero_point_gap(FockBasis(3, 3)) == doctest::Approx(1.5).epsilon(1e-14));

  // Independent of the state the trace is taken in.
  const FockBasis basis(1, 12);
  DistributionSpec delta;
  delta.kind = DistributionSpec::Kind::delta_at_state;
  delta.mean = {1.0, 0.0};
  const DensityMatrix rho =
      density_from_ensemble(sample_ensemble(delta, 1), basis);
  CHECK(std::abs(zero_point_gap(basis, rho) - zero_point_gap(basis)) <=
        1e-10);
}
