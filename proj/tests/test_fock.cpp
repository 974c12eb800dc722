#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fockbridge/fock.hpp"

using namespace fockbridge;

namespace {

OperatorMatrix random_dense(const FockBasis& basis, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  OperatorMatrix m = OperatorMatrix::zero(basis);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      m.set(i, j, {dist(rng), dist(rng)});
  return m;
}

double max_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix d = a.to_dense();
  d -= b.to_dense();
  return d.max_abs();
}

} // namespace

TEST_CASE("basis dimensions") {
  CHECK(basis_dim(1, 3) == 4);
  CHECK(basis_dim(2, 2) == 9);
  CHECK(basis_dim(3, 1) == 8);
  CHECK_THROWS_AS(basis_dim(64, 3), std::overflow_error);
  CHECK_THROWS_AS(basis_dim(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(basis_dim(1, 0), std::invalid_argument);
}

TEST_CASE("enumeration is lexicographic with mode 1 slowest") {
  const FockBasis basis(3, 2);
  CHECK(basis.dim() == 27);
  CHECK(basis.index({0, 0, 0}) == 0);
  CHECK(basis.index({0, 0, 1}) == 1);
  CHECK(basis.index({0, 1, 0}) == 3);
  CHECK(basis.index({1, 0, 0}) == 9);
  CHECK(basis.index({2, 1, 2}) == 2 * 9 + 1 * 3 + 2);
  for (std::size_t idx = 0; idx < basis.dim(); ++idx)
    CHECK(basis.index(basis.occupation(idx)) == idx);
  CHECK_THROWS(basis.index({3, 0, 0}));
  CHECK_THROWS(basis.occupation(27));
}

TEST_CASE("vector norms and kets") {
  const FockBasis basis(2, 2);
  FockVector v = FockVector::ket(basis, {1, 2});
  CHECK(v.squared_norm() == 1.0);
  CHECK(v[basis.index({1, 2})] == cplx{1.0, 0.0});
  v *= cplx{0.0, 2.0};
  CHECK(v.squared_norm() == 4.0);
  FockVector w = FockVector::ket(basis, {0, 0});
  CHECK(std::abs(v.dot(w)) == 0.0);
  w += v;
  CHECK(w.squared_norm() == doctest::Approx(5.0));
}

TEST_CASE("ladder matrices act with sqrt amplitudes") {
  const FockBasis basis(1, 3);
  const OperatorMatrix a = annihilation_matrix(1, basis);
  const OperatorMatrix ad = creation_matrix(1, basis);

  FockVector two = FockVector::ket(basis, {2});
  FockVector lowered = a.apply(two);
  CHECK(std::abs(lowered[basis.index({1})] - std::sqrt(2.0)) < 1e-15);
  CHECK(lowered.squared_norm() == doctest::Approx(2.0));

  CHECK(a.apply(FockVector::ket(basis, {0})).norm() == 0.0);
  CHECK(ad.apply(FockVector::ket(basis, {3})).norm() == 0.0);

  FockVector raised = ad.apply(FockVector::ket(basis, {0}));
  CHECK(std::abs(raised[basis.index({1})] - 1.0) == 0.0);

  // Adjacent band of a^+ carries 1, sqrt2, sqrt3; a^+ is the exact adjoint.
  for (int n = 0; n < 3; ++n)
    CHECK(ad.at(static_cast<std::size_t>(n + 1), static_cast<std::size_t>(n)) ==
          cplx{std::sqrt(static_cast<double>(n + 1)), 0.0});
  CHECK(max_diff(ad, a.adjoint()) == 0.0);
  CHECK(max_diff(ad.adjoint(), a) == 0.0);
}

TEST_CASE("multimode creation targets the right mode") {
  const FockBasis basis(3, 3);
  const OperatorMatrix ad2 = creation_matrix(2, basis);
  FockVector v = ad2.apply(FockVector::ket(basis, {1, 1, 0}));
  CHECK(std::abs(v[basis.index({1, 2, 0})] - std::sqrt(2.0)) < 1e-15);
  CHECK(v.squared_norm() == doctest::Approx(2.0));
}

TEST_CASE("number operator") {
  const FockBasis basis(1, 3);
  const OperatorMatrix n =
      creation_matrix(1, basis) * annihilation_matrix(1, basis);
  const OperatorMatrix n_direct = number_matrix(1, basis);
  CHECK(max_diff(n, n_direct) < 1e-15);
  CHECK(n_direct.trace() == cplx{6.0, 0.0});

  const FockBasis b3(3, 3);
  FockVector v = number_matrix(2, b3).apply(FockVector::ket(b3, {1, 2, 0}));
  CHECK(v[b3.index({1, 2, 0})] == cplx{2.0, 0.0});
  CHECK(number_matrix(1, b3).apply(FockVector::ket(b3, {0, 0, 0})).norm() ==
        0.0);
}

TEST_CASE("commutators and the truncation artifact") {
  const FockBasis basis(1, 5);
  const OperatorMatrix a = annihilation_matrix(1, basis);
  const OperatorMatrix ad = creation_matrix(1, basis);

  CHECK(commutator(a, a).max_abs() == 0.0);

  OperatorMatrix c = commutator(a, ad);
  // Interior kets see exactly the identity.
  const std::vector<bool> interior = interior_mask(basis, 1);
  OperatorMatrix dev = c - OperatorMatrix::identity(basis);
  CHECK(max_abs_on(dev, interior) < 1e-12);
  // The boundary ket carries the -(M+1) defect.
  CHECK(std::abs(c.at(5, 5) - cplx{-5.0, 0.0}) < 1e-12);

  const FockBasis b2(2, 3);
  const OperatorMatrix a1 = annihilation_matrix(1, b2);
  const OperatorMatrix a2 = annihilation_matrix(2, b2);
  CHECK(commutator(a1, a2).max_abs() == 0.0);
  CHECK(commutator(a1.adjoint(), a2.adjoint()).max_abs() == 0.0);
  CHECK(commutator(a1, a2.adjoint()).max_abs() == 0.0);
}

TEST_CASE("field operators") {
  const FockBasis basis(2, 6);
  for (int j = 1; j <= 2; ++j) {
    CHECK(field_phi(j, basis).is_hermitian(1e-15));
    CHECK(field_pi(j, basis).is_hermitian(1e-15));
  }
  const std::vector<bool> interior = interior_mask(basis, 2);
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k) {
      OperatorMatrix c = commutator(field_phi(j, basis), field_pi(k, basis));
      if (j == k)
        c -= cplx{0.0, 1.0} * OperatorMatrix::identity(basis);
      CHECK(max_abs_on(c, interior) < 1e-14);
      CHECK(commutator(field_phi(j, basis), field_phi(k, basis)).max_abs() ==
            0.0);
      CHECK(commutator(field_pi(j, basis), field_pi(k, basis)).max_abs() ==
            0.0);
    }

  const FockBasis b1(1, 3);
  FockVector v = field_phi(1, b1).apply(FockVector::ket(b1, {0}));
  CHECK(std::abs(v[b1.index({1})] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(v[b1.index({0})]) == 0.0);
}

TEST_CASE("traces") {
  const FockBasis basis(1, 3);
  const OperatorMatrix ident = OperatorMatrix::identity(basis);
  CHECK(trace_product(ident, ident) == cplx{4.0, 0.0});

  const OperatorMatrix a = random_dense(basis, 7);
  const OperatorMatrix b = random_dense(basis, 8);
  CHECK(std::abs(trace_product(a, b) - trace_product(b, a)) < 1e-12);
  CHECK(std::abs(trace_product(a, b) - (a * b).trace()) < 1e-13);

  OperatorMatrix vac = OperatorMatrix::zero(basis);
  vac.set(0, 0, 1.0);
  CHECK(std::abs(trace_product(vac, number_matrix(1, basis))) == 0.0);
}

TEST_CASE("adjoint and product identities on random instances") {
  const FockBasis basis(2, 2);
  const OperatorMatrix a = random_dense(basis, 17);
  const OperatorMatrix b = random_dense(basis, 18);
  CHECK(max_diff(a.adjoint().adjoint(), a) == 0.0);
  CHECK(max_diff((a * b).adjoint(), b.adjoint() * a.adjoint()) < 1e-14);
}

TEST_CASE("sparse and dense storages agree") {
  const FockBasis basis(2, 4);
  const OperatorMatrix a = annihilation_matrix(1, basis);
  const OperatorMatrix ad = creation_matrix(1, basis);
  const OperatorMatrix as = a.to_sparse(), ads = ad.to_sparse();

  CHECK(as.storage() == OperatorMatrix::Storage::sparse);
  CHECK(max_diff(as.to_dense(), a) == 0.0);
  CHECK(max_diff(as * ads, a.to_dense() * ad.to_dense()) < 1e-14);
  CHECK(max_diff(as * ad.to_dense(), a.to_dense() * ads) < 1e-14);
  CHECK(max_diff(as + ads, a.to_dense() + ad.to_dense()) == 0.0);
  CHECK(max_diff(as.adjoint(), a.to_dense().adjoint()) == 0.0);

  const OperatorMatrix d = random_dense(basis, 23);
  CHECK(std::abs(trace_product(as, d) - trace_product(a.to_dense(), d)) <
        1e-12);
  CHECK(std::abs(trace_product(as, ads) -
                 trace_product(a.to_dense(), ad.to_dense())) < 1e-12);

  FockVector v = FockVector::ket(basis, {2, 1});
  CHECK((as.apply(v) - a.to_dense().apply(v)).norm() == 0.0);

  // Large bases pick sparse storage by default.
  const FockBasis big(2, 39); // dim 1600
  CHECK(OperatorMatrix::default_storage(big) ==
        OperatorMatrix::Storage::sparse);
  CHECK(annihilation_matrix(1, big).storage() ==
        OperatorMatrix::Storage::sparse);
}

TEST_CASE("interior mask excludes the cutoff boundary") {
  const FockBasis basis(1, 3);
  const std::vector<bool> m1 = interior_mask(basis, 1);
  CHECK(m1 == std::vector<bool>{true, true, true, false});
  const std::vector<bool> m2 = interior_mask(basis, 2);
  CHECK(m2 == std::vector<bool>{true, true, false, false});
  const OperatorMatrix p = interior_projector(basis, 1);
  CHECK(p.trace() == cplx{3.0, 0.0});
}

TEST_CASE("json round trip") {
  const FockBasis basis(2, 3);
  const OperatorMatrix a = field_phi(1, basis);
  const OperatorMatrix back = OperatorMatrix::from_json(a.to_json());
  CHECK(back.basis() == basis);
  CHECK(max_diff(a, back) == 0.0);

  const OperatorMatrix sp = a.to_sparse();
  CHECK(max_diff(OperatorMatrix::from_json(sp.to_json()), a) == 0.0);
}

TEST_CASE("basis mismatch errors") {
  const FockBasis b1(1, 3), b2(1, 4);
  const OperatorMatrix x = OperatorMatrix::identity(b1);
  const OperatorMatrix y = OperatorMatrix::identity(b2);
  CHECK_THROWS_AS(x * y, std::invalid_argument);
  CHECK_THROWS_AS(trace_product(x, y), std::invalid_argument);
  CHECK_THROWS_AS(annihilation_matrix(2, b1), std::invalid_argument);
  CHECK_THROWS_AS(annihilation_matrix(0, b1), std::invalid_argument);
}
