#pragma once

#include <vector>

#include "fockbridge/fock.hpp"

namespace fockbridge {

// Max column sum of |entries|. Exact; drives the expm scaling choice.
double norm_one(const OperatorMatrix& a);

// Matrix exponential by scaling-and-squaring over a truncated Taylor
// series. The argument is halved until its 1-norm is <= 1/2, where the
// series remainder after at most 24 terms is below 1e-17; accuracy after
// re-squaring is ~1e-12 in operator norm at the sizes used here. Throws
// std::runtime_error if the series misses that bound.
OperatorMatrix expm(const OperatorMatrix& a);

// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi
// rotations. Throws std::invalid_argument when the input is not Hermitian
// within 1e-10 and std::runtime_error if the sweeps fail to converge.
std::vector<double> hermitian_eigenvalues(const OperatorMatrix& a);

// Largest |eigenvalue| of a Hermitian matrix by power iteration on the
// squared matrix (deterministic start vector, so a +/- eigenvalue tie
// cannot stall it). A ~1e-9-relative estimate feeding tolerance budgets,
// not exact arithmetic.
double norm_two_hermitian(const OperatorMatrix& a);

} // namespace fockbridge
