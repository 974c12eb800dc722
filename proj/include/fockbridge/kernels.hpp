#pragma once

#include <complex>
#include <cstddef>

// Dense complex-double kernels behind the Fock-space linear algebra.
//
// Two lanes: a scalar reference implementation and an AVX2 variant selected
// at runtime. The AVX2 code vectorizes across independent output elements
// and keeps each element's operation sequence identical to the scalar lane,
// so the lanes are bit-exact equals (the whole build uses -ffp-contract=off).
// Equivalence is enforced by tests that memcmp the two lanes' outputs.

namespace fockbridge::kern {

using cplx = std::complex<double>;

enum class Lane { scalar, avx2 };

const char* lane_name(Lane lane);
bool lane_supported(Lane lane);

// Currently active lane. Defaults to the best supported lane; the
// FOCKBRIDGE_KERNEL_LANE environment variable ("scalar"/"avx2") overrides.
Lane active_lane();

// Force a lane (tests use this to compare lanes). Throws if unsupported.
void set_lane(Lane lane);

// C = A(m×k) · B(k×n), row-major; C is overwritten.
void cgemm(const cplx* a, const cplx* b, cplx* c,
           std::size_t m, std::size_t k, std::size_t n);

// y = A(m×n) · x; y is overwritten.
void cgemv(const cplx* a, const cplx* x, cplx* y,
           std::size_t m, std::size_t n);

// y += alpha * x
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);

// x *= alpha
void cscal(cplx alpha, cplx* x, std::size_t n);

// sum_{i,k} A[i,k]·B[k,i] == Tr(A·B) for n×n row-major A, B,
// computed without forming the product.
cplx ctrprod(const cplx* a, const cplx* b, std::size_t n);

// P += alpha · w · wᴴ for real alpha, with Kahan compensation carried in
// comp (same shape as P). Density-matrix accumulation uses this so the
// result is independent of reduction order to well below 1e-12.
void crank1_herm(cplx* p, cplx* comp, const cplx* w, double alpha,
                 std::size_t n);

} // namespace fockbridge::kern
