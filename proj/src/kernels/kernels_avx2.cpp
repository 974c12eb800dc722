#include "kernels_common.hpp"

// AVX2 lane. Vectorizes across independent output elements only; every
// output element sees the same operation sequence as the scalar lane, so
// results are bit-identical (tested by memcmp in test_kernels).

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstring>

namespace fockbridge::kern {
namespace {

inline const double* dptr(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// Two interleaved complex products per vector:
// re = ar*br - ai*bi, im = ai*br + ar*bi (addsub pairs them exactly).
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

inline __m256d load2rows(const double* lo, const double* hi) {
  return _mm256_insertf128_pd(_mm256_castpd128_pd256(_mm_loadu_pd(lo)),
                              _mm_loadu_pd(hi), 1);
}

void gemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
               std::size_t k, std::size_t n) {
  const double* ad = dptr(a);
  const double* bd = dptr(b);
  double* cd = dptr(c);
  std::memset(cd, 0, sizeof(double) * 2 * m * n);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double* ae = ad + 2 * (i * k + p);
      const __m256d a2 =
          _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(ae));
      const double* brow = bd + 2 * p * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        const __m256d b2 = _mm256_loadu_pd(brow + 2 * j);
        const __m256d c2 = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(c2, cmul2(a2, b2)));
      }
      for (; j < n; ++j) {
        const double ar = ae[0], ai = ae[1];
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void gemv_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t m,
               std::size_t n) {
  const double* ad = dptr(a);
  const double* xd = dptr(x);
  double* yd = dptr(y);
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* r0 = ad + 2 * i * n;
    const double* r1 = ad + 2 * (i + 1) * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < n; ++p) {
      const __m256d a2 = load2rows(r0 + 2 * p, r1 + 2 * p);
      const __m256d x2 =
          _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(xd + 2 * p));
      acc = _mm256_add_pd(acc, cmul2(a2, x2));
    }
    _mm_storeu_pd(yd + 2 * i, _mm256_castpd256_pd128(acc));
    _mm_storeu_pd(yd + 2 * (i + 1), _mm256_extractf128_pd(acc, 1));
  }
  for (; i < m; ++i) {
    double accr = 0.0, acci = 0.0;
    const double* arow = ad + 2 * i * n;
    for (std::size_t p = 0; p < n; ++p) {
      const double ar = arow[2 * p], ai = arow[2 * p + 1];
      const double xr = xd[2 * p], xi = xd[2 * p + 1];
      accr += ar * xr - ai * xi;
      acci += ar * xi + ai * xr;
    }
    yd[2 * i] = accr;
    yd[2 * i + 1] = acci;
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const __m256d a2 = _mm256_setr_pd(ar, ai, ar, ai);
  const double* xd = dptr(x);
  double* yd = dptr(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x2 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y2 = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(y2, cmul2(a2, x2)));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    yd[2 * i] += ar * xr - ai * xi;
    yd[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scal_avx2(cplx alpha, cplx* x, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const __m256d a2 = _mm256_setr_pd(ar, ai, ar, ai);
  double* xd = dptr(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x2 = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, cmul2(a2, x2));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    xd[2 * i] = ar * xr - ai * xi;
    xd[2 * i + 1] = ar * xi + ai * xr;
  }
}

cplx trprod_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = dptr(a);
  const double* bd = dptr(b);
  double totr = 0.0, toti = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double* r0 = ad + 2 * i * n;
    const double* r1 = ad + 2 * (i + 1) * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < n; ++p) {
      const __m256d a2 = load2rows(r0 + 2 * p, r1 + 2 * p);
      const __m256d b2 = _mm256_loadu_pd(bd + 2 * (p * n + i));
      acc = _mm256_add_pd(acc, cmul2(a2, b2));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    totr += lanes[0];
    toti += lanes[1];
    totr += lanes[2];
    toti += lanes[3];
  }
  for (; i < n; ++i) {
    double rowr = 0.0, rowi = 0.0;
    const double* arow = ad + 2 * i * n;
    for (std::size_t p = 0; p < n; ++p) {
      const double ar = arow[2 * p], ai = arow[2 * p + 1];
      const double br = bd[2 * (p * n + i)], bi = bd[2 * (p * n + i) + 1];
      rowr += ar * br - ai * bi;
      rowi += ar * bi + ai * br;
    }
    totr += rowr;
    toti += rowi;
  }
  return {totr, toti};
}

void rank1_herm_avx2(cplx* p, cplx* comp, const cplx* w, double alpha,
                     std::size_t n) {
  double* pd = dptr(p);
  double* cd = dptr(comp);
  const double* wd = dptr(w);
  const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double sr = alpha * wd[2 * i];
    const double si = alpha * wd[2 * i + 1];
    const __m256d s2 = _mm256_setr_pd(sr, si, sr, si);
    double* prow = pd + 2 * i * n;
    double* crow = cd + 2 * i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d wc = _mm256_xor_pd(_mm256_loadu_pd(wd + 2 * j), conj_mask);
      const __m256d v = cmul2(s2, wc);
      const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
      const __m256d pv = _mm256_loadu_pd(prow + 2 * j);
      const __m256d y = _mm256_sub_pd(v, cv);
      const __m256d t = _mm256_add_pd(pv, y);
      _mm256_storeu_pd(crow + 2 * j,
                       _mm256_sub_pd(_mm256_sub_pd(t, pv), y));
      _mm256_storeu_pd(prow + 2 * j, t);
    }
    for (; j < n; ++j) {
      const double wr = wd[2 * j];
      const double wi = -wd[2 * j + 1];
      const double vr = sr * wr - si * wi;
      const double vi = sr * wi + si * wr;
      const double yr = vr - crow[2 * j];
      const double tr = prow[2 * j] + yr;
      crow[2 * j] = (tr - prow[2 * j]) - yr;
      prow[2 * j] = tr;
      const double yi = vi - crow[2 * j + 1];
      const double ti = prow[2 * j + 1] + yi;
      crow[2 * j + 1] = (ti - prow[2 * j + 1]) - yi;
      prow[2 * j + 1] = ti;
    }
  }
}

const KernelTable avx2_impl = {gemm_avx2, gemv_avx2, axpy_avx2,
                               scal_avx2, trprod_avx2, rank1_herm_avx2};

} // namespace

const KernelTable* avx2_table() { return &avx2_impl; }

} // namespace fockbridge::kern

#else // !__AVX2__

namespace fockbridge::kern {
const KernelTable* avx2_table() { return nullptr; }
} // namespace fockbridge::kern

#endif
