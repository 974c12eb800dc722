#include "kernels_common.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace fockbridge::kern {

// ---------------------------------------------------------------------------
// Scalar reference lane.
//
// Complex arithmetic is spelled out on doubles; the AVX2 lane mirrors these
// exact operation sequences per output element, which is what makes the
// lanes bit-exact equals. std::complex is deliberately not used here.
// ---------------------------------------------------------------------------

namespace {

inline const double* dptr(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

void gemm_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                 std::size_t k, std::size_t n) {
  const double* ad = dptr(a);
  const double* bd = dptr(b);
  double* cd = dptr(c);
  std::memset(cd, 0, sizeof(double) * 2 * m * n);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = ad[2 * (i * k + p)];
      const double ai = ad[2 * (i * k + p) + 1];
      const double* brow = bd + 2 * p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void gemv_scalar(const cplx* a, const cplx* x, cplx* y, std::size_t m,
                 std::size_t n) {
  const double* ad = dptr(a);
  const double* xd = dptr(x);
  double* yd = dptr(y);
  for (std::size_t i = 0; i < m; ++i) {
    double accr = 0.0, acci = 0.0;
    const double* arow = ad + 2 * i * n;
    for (std::size_t p = 0; p < n; ++p) {
      const double ar = arow[2 * p];
      const double ai = arow[2 * p + 1];
      const double xr = xd[2 * p];
      const double xi = xd[2 * p + 1];
      accr += ar * xr - ai * xi;
      acci += ar * xi + ai * xr;
    }
    yd[2 * i] = accr;
    yd[2 * i + 1] = acci;
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const double* xd = dptr(x);
  double* yd = dptr(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    yd[2 * i] += ar * xr - ai * xi;
    yd[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scal_scalar(cplx alpha, cplx* x, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  double* xd = dptr(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    xd[2 * i] = ar * xr - ai * xi;
    xd[2 * i + 1] = ar * xi + ai * xr;
  }
}

cplx trprod_scalar(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = dptr(a);
  const double* bd = dptr(b);
  double totr = 0.0, toti = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rowr = 0.0, rowi = 0.0;
    const double* arow = ad + 2 * i * n;
    for (std::size_t p = 0; p < n; ++p) {
      const double ar = arow[2 * p];
      const double ai = arow[2 * p + 1];
      const double br = bd[2 * (p * n + i)];
      const double bi = bd[2 * (p * n + i) + 1];
      rowr += ar * br - ai * bi;
      rowi += ar * bi + ai * br;
    }
    totr += rowr;
    toti += rowi;
  }
  return {totr, toti};
}

void rank1_herm_scalar(cplx* p, cplx* comp, const cplx* w, double alpha,
                       std::size_t n) {
  double* pd = dptr(p);
  double* cd = dptr(comp);
  const double* wd = dptr(w);
  for (std::size_t i = 0; i < n; ++i) {
    const double sr = alpha * wd[2 * i];
    const double si = alpha * wd[2 * i + 1];
    double* prow = pd + 2 * i * n;
    double* crow = cd + 2 * i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double wr = wd[2 * j];
      const double wi = -wd[2 * j + 1];
      const double vr = sr * wr - si * wi;
      const double vi = sr * wi + si * wr;
      // Kahan step, per component.
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

} // namespace

const KernelTable scalar_table = {gemm_scalar, gemv_scalar, axpy_scalar,
                                  scal_scalar, trprod_scalar,
                                  rank1_herm_scalar};

// ---------------------------------------------------------------------------
// Lane selection
// ---------------------------------------------------------------------------

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Lane> g_lane{Lane::scalar};

const KernelTable* table_for(Lane lane) {
  switch (lane) {
  case Lane::scalar:
    return &scalar_table;
  case Lane::avx2:
    return avx2_table();
  }
  return nullptr;
}

void init_dispatch() {
  Lane lane = lane_supported(Lane::avx2) ? Lane::avx2 : Lane::scalar;
  if (const char* env = std::getenv("FOCKBRIDGE_KERNEL_LANE")) {
    const std::string want(env);
    if (want == "scalar") lane = Lane::scalar;
    else if (want == "avx2" && lane_supported(Lane::avx2)) lane = Lane::avx2;
  }
  g_lane.store(lane);
  g_table.store(table_for(lane));
}

const KernelTable& table() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    init_dispatch();
    t = g_table.load(std::memory_order_acquire);
  }
  return *t;
}

} // namespace

const char* lane_name(Lane lane) {
  return lane == Lane::scalar ? "scalar" : "avx2";
}

bool lane_supported(Lane lane) {
  if (lane == Lane::scalar) return true;
  return avx2_table() != nullptr && cpu_has_avx2();
}

Lane active_lane() {
  table();
  return g_lane.load();
}

void set_lane(Lane lane) {
  if (!lane_supported(lane))
    throw std::runtime_error(std::string("kernel lane not supported: ") +
                             lane_name(lane));
  g_lane.store(lane);
  g_table.store(table_for(lane), std::memory_order_release);
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

void cgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
           std::size_t n) {
  table().gemm(a, b, c, m, k, n);
}

void cgemv(const cplx* a, const cplx* x, cplx* y, std::size_t m,
           std::size_t n) {
  table().gemv(a, x, y, m, n);
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}

void cscal(cplx alpha, cplx* x, std::size_t n) { table().scal(alpha, x, n); }

cplx ctrprod(const cplx* a, const cplx* b, std::size_t n) {
  return table().trprod(a, b, n);
}

void crank1_herm(cplx* p, cplx* comp, const cplx* w, double alpha,
                 std::size_t n) {
  table().rank1_herm(p, comp, w, alpha, n);
}

} // namespace fockbridge::kern
