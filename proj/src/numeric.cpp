#include "fockbridge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "fockbridge/kernels.hpp"

namespace fockbridge {

double norm_one(const OperatorMatrix& a) {
  std::vector<double> col_sum(a.dim(), 0.0);
  a.for_each_entry([&](std::size_t, std::size_t col, cplx value) {
    col_sum[col] += std::abs(value);
  });
  double best = 0.0;
  for (double s : col_sum)
    best = std::max(best, s);
  return best;
}

OperatorMatrix expm(const OperatorMatrix& a) {
  const std::size_t n = a.dim();
  OperatorMatrix x = a.to_dense();
  std::vector<cplx>& xd = x.dense_data();

  // Shift by the mean eigenvalue: exp(A) = e^mu exp(A - mu I). For the
  // number-operator-like exponents used here this halves the norm, which
  // saves squarings without changing the result.
  const cplx mu = x.trace() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    xd[i * n + i] -= mu;

  int squarings = 0;
  double scale = norm_one(x);
  while (scale > 0.5 && squarings < 64) {
    scale *= 0.5;
    ++squarings;
  }
  if (scale > 0.5)
    throw std::runtime_error("expm: argument norm too large to scale down");
  kern::cscal(std::ldexp(1.0, -squarings), xd.data(), n * n);

  OperatorMatrix p = OperatorMatrix::identity(x.basis());
  OperatorMatrix term = OperatorMatrix::identity(x.basis());
  OperatorMatrix tmp = OperatorMatrix::zero(x.basis());
  bool converged = false;
  for (int k = 1; k <= 24; ++k) {
    kern::cgemm(term.dense_data().data(), xd.data(), tmp.dense_data().data(),
                n, n, n);
    std::swap(term, tmp);
    term *= cplx{1.0 / k, 0.0};
    p += term;
    // exp of the scaled argument has norm <= e^0.5, so an absolute term
    // bound of 1e-17 is ~6e-18 relative.
    if (norm_one(term) <= 1e-17) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("expm: Taylor series missed its remainder "
                             "bound within 24 terms");

  for (int i = 0; i < squarings; ++i) {
    kern::cgemm(p.dense_data().data(), p.dense_data().data(),
                tmp.dense_data().data(), n, n, n);
    std::swap(p, tmp);
  }
  p *= std::exp(mu);
  return p;
}

std::vector<double> hermitian_eigenvalues(const OperatorMatrix& a) {
  if (!a.is_hermitian(1e-10))
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not "
                                "Hermitian within 1e-10");
  const std::size_t n = a.dim();
  OperatorMatrix w = a.to_dense();
  std::vector<cplx>& m = w.dense_data();

  // Symmetrize exactly so the rotations preserve Hermiticity bit-for-bit.
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + i] = cplx{m[i * n + i].real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (m[i * n + j] + std::conj(m[j * n + i]));
      m[i * n + j] = avg;
      m[j * n + i] = std::conj(avg);
    }
  }

  const double scale0 = std::max(w.norm_fro(), 1e-300);
  bool converged = false;
  for (int sweep = 0; sweep < 50 && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off += std::norm(m[p * n + q]);
    if (std::sqrt(2.0 * off) <= 1e-13 * scale0) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = m[p * n + q];
        const double r = std::abs(apq);
        if (r <= 1e-18 * scale0)
          continue;
        const double app = m[p * n + p].real();
        const double aqq = m[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) /
            (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx phase = apq / r;
        const cplx phase_c = std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q)
            continue;
          const cplx cp = m[i * n + p];
          const cplx cq = m[i * n + q];
          m[i * n + p] = c * cp - s * phase_c * cq;
          m[i * n + q] = s * phase * cp + c * cq;
          const cplx rp = m[p * n + i];
          const cplx rq = m[q * n + i];
          m[p * n + i] = c * rp - s * phase * rq;
          m[q * n + i] = s * phase_c * rp + c * rq;
        }
        m[p * n + p] = cplx{c * c * app + s * s * aqq - 2.0 * c * s * r, 0.0};
        m[q * n + q] = cplx{s * s * app + c * c * aqq + 2.0 * c * s * r, 0.0};
        m[p * n + q] = cplx{0.0, 0.0};
        m[q * n + p] = cplx{0.0, 0.0};
      }
    }
  }
  if (!converged)
    throw std::runtime_error("hermitian_eigenvalues: Jacobi sweeps did not "
                             "converge in 50 passes");

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i)
    eigs[i] = m[i * n + i].real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double norm_two_hermitian(const OperatorMatrix& a) {
  const std::size_t n = a.dim();
  const OperatorMatrix d = a.to_dense();
  const cplx* ad = d.dense_data().data();

  std::vector<cplx> v(n), av(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = cplx{1.0 + static_cast<double>(i % 7) / 8.0, 0.0};
  double nv = 0.0;
  for (const cplx& c : v)
    nv += std::norm(c);
  kern::cscal(1.0 / std::sqrt(nv), v.data(), n);

  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    kern::cgemv(ad, v.data(), av.data(), n, n);
    double na2 = 0.0;
    for (const cplx& c : av)
      na2 += std::norm(c);
    const double next = std::sqrt(na2);
    if (next == 0.0)
      return 0.0;
    // Iterate with A^2 so paired +/- extremal eigenvalues reinforce
    // instead of alternating.
    kern::cgemv(ad, av.data(), v.data(), n, n);
    double nv2 = 0.0;
    for (const cplx& c : v)
      nv2 += std::norm(c);
    if (nv2 == 0.0)
      return next;
    kern::cscal(1.0 / std::sqrt(nv2), v.data(), n);
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

} // namespace fockbridge
