#include "fockbridge/fock.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockbridge {

// ---------------------------------------------------------------------------
// FockBasis
// ---------------------------------------------------------------------------

std::size_t basis_dim(int modes, int cutoff) {
  if (modes < 1)
    throw std::invalid_argument("basis_dim: modes must be >= 1");
  if (cutoff < 1)
    throw std::invalid_argument("basis_dim: cutoff must be >= 1");
  const std::size_t base = static_cast<std::size_t>(cutoff) + 1;
  std::size_t dim = 1;
  for (int j = 0; j < modes; ++j) {
    if (dim > SIZE_MAX / base)
      throw std::overflow_error("basis_dim: dimension overflows index type");
    dim *= base;
  }
  return dim;
}

FockBasis::FockBasis(int modes, int cutoff)
    : modes_(modes), cutoff_(cutoff), dim_(basis_dim(modes, cutoff)) {}

std::size_t FockBasis::index(const std::vector<int>& occupation) const {
  if (occupation.size() != static_cast<std::size_t>(modes_))
    throw std::invalid_argument("occupation length != modes");
  std::size_t idx = 0;
  for (int j = 0; j < modes_; ++j) {
    const int n = occupation[static_cast<std::size_t>(j)];
    if (n < 0 || n > cutoff_)
      throw std::out_of_range("occupation outside [0, cutoff]");
    idx = idx * static_cast<std::size_t>(cutoff_ + 1) +
          static_cast<std::size_t>(n);
  }
  return idx;
}

std::vector<int> FockBasis::occupation(std::size_t index) const {
  if (index >= dim_)
    throw std::out_of_range("basis index out of range");
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  const std::size_t base = static_cast<std::size_t>(cutoff_) + 1;
  for (int j = modes_ - 1; j >= 0; --j) {
    occ[static_cast<std::size_t>(j)] = static_cast<int>(index % base);
    index /= base;
  }
  return occ;
}

// ---------------------------------------------------------------------------
// FockVector
// ---------------------------------------------------------------------------

FockVector::FockVector(const FockBasis& basis)
    : basis_(basis), coeff_(basis.dim(), cplx{0.0, 0.0}) {}

FockVector FockVector::ket(const FockBasis& basis,
                           const std::vector<int>& occupation) {
  FockVector v(basis);
  v.coeff_[basis.index(occupation)] = 1.0;
  return v;
}

double FockVector::squared_norm() const {
  double s = 0.0;
  for (const cplx& z : coeff_)
    s += std::norm(z);
  return s;
}

double FockVector::norm() const { return std::sqrt(squared_norm()); }

cplx FockVector::dot(const FockVector& other) const {
  if (!(basis_ == other.basis_))
    throw std::invalid_argument("dot: basis mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < coeff_.size(); ++i)
    s += std::conj(coeff_[i]) * other.coeff_[i];
  return s;
}

FockVector& FockVector::operator+=(const FockVector& other) {
  if (!(basis_ == other.basis_))
    throw std::invalid_argument("vector add: basis mismatch");
  kern::caxpy(1.0, other.coeff_.data(), coeff_.data(), coeff_.size());
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& other) {
  if (!(basis_ == other.basis_))
    throw std::invalid_argument("vector sub: basis mismatch");
  kern::caxpy(-1.0, other.coeff_.data(), coeff_.data(), coeff_.size());
  return *this;
}

FockVector& FockVector::operator*=(cplx scale) {
  kern::cscal(scale, coeff_.data(), coeff_.size());
  return *this;
}

// ---------------------------------------------------------------------------
// OperatorMatrix
// ---------------------------------------------------------------------------

OperatorMatrix::OperatorMatrix(const FockBasis& basis, Storage storage)
    : basis_(basis), dim_(basis.dim()), storage_(storage) {}

OperatorMatrix::Storage OperatorMatrix::default_storage(
    const FockBasis& basis) {
  return basis.dim() > sparse_threshold ? Storage::sparse : Storage::dense;
}

OperatorMatrix OperatorMatrix::zero(const FockBasis& basis, Storage storage) {
  OperatorMatrix m(basis, storage);
  if (storage == Storage::dense) {
    m.dense_.assign(m.dim_ * m.dim_, cplx{0.0, 0.0});
  } else {
    m.row_ptr_.assign(m.dim_ + 1, 0);
  }
  return m;
}

OperatorMatrix OperatorMatrix::identity(const FockBasis& basis,
                                        Storage storage) {
  OperatorMatrix m = zero(basis, storage);
  if (storage == Storage::dense) {
    for (std::size_t i = 0; i < m.dim_; ++i)
      m.dense_[i * m.dim_ + i] = 1.0;
  } else {
    m.col_.resize(m.dim_);
    m.val_.assign(m.dim_, cplx{1.0, 0.0});
    for (std::size_t i = 0; i < m.dim_; ++i) {
      m.row_ptr_[i] = i;
      m.col_[i] = i;
    }
    m.row_ptr_[m.dim_] = m.dim_;
  }
  return m;
}

OperatorMatrix OperatorMatrix::from_triplets(const FockBasis& basis,
                                             std::vector<Triplet> triplets,
                                             Storage storage) {
  if (storage == Storage::dense) {
    OperatorMatrix m = zero(basis, Storage::dense);
    for (const Triplet& t : triplets) {
      if (t.row >= m.dim_ || t.col >= m.dim_)
        throw std::out_of_range("triplet index out of range");
      m.dense_[t.row * m.dim_ + t.col] += t.value;
    }
    return m;
  }
  OperatorMatrix m(basis, Storage::sparse);
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  m.row_ptr_.assign(m.dim_ + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    if (t.row >= m.dim_ || t.col >= m.dim_)
      throw std::out_of_range("triplet index out of range");
    cplx sum = 0.0;
    std::size_t j = k;
    while (j < triplets.size() && triplets[j].row == t.row &&
           triplets[j].col == t.col) {
      sum += triplets[j].value;
      ++j;
    }
    if (sum != cplx{0.0, 0.0}) {
      m.col_.push_back(t.col);
      m.val_.push_back(sum);
      ++m.row_ptr_[t.row + 1];
    }
    k = j;
  }
  for (std::size_t i = 0; i < m.dim_; ++i)
    m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

std::size_t OperatorMatrix::stored_entries() const {
  return storage_ == Storage::dense ? dense_.size() : val_.size();
}

cplx OperatorMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_)
    throw std::out_of_range("matrix index out of range");
  if (storage_ == Storage::dense)
    return dense_[row * dim_ + col];
  const auto first = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last =
      col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it != last && *it == col)
    return val_[static_cast<std::size_t>(it - col_.begin())];
  return 0.0;
}

void OperatorMatrix::require_dense(const char* what) const {
  if (storage_ != Storage::dense)
    throw std::logic_error(std::string(what) + " requires dense storage");
}

void OperatorMatrix::set(std::size_t row, std::size_t col, cplx value) {
  require_dense("set");
  if (row >= dim_ || col >= dim_)
    throw std::out_of_range("matrix index out of range");
  dense_[row * dim_ + col] = value;
}

std::vector<cplx>& OperatorMatrix::dense_data() {
  require_dense("dense_data");
  return dense_;
}

const std::vector<cplx>& OperatorMatrix::dense_data() const {
  require_dense("dense_data");
  return dense_;
}

OperatorMatrix OperatorMatrix::to_dense() const {
  if (storage_ == Storage::dense)
    return *this;
  OperatorMatrix m = zero(basis_, Storage::dense);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      m.dense_[i * dim_ + col_[k]] = val_[k];
  return m;
}

OperatorMatrix OperatorMatrix::to_sparse() const {
  if (storage_ == Storage::sparse)
    return *this;
  std::vector<Triplet> trip;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const cplx v = dense_[i * dim_ + j];
      if (v != cplx{0.0, 0.0})
        trip.push_back({i, j, v});
    }
  return from_triplets(basis_, std::move(trip), Storage::sparse);
}

OperatorMatrix OperatorMatrix::adjoint() const {
  if (storage_ == Storage::dense) {
    OperatorMatrix m = zero(basis_, Storage::dense);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        m.dense_[j * dim_ + i] = std::conj(dense_[i * dim_ + j]);
    return m;
  }
  std::vector<Triplet> trip;
  trip.reserve(val_.size());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      trip.push_back({col_[k], i, std::conj(val_[k])});
  return from_triplets(basis_, std::move(trip), Storage::sparse);
}

cplx OperatorMatrix::trace() const {
  cplx s = 0.0;
  if (storage_ == Storage::dense) {
    for (std::size_t i = 0; i < dim_; ++i)
      s += dense_[i * dim_ + i];
  } else {
    for (std::size_t i = 0; i < dim_; ++i)
      s += at(i, i);
  }
  return s;
}

double OperatorMatrix::norm_fro() const {
  double s = 0.0;
  const std::vector<cplx>& entries =
      storage_ == Storage::dense ? dense_ : val_;
  for (const cplx& z : entries)
    s += std::norm(z);
  return std::sqrt(s);
}

double OperatorMatrix::max_abs() const {
  double s = 0.0;
  const std::vector<cplx>& entries =
      storage_ == Storage::dense ? dense_ : val_;
  for (const cplx& z : entries)
    s = std::max(s, std::abs(z));
  return s;
}

bool OperatorMatrix::is_hermitian(double tol) const {
  const OperatorMatrix d = to_dense();
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs(d.dense_[i * dim_ + j] -
                   std::conj(d.dense_[j * dim_ + i])) > tol)
        return false;
  return true;
}

FockVector OperatorMatrix::apply(const FockVector& v) const {
  if (!(basis_ == v.basis()))
    throw std::invalid_argument("apply: basis mismatch");
  FockVector out(basis_);
  if (storage_ == Storage::dense) {
    kern::cgemv(dense_.data(), v.data(), out.data(), dim_, dim_);
  } else {
    for (std::size_t i = 0; i < dim_; ++i) {
      cplx s = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        s += val_[k] * v[col_[k]];
      out[i] = s;
    }
  }
  return out;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  if (!(basis_ == other.basis_))
    throw std::invalid_argument("matrix add: basis mismatch");
  if (storage_ == Storage::dense && other.storage_ == Storage::dense) {
    kern::caxpy(1.0, other.dense_.data(), dense_.data(), dense_.size());
    return *this;
  }
  if (storage_ == Storage::sparse && other.storage_ == Storage::sparse) {
    std::vector<Triplet> trip;
    trip.reserve(val_.size() + other.val_.size());
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        trip.push_back({i, col_[k], val_[k]});
      for (std::size_t k = other.row_ptr_[i]; k < other.row_ptr_[i + 1]; ++k)
        trip.push_back({i, other.col_[k], other.val_[k]});
    }
    *this = from_triplets(basis_, std::move(trip), Storage::sparse);
    return *this;
  }
  *this = to_dense();
  kern::caxpy(1.0, other.to_dense().dense_.data(), dense_.data(),
              dense_.size());
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  OperatorMatrix neg = other;
  neg *= cplx{-1.0, 0.0};
  return *this += neg;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx scale) {
  std::vector<cplx>& entries = storage_ == Storage::dense ? dense_ : val_;
  kern::cscal(scale, entries.data(), entries.size());
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.basis_ == b.basis_))
    throw std::invalid_argument("matrix product: basis mismatch");
  const std::size_t n = a.dim_;
  using Storage = OperatorMatrix::Storage;
  if (a.storage_ == Storage::sparse && b.storage_ == Storage::sparse) {
    // Row-by-row sparse product with a dense scatter accumulator.
    std::vector<OperatorMatrix::Triplet> trip;
    std::vector<cplx> acc(n, cplx{0.0, 0.0});
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < n; ++i) {
      touched.clear();
      for (std::size_t ka = a.row_ptr_[i]; ka < a.row_ptr_[i + 1]; ++ka) {
        const std::size_t k = a.col_[ka];
        const cplx av = a.val_[ka];
        for (std::size_t kb = b.row_ptr_[k]; kb < b.row_ptr_[k + 1]; ++kb) {
          const std::size_t j = b.col_[kb];
          if (acc[j] == cplx{0.0, 0.0})
            touched.push_back(j);
          acc[j] += av * b.val_[kb];
        }
      }
      for (const std::size_t j : touched) {
        if (acc[j] != cplx{0.0, 0.0})
          trip.push_back({i, j, acc[j]});
        acc[j] = 0.0;
      }
    }
    return OperatorMatrix::from_triplets(a.basis_, std::move(trip),
                                         Storage::sparse);
  }
  if (a.storage_ == Storage::dense && b.storage_ == Storage::dense) {
    OperatorMatrix c = OperatorMatrix::zero(a.basis_, Storage::dense);
    kern::cgemm(a.dense_.data(), b.dense_.data(), c.dense_.data(), n, n, n);
    return c;
  }
  // Mixed: walk the sparse factor, accumulate into a dense result.
  OperatorMatrix c = OperatorMatrix::zero(a.basis_, Storage::dense);
  if (a.storage_ == Storage::sparse) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ka = a.row_ptr_[i]; ka < a.row_ptr_[i + 1]; ++ka) {
        const std::size_t k = a.col_[ka];
        const cplx av = a.val_[ka];
        const cplx* brow = b.dense_.data() + k * n;
        cplx* crow = c.dense_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j)
          crow[j] += av * brow[j];
      }
  } else {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t kb = b.row_ptr_[k]; kb < b.row_ptr_[k + 1]; ++kb) {
        const std::size_t j = b.col_[kb];
        const cplx bv = b.val_[kb];
        for (std::size_t i = 0; i < n; ++i)
          c.dense_[i * n + j] += a.dense_[i * n + k] * bv;
      }
  }
  return c;
}

std::string OperatorMatrix::to_json() const {
  nlohmann::json j;
  j["modes"] = basis_.modes();
  j["cutoff"] = basis_.cutoff();
  nlohmann::json entries = nlohmann::json::array();
  if (storage_ == Storage::dense) {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) {
        const cplx v = dense_[r * dim_ + c];
        if (v != cplx{0.0, 0.0})
          entries.push_back({r, c, v.real(), v.imag()});
      }
  } else {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        entries.push_back({r, col_[k], val_[k].real(), val_[k].imag()});
  }
  j["entries"] = std::move(entries);
  return j.dump();
}

OperatorMatrix OperatorMatrix::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const FockBasis basis(j.at("modes").get<int>(), j.at("cutoff").get<int>());
  std::vector<Triplet> trip;
  for (const auto& e : j.at("entries")) {
    trip.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                    cplx{e.at(2).get<double>(), e.at(3).get<double>()}});
  }
  return from_triplets(basis, std::move(trip), default_storage(basis));
}

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

namespace {

void check_mode(int mode, const FockBasis& basis) {
  if (mode < 1 || mode > basis.modes())
    throw std::invalid_argument("mode index outside 1..modes");
}

} // namespace

OperatorMatrix annihilation_matrix(int mode, const FockBasis& basis) {
  check_mode(mode, basis);
  std::vector<OperatorMatrix::Triplet> trip;
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    std::vector<int> occ = basis.occupation(idx);
    const int n = occ[static_cast<std::size_t>(mode - 1)];
    if (n == 0)
      continue;
    occ[static_cast<std::size_t>(mode - 1)] = n - 1;
    trip.push_back(
        {basis.index(occ), idx, cplx{std::sqrt(static_cast<double>(n)), 0.0}});
  }
  return OperatorMatrix::from_triplets(basis, std::move(trip),
                                       OperatorMatrix::default_storage(basis));
}

OperatorMatrix creation_matrix(int mode, const FockBasis& basis) {
  return annihilation_matrix(mode, basis).adjoint();
}

OperatorMatrix number_matrix(int mode, const FockBasis& basis) {
  check_mode(mode, basis);
  std::vector<OperatorMatrix::Triplet> trip;
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    const int n = basis.occupation(idx)[static_cast<std::size_t>(mode - 1)];
    if (n != 0)
      trip.push_back({idx, idx, cplx{static_cast<double>(n), 0.0}});
  }
  return OperatorMatrix::from_triplets(basis, std::move(trip),
                                       OperatorMatrix::default_storage(basis));
}

OperatorMatrix field_phi(int mode, const FockBasis& basis) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  OperatorMatrix m = annihilation_matrix(mode, basis);
  m += creation_matrix(mode, basis);
  m *= cplx{inv_sqrt2, 0.0};
  return m;
}

OperatorMatrix field_pi(int mode, const FockBasis& basis) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  OperatorMatrix m = annihilation_matrix(mode, basis);
  m -= creation_matrix(mode, basis);
  // 1/(i*sqrt2) = -i/sqrt2
  m *= cplx{0.0, -inv_sqrt2};
  return m;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

cplx trace_product(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.basis() == b.basis()))
    throw std::invalid_argument("trace_product: basis mismatch");
  const std::size_t n = a.dim();
  using Storage = OperatorMatrix::Storage;
  if (a.storage() == Storage::dense && b.storage() == Storage::dense)
    return kern::ctrprod(a.dense_data().data(), b.dense_data().data(), n);
  // Tr(AB) = sum_{i,k} A[i,k] B[k,i]: walk the sparse operand's nonzeros,
  // never forming the product. Tr(AB) = Tr(BA) justifies the swap.
  const bool a_sparse = a.storage() == Storage::sparse;
  const OperatorMatrix& s = a_sparse ? a : b;
  const OperatorMatrix& o = a_sparse ? b : a;
  cplx total = 0.0;
  s.for_each_entry(
      [&](std::size_t i, std::size_t j, cplx sv) { total += sv * o.at(j, i); });
  return total;
}

std::vector<bool> interior_mask(const FockBasis& basis, int margin) {
  if (margin < 0)
    throw std::invalid_argument("interior margin must be >= 0");
  std::vector<bool> mask(basis.dim(), true);
  const int limit = basis.cutoff() - margin;
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    for (const int n : basis.occupation(idx))
      if (n > limit) {
        mask[idx] = false;
        break;
      }
  }
  return mask;
}

OperatorMatrix interior_projector(const FockBasis& basis, int margin) {
  const std::vector<bool> mask = interior_mask(basis, margin);
  std::vector<OperatorMatrix::Triplet> trip;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i])
      trip.push_back({i, i, cplx{1.0, 0.0}});
  return OperatorMatrix::from_triplets(basis, std::move(trip),
                                       OperatorMatrix::default_storage(basis));
}

double max_abs_on(const OperatorMatrix& a, const std::vector<bool>& mask) {
  const OperatorMatrix d = a.to_dense();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!mask[i])
      continue;
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (mask[j])
        worst = std::max(worst, std::abs(d.at(i, j)));
  }
  return worst;
}

} // namespace fockbridge
