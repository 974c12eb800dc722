#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "fockbridge/kernels.hpp"

namespace fockbridge {

using cplx = std::complex<double>;

// Entrywise tolerance for "equals" checks throughout the numeric layer.
inline constexpr double entry_tol = 1e-12;

// Occupation-number basis for `modes` bosonic modes, each truncated at
// occupation `cutoff`. Kets are enumerated lexicographically in the
// occupation tuple (N_1,...,N_modes) with mode 1 slowest:
//   index = sum_j N_j * (cutoff+1)^(modes-j).
class FockBasis {
public:
  FockBasis(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dim() const { return dim_; }

  std::size_t index(const std::vector<int>& occupation) const;
  std::vector<int> occupation(std::size_t index) const;

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

private:
  int modes_;
  int cutoff_;
  std::size_t dim_;
};

// (cutoff+1)^modes with an explicit overflow error, never wraparound.
std::size_t basis_dim(int modes, int cutoff);

class FockVector {
public:
  explicit FockVector(const FockBasis& basis);

  // Unit basis ket |occupation>.
  static FockVector ket(const FockBasis& basis,
                        const std::vector<int>& occupation);

  const FockBasis& basis() const { return basis_; }
  std::size_t dim() const { return coeff_.size(); }
  cplx& operator[](std::size_t i) { return coeff_[i]; }
  const cplx& operator[](std::size_t i) const { return coeff_[i]; }
  const std::vector<cplx>& coefficients() const { return coeff_; }
  cplx* data() { return coeff_.data(); }
  const cplx* data() const { return coeff_.data(); }

  double squared_norm() const;
  double norm() const;
  // <this|other>, conjugating this vector's coefficients.
  cplx dot(const FockVector& other) const;

  FockVector& operator+=(const FockVector& other);
  FockVector& operator-=(const FockVector& other);
  FockVector& operator*=(cplx scale);
  friend FockVector operator-(FockVector a, const FockVector& b) {
    a -= b;
    return a;
  }

private:
  FockBasis basis_;
  std::vector<cplx> coeff_;
};

// Complex square matrix over a FockBasis. Storage is dense row-major or
// CSR; every operation accepts either and mixed pairs. Elementary operator
// factories return sparse above `sparse_threshold` (they are banded), dense
// below it.
class OperatorMatrix {
public:
  enum class Storage { dense, sparse };
  struct Triplet {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  static constexpr std::size_t sparse_threshold = 1024;
  static Storage default_storage(const FockBasis& basis);

  static OperatorMatrix zero(const FockBasis& basis,
                             Storage storage = Storage::dense);
  static OperatorMatrix identity(const FockBasis& basis,
                                 Storage storage = Storage::dense);
  // Triplets may repeat (row, col); repeats accumulate.
  static OperatorMatrix from_triplets(const FockBasis& basis,
                                      std::vector<Triplet> triplets,
                                      Storage storage);

  const FockBasis& basis() const { return basis_; }
  std::size_t dim() const { return dim_; }
  Storage storage() const { return storage_; }
  std::size_t stored_entries() const;

  cplx at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, cplx value); // dense only
  std::vector<cplx>& dense_data();                        // dense only
  const std::vector<cplx>& dense_data() const;            // dense only

  OperatorMatrix to_dense() const;
  OperatorMatrix to_sparse() const;

  // Visits every stored entry as f(row, col, value); dense storage visits
  // all dim*dim entries, sparse only the nonzeros.
  template <typename F> void for_each_entry(F&& f) const {
    if (storage_ == Storage::dense) {
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
          f(r, c, dense_[r * dim_ + c]);
    } else {
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
          f(r, col_[k], val_[k]);
    }
  }

  OperatorMatrix adjoint() const;
  cplx trace() const;
  double norm_fro() const;
  double max_abs() const;
  bool is_hermitian(double tol = entry_tol) const;

  FockVector apply(const FockVector& v) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(cplx scale);
  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) {
    a += b;
    return a;
  }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) {
    a -= b;
    return a;
  }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix a) {
    a *= s;
    return a;
  }
  friend OperatorMatrix operator*(const OperatorMatrix& a,
                                  const OperatorMatrix& b);

  std::string to_json() const;
  static OperatorMatrix from_json(const std::string& text);

private:
  explicit OperatorMatrix(const FockBasis& basis, Storage storage);
  void require_dense(const char* what) const;

  FockBasis basis_;
  std::size_t dim_;
  Storage storage_;
  // dense: row-major dim*dim
  std::vector<cplx> dense_;
  // sparse: CSR with column indices ascending within each row
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<cplx> val_;
};

// Elementary operators. a_j lowers occupation N_j with amplitude sqrt(N_j);
// a_j^+ raises with amplitude sqrt(N_j+1) and annihilates kets at the
// cutoff, which keeps it the exact matrix adjoint of a_j.
OperatorMatrix annihilation_matrix(int mode, const FockBasis& basis);
OperatorMatrix creation_matrix(int mode, const FockBasis& basis);
OperatorMatrix number_matrix(int mode, const FockBasis& basis);

// Phi_j = (a_j + a_j^+)/sqrt2, Pi_j = (a_j - a_j^+)/(i*sqrt2); Hermitian.
OperatorMatrix field_phi(int mode, const FockBasis& basis);
OperatorMatrix field_pi(int mode, const FockBasis& basis);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

// Tr(AB) without forming AB when sparsity allows.
cplx trace_product(const OperatorMatrix& a, const OperatorMatrix& b);

// Kets whose every occupation is <= cutoff - margin. Identities involving
// words of degree <= margin are exact on this subspace; the cutoff
// boundary is excluded by construction rather than by tolerance.
std::vector<bool> interior_mask(const FockBasis& basis, int margin);
OperatorMatrix interior_projector(const FockBasis& basis, int margin);

// max |A_ij| over rows and columns kept by the mask.
double max_abs_on(const OperatorMatrix& a, const std::vector<bool>& mask);

} // namespace fockbridge
