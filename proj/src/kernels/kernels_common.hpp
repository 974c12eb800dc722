#pragma once

#include "fockbridge/kernels.hpp"

#include <cstddef>

// Shared between the scalar and AVX2 translation units.

namespace fockbridge::kern {

struct KernelTable {
  void (*gemm)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t,
               std::size_t);
  void (*gemv)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*scal)(cplx, cplx*, std::size_t);
  cplx (*trprod)(const cplx*, const cplx*, std::size_t);
  void (*rank1_herm)(cplx*, cplx*, const cplx*, double, std::size_t);
};

extern const KernelTable scalar_table;

// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table();
bool cpu_has_avx2();

} // namespace fockbridge::kern
