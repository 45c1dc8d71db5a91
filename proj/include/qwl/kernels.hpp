#pragma once

#include <complex>
#include <cstddef>

namespace qwl::kernels {

using cplx = std::complex<double>;

// Serial reference kernels.  Kept deliberately plain: the parallel variants
// below must produce bit-identical results, and the tests hold them to that.
namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t dim);
void matvec(const cplx* a, const cplx* v, cplx* out, std::size_t dim);
void adjoint(const cplx* a, cplx* out, std::size_t dim);

}  // namespace serial

// OpenMP-parallel kernels.  Each output row is owned by exactly one thread
// and every row is accumulated in the same order as the serial code, so the
// floating-point results match the reference exactly.
void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t dim);
void matvec(const cplx* a, const cplx* v, cplx* out, std::size_t dim);
void adjoint(const cplx* a, cplx* out, std::size_t dim);

}  // namespace qwl::kernels
