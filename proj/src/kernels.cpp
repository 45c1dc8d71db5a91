#include "qwl/kernels.hpp"

#include <cstdint>

namespace qwl::kernels {

namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i) {
        cplx* out_row = out + i * dim;
        for (std::size_t j = 0; j < dim; ++j) out_row[j] = cplx(0.0, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx aik = a[i * dim + k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* b_row = b + k * dim;
            for (std::size_t j = 0; j < dim; ++j) out_row[j] += aik * b_row[j];
        }
    }
}

void matvec(const cplx* a, const cplx* v, cplx* out, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* a_row = a + i * dim;
        for (std::size_t j = 0; j < dim; ++j) acc += a_row[j] * v[j];
        out[i] = acc;
    }
}

void adjoint(const cplx* a, cplx* out, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] = std::conj(a[j * dim + i]);
}

}  // namespace serial

// Row i of the product depends only on row i of `a` and all of `b`, so the
// outer loop parallelizes without any sharing; the inner accumulation order
// is identical to the serial kernel.
void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t dim) {
    const std::int64_t n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (n >= 64)
    for (std::int64_t i = 0; i < n; ++i) {
        cplx* out_row = out + i * dim;
        for (std::size_t j = 0; j < dim; ++j) out_row[j] = cplx(0.0, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx aik = a[i * dim + k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* b_row = b + k * dim;
            for (std::size_t j = 0; j < dim; ++j) out_row[j] += aik * b_row[j];
        }
    }
}

void matvec(const cplx* a, const cplx* v, cplx* out, std::size_t dim) {
    const std::int64_t n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (n >= 256)
    for (std::int64_t i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* a_row = a + i * dim;
        for (std::size_t j = 0; j < dim; ++j) acc += a_row[j] * v[j];
        out[i] = acc;
    }
}

void adjoint(const cplx* a, cplx* out, std::size_t dim) {
    const std::int64_t n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (n >= 256)
    for (std::int64_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] = std::conj(a[j * dim + i]);
}

}  // namespace qwl::kernels
