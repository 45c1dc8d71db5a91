#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qwl {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.  Small by design: this is the
// verification-oracle representation, not the interpreter's working state.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : m_dim(dim), m_a(dim * dim) {}

    static Matrix identity(std::size_t dim);
    static Matrix zero(std::size_t dim) { return Matrix(dim); }

    std::size_t dim() const { return m_dim; }

    cplx& at(std::size_t row, std::size_t col) { return m_a[row * m_dim + col]; }
    const cplx& at(std::size_t row, std::size_t col) const { return m_a[row * m_dim + col]; }

    const std::vector<cplx>& data() const { return m_a; }
    std::vector<cplx>& data() { return m_a; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t m_dim = 0;
    std::vector<cplx> m_a;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(cplx scale, const Matrix& a);

Matrix adjoint(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);

std::vector<cplx> operator*(const Matrix& a, const std::vector<cplx>& v);

// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
// max_ij |(a†a - I)_ij|
double unitarity_defect(const Matrix& a);

// Largest singular value, computed by power iteration on a†a.
// Stops when the Rayleigh quotient is stable to `rel_tol` (relative) or after
// `max_rounds` rounds; the estimate approaches the true value from below.
double operator_norm(const Matrix& a, double rel_tol = 1e-12, std::size_t max_rounds = 10000);

}  // namespace qwl
