#include "qwl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "qwl/kernels.hpp"

namespace qwl {

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = cplx(1.0, 0.0);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix out(a.dim());
    kernels::matmul(a.data().data(), b.data().data(), out.data().data(), a.dim());
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix sum: dimension mismatch");
    Matrix out(a.dim());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix difference: dimension mismatch");
    Matrix out(a.dim());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

Matrix operator*(cplx scale, const Matrix& a) {
    Matrix out(a.dim());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = scale * a.data()[i];
    return out;
}

Matrix adjoint(const Matrix& a) {
    Matrix out(a.dim());
    kernels::adjoint(a.data().data(), out.data().data(), a.dim());
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.dim() * b.dim());
    const std::size_t bd = b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < bd; ++k)
                for (std::size_t l = 0; l < bd; ++l) out.at(i * bd + k, j * bd + l) = aij * b.at(k, l);
        }
    return out;
}

std::vector<cplx> operator*(const Matrix& a, const std::vector<cplx>& v) {
    if (a.dim() != v.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    std::vector<cplx> out(v.size());
    kernels::matvec(a.data().data(), v.data(), out.data(), a.dim());
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

double unitarity_defect(const Matrix& a) {
    return max_abs_diff(adjoint(a) * a, Matrix::identity(a.dim()));
}

namespace {

// Deterministic start vector so the norm estimate is reproducible run to run.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double unit_interval(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

double operator_norm(const Matrix& a, double rel_tol, std::size_t max_rounds) {
    const std::size_t dim = a.dim();
    if (dim == 0) return 0.0;

    const Matrix gram = adjoint(a) * a;

    std::uint64_t seed = 0x71c713a9u;
    std::vector<cplx> v(dim);
    double start_norm_sq = 0.0;
    for (auto& entry : v) {
        entry = cplx(unit_interval(seed) - 0.5, unit_interval(seed) - 0.5);
        start_norm_sq += std::norm(entry);
    }
    const double start_norm = std::sqrt(start_norm_sq);
    for (auto& entry : v) entry /= start_norm;

    double eigenvalue = 0.0;
    std::vector<cplx> w(dim);
    for (std::size_t round = 0; round < max_rounds; ++round) {
        kernels::matvec(gram.data().data(), v.data(), w.data(), dim);
        // Rayleigh quotient <v, gram v> with v unit; gram is PSD so this is real.
        double rayleigh = 0.0;
        double w_norm_sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            rayleigh += (std::conj(v[i]) * w[i]).real();
            w_norm_sq += std::norm(w[i]);
        }
        const bool settled = std::abs(rayleigh - eigenvalue) <= rel_tol * std::max(std::abs(rayleigh), 1e-300);
        eigenvalue = rayleigh;
        if (settled || w_norm_sq == 0.0) break;
        const double w_norm = std::sqrt(w_norm_sq);
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / w_norm;
    }
    return std::sqrt(std::max(eigenvalue, 0.0));
}

}  // namespace qwl
