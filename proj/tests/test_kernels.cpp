#include <doctest.h>

#include <cmath>
#include <vector>

#include "qwl/kernels.hpp"
#include "qwl/matrix.hpp"
#include "qwl/rng.hpp"

using namespace qwl;

namespace {

Matrix random_matrix(std::size_t dim, Rng& rng) {
    Matrix m(dim);
    for (auto& x : m.data()) x = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return m;
}

double max_abs_diff_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("parallel matmul is bit-identical to the serial reference") {
    Rng rng(11);
    for (const std::size_t dim : {1, 2, 7, 33, 64}) {
        const Matrix a = random_matrix(dim, rng);
        const Matrix b = random_matrix(dim, rng);
        Matrix serial_out(dim), parallel_out(dim);
        kernels::serial::matmul(a.data().data(), b.data().data(), serial_out.data().data(), dim);
        kernels::matmul(a.data().data(), b.data().data(), parallel_out.data().data(), dim);
        CHECK(max_abs_diff(serial_out, parallel_out) == 0.0);
    }
}

TEST_CASE("parallel matvec is bit-identical to the serial reference") {
    Rng rng(12);
    for (const std::size_t dim : {1, 3, 16, 65}) {
        const Matrix a = random_matrix(dim, rng);
        std::vector<cplx> v(dim);
        for (auto& x : v) x = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        std::vector<cplx> serial_out(dim), parallel_out(dim);
        kernels::serial::matvec(a.data().data(), v.data(), serial_out.data(), dim);
        kernels::matvec(a.data().data(), v.data(), parallel_out.data(), dim);
        CHECK(max_abs_diff_vec(serial_out, parallel_out) == 0.0);
    }
}

TEST_CASE("parallel adjoint is bit-identical to the serial reference") {
    Rng rng(13);
    for (const std::size_t dim : {1, 5, 32}) {
        const Matrix a = random_matrix(dim, rng);
        Matrix serial_out(dim), parallel_out(dim);
        kernels::serial::adjoint(a.data().data(), serial_out.data().data(), dim);
        kernels::adjoint(a.data().data(), parallel_out.data().data(), dim);
        CHECK(max_abs_diff(serial_out, parallel_out) == 0.0);
    }
}

TEST_CASE("matrix algebra basics") {
    Rng rng(14);
    const Matrix a = random_matrix(6, rng);
    const Matrix b = random_matrix(6, rng);

    CHECK(max_abs_diff(adjoint(a * b), adjoint(b) * adjoint(a)) <= 1e-12);
    CHECK(max_abs_diff(adjoint(adjoint(a)), a) == 0.0);
    CHECK(max_abs_diff(Matrix::identity(6) * a, a) == 0.0);

    const Matrix k = kron(a, b);
    CHECK(k.dim() == 36);
    CHECK(k.at(0, 0) == a.at(0, 0) * b.at(0, 0));
    CHECK(k.at(35, 35) == a.at(5, 5) * b.at(5, 5));
}

TEST_CASE("operator norm") {
    {
        Matrix d(2);
        d.at(0, 0) = 1.0;
        d.at(1, 1) = 2.0;
        CHECK(operator_norm(d) == doctest::Approx(2.0).epsilon(1e-9));
    }
    {
        Matrix h(2);
        const double s = 1.0 / std::sqrt(2.0);
        h.at(0, 0) = h.at(0, 1) = h.at(1, 0) = s;
        h.at(1, 1) = -s;
        CHECK(operator_norm(h) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(unitarity_defect(h) <= 1e-12);
    }
    CHECK(operator_norm(Matrix::zero(3)) == 0.0);
}
