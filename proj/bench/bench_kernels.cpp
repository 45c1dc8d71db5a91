// Compares the serial reference kernels against the OpenMP versions on
// dense workloads and reports wall-clock times.  The parallel kernels must
// agree bit for bit with the serial ones, so the benchmark also asserts a
// zero maximum difference.  Not part of the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef QWL_HAVE_OPENMP
#include <omp.h>
#endif

#include "qwl/kernels.hpp"
#include "qwl/matrix.hpp"
#include "qwl/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

qwl::Matrix random_matrix(std::size_t n, qwl::Rng& rng) {
    qwl::Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.at(i, j) = qwl::cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return m;
}

double max_abs(const std::vector<qwl::cplx>& a, const std::vector<qwl::cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

void bench_matmul(std::size_t n, qwl::Rng& rng) {
    const qwl::Matrix a = random_matrix(n, rng);
    const qwl::Matrix b = random_matrix(n, rng);
    qwl::Matrix serial(n), parallel(n);

    auto t0 = clock_type::now();
    qwl::kernels::serial::matmul(a.data().data(), b.data().data(), serial.data().data(), n);
    const double serial_s = seconds_since(t0);

    t0 = clock_type::now();
    qwl::kernels::matmul(a.data().data(), b.data().data(), parallel.data().data(), n);
    const double parallel_s = seconds_since(t0);

    const double diff = qwl::max_abs_diff(serial, parallel);
    std::printf("matmul  n=%4zu  serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g\n",
                n, serial_s, parallel_s, serial_s / parallel_s, diff);
    if (diff != 0.0) std::printf("  ERROR: kernels disagree\n");
}

void bench_matvec(std::size_t n, qwl::Rng& rng) {
    const qwl::Matrix a = random_matrix(n, rng);
    std::vector<qwl::cplx> x(n);
    for (auto& v : x) v = qwl::cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    std::vector<qwl::cplx> serial(n), parallel(n);

    const int repeats = 200;
    auto t0 = clock_type::now();
    for (int r = 0; r < repeats; ++r)
        qwl::kernels::serial::matvec(a.data().data(), x.data(), serial.data(), n);
    const double serial_s = seconds_since(t0);

    t0 = clock_type::now();
    for (int r = 0; r < repeats; ++r) qwl::kernels::matvec(a.data().data(), x.data(), parallel.data(), n);
    const double parallel_s = seconds_since(t0);

    const double diff = max_abs(serial, parallel);
    std::printf("matvec  n=%4zu  serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g  (x%d)\n",
                n, serial_s, parallel_s, serial_s / parallel_s, diff, repeats);
    if (diff != 0.0) std::printf("  ERROR: kernels disagree\n");
}

void bench_norm(std::size_t n, qwl::Rng& rng) {
    const qwl::Matrix a = random_matrix(n, rng);
    auto t0 = clock_type::now();
    const double norm = qwl::operator_norm(a);
    const double s = seconds_since(t0);
    std::printf("opnorm  n=%4zu  %8.4fs  value %.6f\n", n, s, norm);
}

}  // namespace

int main() {
#ifdef QWL_HAVE_OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels run serially\n");
#endif
    qwl::Rng rng(12345);
    for (std::size_t n : {256, 512}) bench_matmul(n, rng);
    for (std::size_t n : {256, 512}) bench_matvec(n, rng);
    for (std::size_t n : {128, 256}) bench_norm(n, rng);
    return 0;
}
