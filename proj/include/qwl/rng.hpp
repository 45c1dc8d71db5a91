#pragma once

#include <cstdint>
#include <random>

#include "qwl/matrix.hpp"

namespace qwl {

// Deterministic random source.  mt19937_64 produces one well-defined stream
// per seed on every platform, and the value derivations below avoid
// std::uniform_real_distribution and friends, whose output is
// implementation-defined; results are therefore reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_eng(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(m_eng() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t bits() { return m_eng(); }

private:
    std::mt19937_64 m_eng;
};

// Haar-flavored random single-qubit unitary (exactly unitary by construction).
Matrix random_unitary2(Rng& rng);

// Random unit vector with independent uniform components before normalization.
std::vector<cplx> random_unit_vector(std::size_t dim, Rng& rng);

}  // namespace qwl
