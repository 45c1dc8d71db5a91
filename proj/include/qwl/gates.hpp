#pragma once

#include <cstdint>
#include <string>

#include "qwl/ket.hpp"
#include "qwl/matrix.hpp"

namespace qwl {

enum class GateKind { X, H, Z, CX, Inc, Dec, Custom };

struct GateSpec {
    GateKind kind = GateKind::X;
    Matrix custom;  // Custom only; dimension a power of two

    // Number of source-level operands: one qubit for X/H/Z, two for CX, one
    // register for Inc/Dec, log2(dim) qubits for Custom.
    std::size_t operand_count() const;

    bool operator==(const GateSpec&) const = default;
};

struct ControlSpec {
    std::vector<QubitCoord> positive;
    std::vector<QubitCoord> negative;
};

// Matrix form of a gate.  `width` is the register width for Inc/Dec (the
// matrix is the cyclic shift on 2^width values) and is ignored otherwise.
Matrix matrix_of(const GateSpec& gate, std::uint32_t width = 1);

// Max-entry deviation of m†m from the identity; 0 for a perfectly unitary m.
double check_unitary(const Matrix& m);

enum class GuardKind { QubitTrue, GtZero, EqConst };

// Loop/branch guard over one declared variable: q (qubit is 1),
// (q > 0), or (q == c).
struct Guard {
    GuardKind kind = GuardKind::QubitTrue;
    std::string var;
    std::uint64_t value = 0;  // EqConst only

    bool operator==(const Guard&) const = default;
};

bool guard_holds(const Guard& guard, std::uint64_t reg_value);

// Guard-copy primitive: the involution that flips tape cell `cell` on exactly
// the basis states where the guard holds on register slot `slot`.
struct GuardFlip {
    Guard guard;
    std::uint32_t slot = 0;
    std::uint32_t cell = 0;
};

GuardFlip guard_flip(const Guard& guard, std::uint32_t slot, std::uint32_t cell);

// Applies the flip to every term whose controls pass; unconditionally a
// permutation of basis labels, so the norm is preserved exactly.
Ket apply_guard_flip(const Ket& k, const GuardFlip& flip, const ControlSpec& controls = {});

}  // namespace qwl
