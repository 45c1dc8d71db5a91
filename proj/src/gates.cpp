#include "qwl/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qwl {

std::size_t GateSpec::operand_count() const {
    switch (kind) {
        case GateKind::X:
        case GateKind::H:
        case GateKind::Z:
        case GateKind::Inc:
        case GateKind::Dec:
            return 1;
        case GateKind::CX:
            return 2;
        case GateKind::Custom: {
            std::size_t rank = 0;
            while ((std::size_t{1} << rank) < custom.dim()) ++rank;
            return rank;
        }
    }
    return 0;
}

Matrix matrix_of(const GateSpec& gate, std::uint32_t width) {
    switch (gate.kind) {
        case GateKind::X: {
            Matrix m(2);
            m.at(0, 1) = m.at(1, 0) = 1.0;
            return m;
        }
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            Matrix m(2);
            m.at(0, 0) = m.at(0, 1) = m.at(1, 0) = s;
            m.at(1, 1) = -s;
            return m;
        }
        case GateKind::Z: {
            Matrix m(2);
            m.at(0, 0) = 1.0;
            m.at(1, 1) = -1.0;
            return m;
        }
        case GateKind::CX: {
            // |c,t> -> |c, t xor c>; operand 0 is the control.
            Matrix m(4);
            m.at(0, 0) = m.at(1, 1) = m.at(3, 2) = m.at(2, 3) = 1.0;
            return m;
        }
        case GateKind::Inc:
        case GateKind::Dec: {
            if (width == 0 || width > 20)
                throw std::invalid_argument("register too wide for a dense gate matrix");
            const std::size_t dim = std::size_t{1} << width;
            Matrix m(dim);
            for (std::size_t v = 0; v < dim; ++v) {
                if (gate.kind == GateKind::Inc)
                    m.at((v + 1) % dim, v) = 1.0;
                else
                    m.at((v + dim - 1) % dim, v) = 1.0;
            }
            return m;
        }
        case GateKind::Custom:
            return gate.custom;
    }
    throw std::logic_error("unknown gate kind");
}

double check_unitary(const Matrix& m) { return unitarity_defect(m); }

bool guard_holds(const Guard& guard, std::uint64_t reg_value) {
    switch (guard.kind) {
        case GuardKind::QubitTrue:
            return (reg_value & 1u) != 0;
        case GuardKind::GtZero:
            return reg_value > 0;
        case GuardKind::EqConst:
            return reg_value == guard.value;
    }
    return false;
}

GuardFlip guard_flip(const Guard& guard, std::uint32_t slot, std::uint32_t cell) {
    if (cell == 0) throw std::invalid_argument("ancilla cells are numbered from 1");
    return GuardFlip{guard, slot, cell};
}

Ket apply_guard_flip(const Ket& k, const GuardFlip& flip, const ControlSpec& controls) {
    Ket out;
    for (const auto& [label, amp] : k.terms()) {
        bool pass = true;
        for (const auto& c : controls.positive)
            if (!read_bit(label, c)) {
                pass = false;
                break;
            }
        if (pass)
            for (const auto& c : controls.negative)
                if (read_bit(label, c)) {
                    pass = false;
                    break;
                }
        if (flip.slot >= label.regs.size()) throw std::out_of_range("register slot out of range");
        if (!pass || !guard_holds(flip.guard, label.regs[flip.slot])) {
            out.add_term(label, amp);
            continue;
        }
        BasisLabel flipped = label;
        flipped.set_ancilla_bit(flip.cell, !label.ancilla_bit(flip.cell));
        out.add_term(flipped, amp);
    }
    return out;
}

}  // namespace qwl
