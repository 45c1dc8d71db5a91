#include "qwl/ket.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qwl {

namespace {

void strip_trailing_zeros(std::string& bits) {
    while (!bits.empty() && bits.back() == '0') bits.pop_back();
}

}  // namespace

BasisLabel::BasisLabel(std::string ancilla_bits, std::vector<std::uint64_t> reg_values)
    : ancillas(std::move(ancilla_bits)), regs(std::move(reg_values)) {
    for (char c : ancillas)
        if (c != '0' && c != '1') throw std::invalid_argument("ancilla string must be over {0,1}");
    strip_trailing_zeros(ancillas);
}

bool BasisLabel::ancilla_bit(std::uint32_t cell) const {
    if (cell == 0) throw std::invalid_argument("ancilla cells are numbered from 1");
    return cell <= ancillas.size() && ancillas[cell - 1] == '1';
}

void BasisLabel::set_ancilla_bit(std::uint32_t cell, bool value) {
    if (cell == 0) throw std::invalid_argument("ancilla cells are numbered from 1");
    if (cell > ancillas.size()) {
        if (!value) return;
        ancillas.resize(cell, '0');
    }
    ancillas[cell - 1] = value ? '1' : '0';
    strip_trailing_zeros(ancillas);
}

QubitCoord QubitCoord::ancilla(std::uint32_t cell) {
    if (cell == 0) throw std::invalid_argument("ancilla cells are numbered from 1");
    return QubitCoord{Kind::Ancilla, cell, 0, 0};
}

QubitCoord QubitCoord::reg_bit(std::uint32_t slot, std::uint32_t bit) {
    return QubitCoord{Kind::RegBit, 0, slot, bit};
}

bool read_bit(const BasisLabel& label, const QubitCoord& coord) {
    if (coord.kind == QubitCoord::Kind::Ancilla) return label.ancilla_bit(coord.cell);
    if (coord.slot >= label.regs.size()) throw std::out_of_range("register slot out of range");
    return (label.regs[coord.slot] >> coord.bit) & 1u;
}

void write_bit(BasisLabel& label, const QubitCoord& coord, bool value) {
    if (coord.kind == QubitCoord::Kind::Ancilla) {
        label.set_ancilla_bit(coord.cell, value);
        return;
    }
    if (coord.slot >= label.regs.size()) throw std::out_of_range("register slot out of range");
    const std::uint64_t mask = std::uint64_t{1} << coord.bit;
    if (value)
        label.regs[coord.slot] |= mask;
    else
        label.regs[coord.slot] &= ~mask;
}

ProjectorSpec ProjectorSpec::onto(std::vector<std::pair<std::uint32_t, bool>> constraints) {
    std::set<std::uint32_t> seen;
    for (const auto& [cell, value] : constraints) {
        (void)value;
        if (cell == 0) throw std::invalid_argument("projector cells are numbered from 1");
        if (!seen.insert(cell).second) throw std::invalid_argument("projector constrains a cell twice");
    }
    return ProjectorSpec{std::move(constraints)};
}

Ket Ket::basis(BasisLabel label, cplx amplitude) {
    Ket k;
    k.add_term(std::move(label), amplitude);
    return k;
}

cplx Ket::amplitude(const BasisLabel& label) const {
    auto it = m_terms.find(label);
    return it == m_terms.end() ? cplx(0.0, 0.0) : it->second;
}

void Ket::add_term(const BasisLabel& label, cplx amplitude) {
    auto [it, inserted] = m_terms.try_emplace(label, amplitude);
    if (!inserted) it->second += amplitude;
    if (it->second == cplx(0.0, 0.0)) m_terms.erase(it);
}

void Ket::prune(double eps) {
    if (eps < 0.0) return;
    for (auto it = m_terms.begin(); it != m_terms.end();) {
        if (std::abs(it->second) <= eps)
            it = m_terms.erase(it);
        else
            ++it;
    }
}

double norm(const Ket& k) {
    double sum = 0.0;
    for (const auto& [label, amp] : k.terms()) {
        (void)label;
        sum += std::norm(amp);
    }
    return std::sqrt(sum);
}

cplx inner(const Ket& a, const Ket& b) {
    cplx sum(0.0, 0.0);
    for (const auto& [label, amp] : a.terms()) sum += std::conj(amp) * b.amplitude(label);
    return sum;
}

Ket add_scaled(cplx alpha, const Ket& a, const Ket& b, double prune_eps) {
    Ket out = b;
    for (const auto& [label, amp] : a.terms()) out.add_term(label, alpha * amp);
    out.prune(prune_eps);
    return out;
}

Ket project(const Ket& k, const ProjectorSpec& spec) {
    Ket out;
    for (const auto& [label, amp] : k.terms()) {
        bool keep = true;
        for (const auto& [cell, value] : spec.constraints)
            if (label.ancilla_bit(cell) != value) {
                keep = false;
                break;
            }
        if (keep) out.add_term(label, amp);
    }
    return out;
}

Ket project_bits(const Ket& k, const std::vector<std::pair<QubitCoord, bool>>& conditions) {
    Ket out;
    for (const auto& [label, amp] : k.terms()) {
        bool keep = true;
        for (const auto& [coord, value] : conditions)
            if (read_bit(label, coord) != value) {
                keep = false;
                break;
            }
        if (keep) out.add_term(label, amp);
    }
    return out;
}

namespace {

void require_disjoint(const std::vector<QubitCoord>& targets, const std::vector<QubitCoord>& pos,
                      const std::vector<QubitCoord>& neg) {
    std::set<QubitCoord> seen;
    auto insert_all = [&seen](const std::vector<QubitCoord>& coords) {
        for (const auto& c : coords)
            if (!seen.insert(c).second) throw std::invalid_argument("overlapping qubit coordinates");
    };
    insert_all(targets);
    insert_all(pos);
    insert_all(neg);
}

bool controls_pass(const BasisLabel& label, const std::vector<QubitCoord>& pos,
                   const std::vector<QubitCoord>& neg) {
    for (const auto& c : pos)
        if (!read_bit(label, c)) return false;
    for (const auto& c : neg)
        if (read_bit(label, c)) return false;
    return true;
}

}  // namespace

Ket apply_local(const Ket& k, const Matrix& gate, const std::vector<QubitCoord>& targets,
                const std::vector<QubitCoord>& positive_controls,
                const std::vector<QubitCoord>& negative_controls, double prune_eps) {
    const std::size_t rank = targets.size();
    if (rank >= 30 || gate.dim() != (std::size_t{1} << rank))
        throw std::invalid_argument("gate dimension does not match target count");
    require_disjoint(targets, positive_controls, negative_controls);
    if (unitarity_defect(gate) > 1e-9) throw std::invalid_argument("matrix is not unitary");

    Ket out;
    for (const auto& [label, amp] : k.terms()) {
        if (!controls_pass(label, positive_controls, negative_controls)) {
            out.add_term(label, amp);
            continue;
        }
        std::size_t column = 0;
        for (std::size_t j = 0; j < rank; ++j)
            column |= static_cast<std::size_t>(read_bit(label, targets[j])) << (rank - 1 - j);
        for (std::size_t row = 0; row < gate.dim(); ++row) {
            const cplx entry = gate.at(row, column);
            if (entry == cplx(0.0, 0.0)) continue;
            BasisLabel moved = label;
            for (std::size_t j = 0; j < rank; ++j)
                write_bit(moved, targets[j], (row >> (rank - 1 - j)) & 1u);
            out.add_term(moved, amp * entry);
        }
    }
    out.prune(prune_eps);
    return out;
}

}  // namespace qwl
