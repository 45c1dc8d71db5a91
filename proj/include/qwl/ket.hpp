#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qwl/matrix.hpp"

namespace qwl {

// One computational-basis vector of the program space: the ancilla tape
// followed by the declared registers.  `ancillas` holds tape cell i at string
// position i-1 and is kept canonical (no trailing '0'); the infinitely many
// remaining cells are implicitly zero.  `regs` holds one value per declared
// register, in declaration order.
struct BasisLabel {
    std::string ancillas;
    std::vector<std::uint64_t> regs;

    BasisLabel() = default;
    BasisLabel(std::string ancilla_bits, std::vector<std::uint64_t> reg_values);

    bool ancilla_bit(std::uint32_t cell) const;            // cell >= 1
    void set_ancilla_bit(std::uint32_t cell, bool value);  // keeps canonical form

    // Lexicographic on (ancillas, regs); on canonical strings this matches the
    // order of the zero-padded infinite tape.
    auto operator<=>(const BasisLabel&) const = default;
};

// Address of a single qubit: an ancilla tape cell, or bit `bit` (0 = least
// significant) of register slot `slot`.
struct QubitCoord {
    enum class Kind { Ancilla, RegBit };
    Kind kind = Kind::Ancilla;
    std::uint32_t cell = 0;  // Ancilla: tape cell, >= 1
    std::uint32_t slot = 0;  // RegBit: register slot
    std::uint32_t bit = 0;   // RegBit: bit position

    static QubitCoord ancilla(std::uint32_t cell);
    static QubitCoord reg_bit(std::uint32_t slot, std::uint32_t bit);

    auto operator<=>(const QubitCoord&) const = default;
};

bool read_bit(const BasisLabel& label, const QubitCoord& coord);
void write_bit(BasisLabel& label, const QubitCoord& coord, bool value);

// Conjunction of ancilla-bit constraints; cells are distinct and >= 1.
struct ProjectorSpec {
    std::vector<std::pair<std::uint32_t, bool>> constraints;

    static ProjectorSpec onto(std::vector<std::pair<std::uint32_t, bool>> constraints);
};

// Sparse state vector: basis label -> amplitude, ordered map so every
// traversal (and hence every dump and every floating-point accumulation
// order) is deterministic.
class Ket {
public:
    using Terms = std::map<BasisLabel, cplx>;

    Ket() = default;

    static Ket basis(BasisLabel label, cplx amplitude = cplx(1.0, 0.0));

    const Terms& terms() const { return m_terms; }
    bool empty() const { return m_terms.empty(); }
    std::size_t size() const { return m_terms.size(); }

    cplx amplitude(const BasisLabel& label) const;

    // Accumulates into the term for `label`; erases the term if it lands on
    // exactly zero.
    void add_term(const BasisLabel& label, cplx amplitude);

    // Drops terms with |amplitude| <= eps.  No-op for eps < 0.
    void prune(double eps);

    bool operator==(const Ket& other) const = default;

private:
    Terms m_terms;
};

double norm(const Ket& k);
// Hermitian inner product, conjugate-linear in the first argument.
cplx inner(const Ket& a, const Ket& b);
// alpha * a + b, pruned with `prune_eps`.
Ket add_scaled(cplx alpha, const Ket& a, const Ket& b, double prune_eps = 0.0);

// Keeps exactly the terms satisfying every constraint.
Ket project(const Ket& k, const ProjectorSpec& spec);
// Same, over arbitrary qubit coordinates (register bits included).
Ket project_bits(const Ket& k, const std::vector<std::pair<QubitCoord, bool>>& conditions);

// Applies `gate` (dimension 2^targets.size(), big-endian: targets[0] is the
// most significant index bit) to the target qubits of every term whose
// positive controls read 1 and negative controls read 0; other terms pass
// through unchanged.  Throws std::invalid_argument if the gate is not unitary
// within 1e-9 or any two coordinates overlap.
Ket apply_local(const Ket& k, const Matrix& gate, const std::vector<QubitCoord>& targets,
                const std::vector<QubitCoord>& positive_controls,
                const std::vector<QubitCoord>& negative_controls, double prune_eps = 0.0);

}  // namespace qwl
