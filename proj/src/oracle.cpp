#include "qwl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qwl/parser.hpp"
#include "qwl/rng.hpp"

namespace qwl {

// ---------------------------------------------------------------------------
// deterministic randomness helpers

Matrix random_unitary2(Rng& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double alpha = rng.uniform(0.0, two_pi);
    const double beta = rng.uniform(0.0, two_pi);
    const double gamma = rng.uniform(0.0, two_pi);
    const double theta = std::asin(std::sqrt(rng.uniform()));
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx phase = std::polar(1.0, gamma);
    Matrix u(2);
    u.at(0, 0) = phase * std::polar(c, alpha);
    u.at(0, 1) = phase * std::polar(s, beta);
    u.at(1, 0) = phase * -std::polar(s, -beta);
    u.at(1, 1) = phase * std::polar(c, -alpha);
    return u;
}

std::vector<cplx> random_unit_vector(std::size_t dim, Rng& rng) {
    std::vector<cplx> v(dim);
    double norm_sq = 0.0;
    for (auto& entry : v) {
        entry = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
        norm_sq += std::norm(entry);
    }
    const double n = std::sqrt(norm_sq);
    for (auto& entry : v) entry /= n;
    return v;
}

// ---------------------------------------------------------------------------
// space layout

std::uint32_t SpaceSpec::total_bits() const {
    std::uint32_t bits = ancilla_count;
    for (std::uint32_t w : reg_widths) bits += w;
    return bits;
}

std::size_t SpaceSpec::dim() const {
    const std::uint32_t bits = total_bits();
    if (bits > 12) throw std::invalid_argument("space dimension exceeds 4096");
    return std::size_t{1} << bits;
}

namespace {

std::uint32_t reg_suffix_bits(const SpaceSpec& space, std::uint32_t slot) {
    std::uint32_t bits = 0;
    for (std::uint32_t k = slot + 1; k < space.reg_widths.size(); ++k) bits += space.reg_widths[k];
    return bits;
}

std::uint32_t reg_bits(const SpaceSpec& space) { return reg_suffix_bits(space, std::uint32_t(-1)); }

// Bit position (shift from the least significant end) of a qubit coordinate.
std::uint32_t shift_of(const SpaceSpec& space, const QubitCoord& coord) {
    if (coord.kind == QubitCoord::Kind::Ancilla) {
        if (coord.cell == 0 || coord.cell > space.ancilla_count)
            throw std::invalid_argument("tape cell outside the space");
        return reg_bits(space) + (space.ancilla_count - coord.cell);
    }
    if (coord.slot >= space.reg_widths.size() || coord.bit >= space.reg_widths[coord.slot])
        throw std::invalid_argument("register bit outside the space");
    return reg_suffix_bits(space, coord.slot) + coord.bit;
}

bool index_bit(std::size_t index, std::uint32_t shift) { return (index >> shift) & 1u; }

bool controls_pass_index(const SpaceSpec& space, std::size_t index, const ControlSpec& controls) {
    for (const auto& c : controls.positive)
        if (!index_bit(index, shift_of(space, c))) return false;
    for (const auto& c : controls.negative)
        if (index_bit(index, shift_of(space, c))) return false;
    return true;
}

std::uint64_t reg_value_of_index(const SpaceSpec& space, std::size_t index, std::uint32_t slot) {
    const std::uint32_t width = space.reg_widths.at(slot);
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    return (index >> reg_suffix_bits(space, slot)) & mask;
}

}  // namespace

std::size_t index_of_label(const BasisLabel& label, const SpaceSpec& space) {
    if (label.ancillas.size() > space.ancilla_count)
        throw std::invalid_argument("label uses tape cells outside the space");
    if (label.regs.size() != space.reg_widths.size())
        throw std::invalid_argument("label register count does not match the space");
    std::size_t index = 0;
    for (std::uint32_t c = 1; c <= space.ancilla_count; ++c)
        index = (index << 1) | static_cast<std::size_t>(label.ancilla_bit(c));
    for (std::uint32_t slot = 0; slot < space.reg_widths.size(); ++slot) {
        const std::uint32_t width = space.reg_widths[slot];
        const std::uint64_t value = label.regs[slot];
        if (width < 64 && (value >> width) != 0)
            throw std::invalid_argument("register value outside the space");
        index = (index << width) | value;
    }
    return index;
}

BasisLabel label_of_index(std::size_t index, const SpaceSpec& space) {
    std::vector<std::uint64_t> regs(space.reg_widths.size());
    for (std::size_t slot = space.reg_widths.size(); slot-- > 0;) {
        const std::uint32_t width = space.reg_widths[slot];
        regs[slot] = index & ((std::uint64_t{1} << width) - 1);
        index >>= width;
    }
    std::string bits(space.ancilla_count, '0');
    for (std::uint32_t c = space.ancilla_count; c-- > 0;) {
        bits[c] = (index & 1u) ? '1' : '0';
        index >>= 1;
    }
    return BasisLabel(std::move(bits), std::move(regs));
}

std::vector<cplx> vector_of_ket(const Ket& k, const SpaceSpec& space) {
    std::vector<cplx> v(space.dim());
    for (const auto& [label, amp] : k.terms()) v[index_of_label(label, space)] += amp;
    return v;
}

Ket ket_of_vector(const std::vector<cplx>& v, const SpaceSpec& space, double prune_eps) {
    if (v.size() != space.dim()) throw std::invalid_argument("vector length does not match the space");
    Ket k;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != cplx(0.0, 0.0)) k.add_term(label_of_index(i, space), v[i]);
    k.prune(prune_eps);
    return k;
}

Matrix bit_projector(const SpaceSpec& space, const QubitCoord& coord, bool value) {
    const std::uint32_t shift = shift_of(space, coord);
    Matrix out(space.dim());
    for (std::size_t i = 0; i < out.dim(); ++i)
        if (index_bit(i, shift) == value) out.at(i, i) = 1.0;
    return out;
}

Matrix running_projector_matrix(const SpaceSpec& space, std::uint32_t n) {
    if (n > space.ancilla_count) throw std::invalid_argument("tape cell outside the space");
    Matrix out(space.dim());
    for (std::size_t i = 0; i < out.dim(); ++i) {
        bool all_ones = true;
        for (std::uint32_t c = 1; c <= n && all_ones; ++c)
            all_ones = index_bit(i, shift_of(space, QubitCoord::ancilla(c)));
        if (all_ones) out.at(i, i) = 1.0;
    }
    return out;
}

Matrix extended(const SpaceSpec& space, const Matrix& gate, const std::vector<QubitCoord>& targets,
                const ControlSpec& controls) {
    const std::size_t rank = targets.size();
    if (rank >= 30 || gate.dim() != (std::size_t{1} << rank))
        throw std::invalid_argument("gate dimension does not match target count");
    std::set<std::uint32_t> seen;
    for (const auto& c : targets)
        if (!seen.insert(shift_of(space, c)).second)
            throw std::invalid_argument("overlapping qubit coordinates");
    for (const auto& c : controls.positive)
        if (!seen.insert(shift_of(space, c)).second)
            throw std::invalid_argument("overlapping qubit coordinates");
    for (const auto& c : controls.negative)
        if (!seen.insert(shift_of(space, c)).second)
            throw std::invalid_argument("overlapping qubit coordinates");

    Matrix out(space.dim());
    for (std::size_t col = 0; col < out.dim(); ++col) {
        if (!controls_pass_index(space, col, controls)) {
            out.at(col, col) = 1.0;
            continue;
        }
        std::size_t local_col = 0;
        std::size_t base = col;
        for (std::size_t j = 0; j < rank; ++j) {
            const std::uint32_t shift = shift_of(space, targets[j]);
            local_col |= static_cast<std::size_t>(index_bit(col, shift)) << (rank - 1 - j);
            base &= ~(std::size_t{1} << shift);
        }
        for (std::size_t local_row = 0; local_row < gate.dim(); ++local_row) {
            const cplx entry = gate.at(local_row, local_col);
            if (entry == cplx(0.0, 0.0)) continue;
            std::size_t row = base;
            for (std::size_t j = 0; j < rank; ++j)
                if ((local_row >> (rank - 1 - j)) & 1u)
                    row |= std::size_t{1} << shift_of(space, targets[j]);
            out.at(row, col) += entry;
        }
    }
    return out;
}

Matrix guard_copy_matrix(const SpaceSpec& space, const Guard& guard, std::uint32_t slot,
                         std::uint32_t cell, const ControlSpec& controls) {
    const std::uint32_t flip_shift = shift_of(space, QubitCoord::ancilla(cell));
    Matrix out(space.dim());
    for (std::size_t col = 0; col < out.dim(); ++col) {
        const bool fire = controls_pass_index(space, col, controls) &&
                          guard_holds(guard, reg_value_of_index(space, col, slot));
        const std::size_t row = fire ? (col ^ (std::size_t{1} << flip_shift)) : col;
        out.at(row, col) = 1.0;
    }
    return out;
}

namespace {

std::size_t rotate_tape(const SpaceSpec& space, std::size_t index) {
    const std::uint32_t a = space.ancilla_count;
    if (a == 0) return index;
    const std::uint32_t rbits = reg_bits(space);
    const std::size_t reg_mask = (std::size_t{1} << rbits) - 1;
    const std::size_t anc = index >> rbits;
    const std::size_t rotated = (anc >> 1) | ((anc & 1u) << (a - 1));
    return (rotated << rbits) | (index & reg_mask);
}

}  // namespace

Matrix shift_matrix(const SpaceSpec& space) {
    Matrix out(space.dim());
    for (std::size_t col = 0; col < out.dim(); ++col) out.at(rotate_tape(space, col), col) = 1.0;
    return out;
}

Matrix shift_conjugate(const SpaceSpec& space, const Matrix& m) {
    if (m.dim() != space.dim()) throw std::invalid_argument("operator does not match the space");
    Matrix out(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        const std::size_t pr = rotate_tape(space, r);
        for (std::size_t c = 0; c < m.dim(); ++c) out.at(pr, rotate_tape(space, c)) = m.at(r, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// dense program walk

namespace {

struct DenseCtx {
    const SpaceSpec& space;
    std::map<std::string, std::uint32_t> slot;
    std::map<std::int32_t, std::uint32_t> token_cell;
    std::uint32_t next_cell = 1;

    DenseCtx(const std::vector<Decl>& decls, const SpaceSpec& s) : space(s) {
        if (decls.size() != s.reg_widths.size())
            throw std::invalid_argument("declaration count does not match the space");
        for (std::uint32_t i = 0; i < decls.size(); ++i) {
            if (decls[i].width != s.reg_widths[i])
                throw std::invalid_argument("declared widths do not match the space");
            slot.emplace(decls[i].name, i);
        }
    }

    std::uint32_t slot_of(const std::string& name) const {
        auto it = slot.find(name);
        if (it == slot.end()) throw std::invalid_argument("undeclared variable '" + name + "'");
        return it->second;
    }

    ControlSpec resolve(const std::vector<CtrlRef>& ctrls) const {
        ControlSpec out;
        for (const auto& c : ctrls) {
            if (c.slot >= 0) {
                out.positive.push_back(QubitCoord::ancilla(token_cell.at(c.slot)));
            } else {
                const QubitCoord coord = QubitCoord::reg_bit(slot_of(c.var), 0);
                (c.negated ? out.negative : out.positive).push_back(coord);
            }
        }
        return out;
    }
};

Matrix walk_dense(DenseCtx& ctx, const StmtPtr& s) {
    return std::visit(
        [&ctx](const auto& node) -> Matrix {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Skip>) {
                return Matrix::identity(ctx.space.dim());
            } else if constexpr (std::is_same_v<T, Apply>) {
                const ControlSpec controls = ctx.resolve(node.ctrls);
                std::vector<QubitCoord> targets;
                std::uint32_t width = 1;
                if (node.gate.kind == GateKind::Inc || node.gate.kind == GateKind::Dec) {
                    const std::uint32_t slot = ctx.slot_of(node.operands.at(0));
                    width = ctx.space.reg_widths.at(slot);
                    for (std::uint32_t b = width; b-- > 0;)
                        targets.push_back(QubitCoord::reg_bit(slot, b));
                } else {
                    for (const auto& operand : node.operands)
                        targets.push_back(QubitCoord::reg_bit(ctx.slot_of(operand), 0));
                }
                return extended(ctx.space, matrix_of(node.gate, width), targets, controls);
            } else if constexpr (std::is_same_v<T, GuardCopy>) {
                const ControlSpec controls = ctx.resolve(node.ctrls);
                const std::uint32_t cell = ctx.next_cell++;
                if (cell > ctx.space.ancilla_count)
                    throw std::invalid_argument("space has too few tape cells");
                ctx.token_cell[node.slot] = cell;
                return guard_copy_matrix(ctx.space, node.guard, ctx.slot_of(node.guard.var), cell,
                                         controls);
            } else if constexpr (std::is_same_v<T, Seq>) {
                Matrix first = walk_dense(ctx, node.first);
                return walk_dense(ctx, node.second) * first;
            } else if constexpr (std::is_same_v<T, If>) {
                throw std::invalid_argument("desugar ifs before building a dense operator");
            } else {
                throw std::invalid_argument("loops have no loop-free dense form; use the loop builders");
            }
        },
        s->node);
}

void require_register_body(const StmtPtr& body) {
    std::visit(
        [&body](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Seq>) {
                require_register_body(node.first);
                require_register_body(node.second);
            } else if constexpr (std::is_same_v<T, Apply>) {
                for (const auto& c : node.ctrls)
                    if (c.slot >= 0)
                        throw std::invalid_argument("loop bodies must act on registers only in dense form");
            } else if constexpr (!std::is_same_v<T, Skip>) {
                throw std::invalid_argument("loop bodies must act on registers only in dense form");
            }
        },
        body->node);
}

struct LoopPieces {
    const SpaceSpec& space;
    Matrix body;                 // extended body operator
    std::vector<Matrix> copies;  // guard copy onto cell j at index j-1
};

LoopPieces loop_pieces(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                       std::uint32_t n, const SpaceSpec& space) {
    if (n > space.ancilla_count)
        throw std::invalid_argument("space has fewer tape cells than loop iterations");
    require_register_body(body);
    DenseCtx ctx(decls, space);
    const std::uint32_t gslot = ctx.slot_of(guard.var);
    if (space.reg_widths.at(gslot) != 1)
        throw std::invalid_argument("loop guards must read a single qubit in dense form");
    LoopPieces pieces{space, walk_dense(ctx, body), {}};
    pieces.copies.reserve(n);
    for (std::uint32_t j = 1; j <= n; ++j)
        pieces.copies.push_back(guard_copy_matrix(space, guard, gslot, j));
    return pieces;
}

// Projector onto "exited exactly at iteration h": cells 1..h-1 at 1, cell h at 0.
Matrix exit_projector(const SpaceSpec& space, std::uint32_t h) {
    Matrix out(space.dim());
    for (std::size_t i = 0; i < out.dim(); ++i) {
        bool match = !index_bit(i, shift_of(space, QubitCoord::ancilla(h)));
        for (std::uint32_t c = 1; c < h && match; ++c)
            match = index_bit(i, shift_of(space, QubitCoord::ancilla(c)));
        if (match) out.at(i, i) = 1.0;
    }
    return out;
}

Matrix loop_recursive(const LoopPieces& pieces, std::uint32_t n, bool keep_running) {
    const std::size_t d = pieces.space.dim();
    const Matrix p0 = bit_projector(pieces.space, QubitCoord::ancilla(1), false);
    const Matrix p1 = bit_projector(pieces.space, QubitCoord::ancilla(1), true);
    Matrix acc = keep_running ? Matrix::identity(d) : Matrix::zero(d);
    for (std::uint32_t k = 1; k <= n; ++k)
        acc = (p0 + p1 * shift_conjugate(pieces.space, acc) * pieces.body) * pieces.copies[0];
    return acc;
}

Matrix loop_closed(const LoopPieces& pieces, std::uint32_t n, bool keep_running) {
    const std::size_t d = pieces.space.dim();
    Matrix total = Matrix::zero(d);
    // Branch that exits at iteration h: h guard copies interleaved with h-1
    // body runs, then the exit projector.
    Matrix chain = Matrix::identity(d);
    for (std::uint32_t h = 1; h <= n; ++h) {
        chain = h == 1 ? pieces.copies[0] : pieces.copies[h - 1] * pieces.body * chain;
        total = total + exit_projector(pieces.space, h) * chain;
    }
    if (keep_running) {
        // Still-running branch: n copies, n body runs, ending with the body.
        Matrix full = Matrix::identity(d);
        for (std::uint32_t j = 1; j <= n; ++j) full = pieces.body * pieces.copies[j - 1] * full;
        total = total + running_projector_matrix(pieces.space, n) * full;
    }
    return total;
}

}  // namespace

Matrix dense_of_program(const std::vector<Decl>& decls, const StmtPtr& program,
                        const SpaceSpec& space) {
    DenseCtx ctx(decls, space);
    return walk_dense(ctx, program);
}

Matrix dense_unitary_loop(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                          std::uint32_t n, const SpaceSpec& space, LoopBuild build) {
    if (n == 0) return Matrix::identity(space.dim());
    const LoopPieces pieces = loop_pieces(decls, guard, body, n, space);
    return build == LoopBuild::Recursive ? loop_recursive(pieces, n, true)
                                         : loop_closed(pieces, n, true);
}

Matrix dense_linear_loop(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                         std::uint32_t n, const SpaceSpec& space, LoopBuild build) {
    if (n == 0) return Matrix::zero(space.dim());
    const LoopPieces pieces = loop_pieces(decls, guard, body, n, space);
    return build == LoopBuild::Recursive ? loop_recursive(pieces, n, false)
                                         : loop_closed(pieces, n, false);
}

// ---------------------------------------------------------------------------
// self-check suite

namespace {

struct SuiteState {
    SuiteReport report;

    void ensure(const std::string& name, double threshold) {
        auto& entry = report[name];
        entry.threshold = threshold;
    }

    void bump(const std::string& name, double deviation) {
        auto& entry = report.at(name);
        entry.max_deviation = std::max(entry.max_deviation, deviation);
        entry.pass = entry.max_deviation <= entry.threshold;
    }
};

double max_abs_diff_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double vec_norm(const std::vector<cplx>& a) {
    double sum = 0.0;
    for (const auto& x : a) sum += std::norm(x);
    return std::sqrt(sum);
}

}  // namespace

SuiteReport check_suite(const SuiteConfig& config) {
    SpaceSpec space{config.ancilla_count, {1}};
    const std::size_t dim = space.dim();
    const std::vector<Decl> decls = {Decl{Decl::Kind::Qubit, "q", 1, 0}};
    const Guard guard{GuardKind::QubitTrue, "q", 0};
    Rng rng(config.seed);

    SuiteState suite;
    suite.ensure("unitary_recursive_equals_closed", 1e-10);
    suite.ensure("linear_recursive_equals_closed", 1e-10);
    suite.ensure("unitary_is_unitary", 1e-9);
    suite.ensure("linear_norm_bounded", 1e-12);
    suite.ensure("linear_part_of_unitary", 1e-10);
    suite.ensure("eval_matches_dense_unitary", 1e-10);
    suite.ensure("eval_matches_dense_linear", 1e-10);
    suite.ensure("increments_orthogonal", 1e-10);
    suite.ensure("increments_pythagorean", 1e-12);
    suite.ensure("terminated_mass_monotone", 1e-12);
    suite.ensure("increment_bound_h_loop", 1e-12);
    suite.ensure("controlled_op_convention", 1e-12);
    suite.ensure("desugar_preserves_semantics", 1e-10);

    auto apply1 = [](GateKind kind) {
        Apply a;
        a.gate.kind = kind;
        a.operands = {"q"};
        return make_stmt(Stmt{a, SourceLoc{}});
    };
    std::vector<StmtPtr> bodies = {
        make_stmt(Stmt{Skip{}, SourceLoc{}}),
        apply1(GateKind::X),
        apply1(GateKind::H),
        apply1(GateKind::Z),
        seq_of({apply1(GateKind::H), apply1(GateKind::X)}),
    };
    for (int extra = 0; extra < 3; ++extra) {
        Apply a;
        a.gate.kind = GateKind::Custom;
        a.gate.custom = random_unitary2(rng);
        a.operands = {"q"};
        bodies.push_back(make_stmt(Stmt{a, SourceLoc{}}));
    }

    std::vector<Matrix> h_linear;  // saved for the basis-vector increment bound

    for (std::size_t which = 0; which < bodies.size(); ++which) {
        const StmtPtr& body = bodies[which];
        std::vector<Matrix> unitary_ops, linear_ops;
        for (std::uint32_t n = 0; n <= config.n_max; ++n) {
            const Matrix w_rec = dense_unitary_loop(decls, guard, body, n, space, LoopBuild::Recursive);
            const Matrix w_clo = dense_unitary_loop(decls, guard, body, n, space, LoopBuild::ClosedForm);
            const Matrix l_rec = dense_linear_loop(decls, guard, body, n, space, LoopBuild::Recursive);
            const Matrix l_clo = dense_linear_loop(decls, guard, body, n, space, LoopBuild::ClosedForm);
            suite.bump("unitary_recursive_equals_closed", max_abs_diff(w_rec, w_clo));
            suite.bump("linear_recursive_equals_closed", max_abs_diff(l_rec, l_clo));
            suite.bump("unitary_is_unitary", check_unitary(w_rec));
            suite.bump("linear_norm_bounded", std::max(0.0, operator_norm(l_rec) - 1.0));
            const Matrix residual =
                (Matrix::identity(dim) - running_projector_matrix(space, n)) * w_rec;
            suite.bump("linear_part_of_unitary", max_abs_diff(l_rec, residual));
            unitary_ops.push_back(w_rec);
            linear_ops.push_back(l_rec);
        }
        if (which == 2) h_linear = linear_ops;  // bodies[2] is the h body

        const StmtPtr loop_stmt = make_stmt(Stmt{While{guard, body}, SourceLoc{}});
        for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
            const std::vector<cplx> v = random_unit_vector(dim, rng);
            const Ket input = ket_of_vector(v, space);
            double prev_mass = 0.0;
            std::vector<std::vector<cplx>> linear_states;
            for (std::uint32_t n = 0; n <= config.n_max; ++n) {
                EvalConfig ecfg;
                ecfg.unroll = n;
                ecfg.mode = Mode::Unitary;
                const EvalReport unitary_run = eval(decls, loop_stmt, input, ecfg);
                suite.bump("eval_matches_dense_unitary",
                           max_abs_diff_vec(vector_of_ket(unitary_run.final, space),
                                            unitary_ops[n] * v));

                ecfg.mode = Mode::Linear;
                const EvalReport linear_run = eval(decls, loop_stmt, input, ecfg);
                const std::vector<cplx> lv = linear_ops[n] * v;
                suite.bump("eval_matches_dense_linear",
                           max_abs_diff_vec(vector_of_ket(linear_run.final, space), lv));
                linear_states.push_back(lv);

                double pythagoras = 0.0;
                for (double inc : linear_run.increments) pythagoras += inc * inc;
                suite.bump("increments_pythagorean",
                           std::abs(linear_run.terminated_mass - pythagoras));
                suite.bump("terminated_mass_monotone",
                           std::max(0.0, prev_mass - linear_run.terminated_mass));
                prev_mass = linear_run.terminated_mass;
            }
            for (std::uint32_t n = 1; n <= config.n_max; ++n)
                for (std::uint32_t m = n + 1; m <= config.n_max; ++m) {
                    cplx dot(0.0, 0.0);
                    for (std::size_t i = 0; i < dim; ++i) {
                        const cplx dn = linear_states[n][i] - linear_states[n - 1][i];
                        const cplx dm = linear_states[m][i] - linear_states[m - 1][i];
                        dot += std::conj(dn) * dm;
                    }
                    suite.bump("increments_orthogonal", std::abs(dot));
                }
        }
    }

    // Basis-vector Cauchy rate for the h-loop: each new increment shrinks by
    // at least 1/sqrt(2) per iteration.
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<cplx> e(dim);
        e[i] = 1.0;
        for (std::uint32_t n = 1; n <= config.n_max; ++n) {
            const std::vector<cplx> a = h_linear[n] * e;
            const std::vector<cplx> b = h_linear[n - 1] * e;
            std::vector<cplx> diff(dim);
            for (std::size_t k = 0; k < dim; ++k) diff[k] = a[k] - b[k];
            const double bound = std::pow(2.0, -0.5 * (static_cast<double>(n) - 1.0));
            suite.bump("increment_bound_h_loop", std::max(0.0, vec_norm(diff) - bound));
        }
    }

    // Controlled-operator convention: P0 (x) I + P1 (x) U built directly vs.
    // assembled from extended projectors and the extended gate.
    for (std::uint32_t trial = 0; trial < config.trials; ++trial) {
        const Matrix u = random_unitary2(rng);
        const SpaceSpec small{1, {1}};
        const Matrix direct = kron(bit_projector(SpaceSpec{1, {}}, QubitCoord::ancilla(1), false),
                                   Matrix::identity(2)) +
                              kron(bit_projector(SpaceSpec{1, {}}, QubitCoord::ancilla(1), true), u);
        const Matrix assembled =
            bit_projector(small, QubitCoord::ancilla(1), false) +
            bit_projector(small, QubitCoord::ancilla(1), true) *
                extended(small, u, {QubitCoord::reg_bit(0, 0)});
        suite.bump("controlled_op_convention", max_abs_diff(direct, assembled));
    }

    // Desugared ifs against the hand-built controlled construction.
    {
        const SourceUnit branch = desugar(parse("qubit g; qubit r; if g { x r; }"));
        const SpaceSpec s2{1, {1, 1}};
        const Matrix expected =
            extended(s2, matrix_of(GateSpec{GateKind::X, {}}), {QubitCoord::reg_bit(1, 0)},
                     ControlSpec{{QubitCoord::ancilla(1)}, {}}) *
            guard_copy_matrix(s2, Guard{GuardKind::QubitTrue, "g", 0}, 0, 1);
        suite.bump("desugar_preserves_semantics",
                   max_abs_diff(dense_of_program(branch.decls, branch.program, s2), expected));
    }
    {
        const SourceUnit branch = desugar(parse("qubit g; uint<2> r; if (r > 0) { h g; }"));
        const SpaceSpec s2{1, {1, 2}};
        const Matrix expected =
            extended(s2, matrix_of(GateSpec{GateKind::H, {}}), {QubitCoord::reg_bit(0, 0)},
                     ControlSpec{{QubitCoord::ancilla(1)}, {}}) *
            guard_copy_matrix(s2, Guard{GuardKind::GtZero, "r", 0}, 1, 1);
        suite.bump("desugar_preserves_semantics",
                   max_abs_diff(dense_of_program(branch.decls, branch.program, s2), expected));
    }
    {
        const SourceUnit branch =
            desugar(parse("qubit g; qubit c; qubit r; ctrl g { if c { x r; } }"));
        const SpaceSpec s3{1, {1, 1, 1}};
        const ControlSpec both{{QubitCoord::reg_bit(0, 0), QubitCoord::ancilla(1)}, {}};
        const Matrix expected =
            extended(s3, matrix_of(GateSpec{GateKind::X, {}}), {QubitCoord::reg_bit(2, 0)}, both) *
            guard_copy_matrix(s3, Guard{GuardKind::QubitTrue, "c", 0}, 1, 1,
                              ControlSpec{{QubitCoord::reg_bit(0, 0)}, {}});
        suite.bump("desugar_preserves_semantics",
                   max_abs_diff(dense_of_program(branch.decls, branch.program, s3), expected));
    }

    return suite.report;
}

bool suite_passed(const SuiteReport& report) {
    for (const auto& [name, result] : report) {
        (void)name;
        if (!result.pass) return false;
    }
    return true;
}

}  // namespace qwl
