#include "qwl/eval.hpp"

#include <charconv>
#include <cmath>
#include <map>

namespace qwl {

namespace {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

struct Ctx {
    const std::vector<Decl>& decls;
    const EvalConfig& cfg;
    std::map<std::string, std::uint32_t> slot;
    std::map<std::int32_t, std::uint32_t> token_cell;  // if token -> current tape cell
    std::uint32_t next_cell = 1;
    std::uint64_t iterations = 0;
    std::uint64_t ancillas = 0;
    std::vector<double> increments;
    bool converged = true;
    std::vector<std::string> notes;
    double final_running_mass_sq = 0.0;  // still-running mass of the last top-level loop
    bool allow_alloc = true;

    explicit Ctx(const std::vector<Decl>& d, const EvalConfig& c) : decls(d), cfg(c) {
        for (std::uint32_t i = 0; i < d.size(); ++i) slot.emplace(d[i].name, i);
    }

    const Decl& decl_of(const std::string& name) const {
        auto it = slot.find(name);
        if (it == slot.end()) throw EvalError("undeclared variable '" + name + "'");
        return decls[it->second];
    }

    std::uint32_t slot_of(const std::string& name) const {
        auto it = slot.find(name);
        if (it == slot.end()) throw EvalError("undeclared variable '" + name + "'");
        return it->second;
    }

    std::uint32_t alloc_cell() {
        if (!allow_alloc) throw EvalError("loop bodies here must be free of ifs and loops");
        if (ancillas >= cfg.ancilla_budget) throw EvalError("ancilla budget exceeded");
        ++ancillas;
        ++iterations;
        return next_cell++;
    }
};

bool controls_pass(const BasisLabel& label, const std::vector<QubitCoord>& pos,
                   const std::vector<QubitCoord>& neg) {
    for (const auto& c : pos)
        if (!read_bit(label, c)) return false;
    for (const auto& c : neg)
        if (read_bit(label, c)) return false;
    return true;
}

// Inc/Dec act as modular increments on the whole register; applying them as a
// label permutation avoids materializing the 2^width matrix.
Ket apply_incdec(const Ket& k, std::uint32_t slot, std::uint32_t width, bool increment,
                 const std::vector<QubitCoord>& pos, const std::vector<QubitCoord>& neg) {
    const std::uint64_t mask =
        width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    Ket out;
    for (const auto& [label, amp] : k.terms()) {
        if (!controls_pass(label, pos, neg)) {
            out.add_term(label, amp);
            continue;
        }
        BasisLabel moved = label;
        const std::uint64_t v = label.regs.at(slot);
        moved.regs[slot] = increment ? (v + 1) & mask : (v + mask) & mask;
        out.add_term(moved, amp);
    }
    return out;
}

class Evaluator {
public:
    Evaluator(Ctx& ctx) : m_ctx(ctx) {}

    Ket run(const StmtPtr& s, Ket state, const std::vector<QubitCoord>& ambient, bool top_level) {
        return std::visit(
            [&](const auto& node) -> Ket {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Skip>) {
                    return state;
                } else if constexpr (std::is_same_v<T, Apply>) {
                    return apply(node, std::move(state), ambient);
                } else if constexpr (std::is_same_v<T, GuardCopy>) {
                    return guard_copy(node, std::move(state), ambient);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    state = run(node.first, std::move(state), ambient, top_level);
                    return run(node.second, std::move(state), ambient, top_level);
                } else if constexpr (std::is_same_v<T, If>) {
                    throw EvalError("program contains an if; desugar before evaluating");
                } else if constexpr (std::is_same_v<T, While>) {
                    return loop(node.guard, node.body, std::move(state), ambient, top_level,
                                std::nullopt);
                } else {
                    static_assert(std::is_same_v<T, BoundedWhile>);
                    return loop(node.guard, node.body, std::move(state), ambient, top_level,
                                node.bound);
                }
            },
            s->node);
    }

    // One iteration of a loop whose tape cells are supplied by the caller.
    Ket iterate(const Guard& guard, const StmtPtr& body, Ket state,
                const std::vector<QubitCoord>& ambient, std::vector<QubitCoord>& own,
                std::uint32_t cell) {
        std::vector<QubitCoord> copy_controls = ambient;
        copy_controls.insert(copy_controls.end(), own.begin(), own.end());
        const std::uint32_t gslot = m_ctx.slot_of(guard.var);
        state = apply_guard_flip(state, guard_flip(guard, gslot, cell),
                                 ControlSpec{copy_controls, {}});
        own.push_back(QubitCoord::ancilla(cell));
        std::vector<QubitCoord> body_ambient = ambient;
        body_ambient.insert(body_ambient.end(), own.begin(), own.end());
        return run(body, std::move(state), body_ambient, false);
    }

private:
    void resolve_controls(const std::vector<CtrlRef>& ctrls, const std::vector<QubitCoord>& ambient,
                          std::vector<QubitCoord>& pos, std::vector<QubitCoord>& neg) const {
        pos = ambient;
        for (const auto& c : ctrls) {
            if (c.slot >= 0) {
                auto it = m_ctx.token_cell.find(c.slot);
                if (it == m_ctx.token_cell.end())
                    throw EvalError("if token used before its guard copy");
                pos.push_back(QubitCoord::ancilla(it->second));
            } else {
                const QubitCoord coord = QubitCoord::reg_bit(m_ctx.slot_of(c.var), 0);
                (c.negated ? neg : pos).push_back(coord);
            }
        }
    }

    Ket apply(const Apply& node, Ket state, const std::vector<QubitCoord>& ambient) {
        std::vector<QubitCoord> pos, neg;
        resolve_controls(node.ctrls, ambient, pos, neg);
        const GateKind kind = node.gate.kind;
        if (kind == GateKind::Inc || kind == GateKind::Dec) {
            const Decl& d = m_ctx.decl_of(node.operands.at(0));
            Ket out = apply_incdec(state, m_ctx.slot_of(d.name), d.width, kind == GateKind::Inc,
                                   pos, neg);
            out.prune(m_ctx.cfg.prune_eps);
            return out;
        }
        std::vector<QubitCoord> targets;
        targets.reserve(node.operands.size());
        for (const auto& operand : node.operands)
            targets.push_back(QubitCoord::reg_bit(m_ctx.slot_of(operand), 0));
        return apply_local(state, matrix_of(node.gate), targets, pos, neg, m_ctx.cfg.prune_eps);
    }

    Ket guard_copy(const GuardCopy& node, Ket state, const std::vector<QubitCoord>& ambient) {
        std::vector<QubitCoord> pos, neg;
        resolve_controls(node.ctrls, ambient, pos, neg);
        const std::uint32_t cell = m_ctx.alloc_cell();
        m_ctx.token_cell[node.slot] = cell;
        const std::uint32_t gslot = m_ctx.slot_of(node.guard.var);
        return apply_guard_flip(state, guard_flip(node.guard, gslot, cell), ControlSpec{pos, neg});
    }

    static std::vector<std::pair<QubitCoord, bool>> all_ones(const std::vector<QubitCoord>& coords) {
        std::vector<std::pair<QubitCoord, bool>> out;
        out.reserve(coords.size());
        for (const auto& c : coords) out.emplace_back(c, true);
        return out;
    }

    Ket loop(const Guard& guard, const StmtPtr& body, Ket state,
             const std::vector<QubitCoord>& ambient, bool top_level,
             std::optional<std::uint64_t> own_bound) {
        const EvalConfig& cfg = m_ctx.cfg;
        std::optional<std::uint64_t> limit = own_bound;
        bool use_fixpoint = false;
        if (!limit) {
            if (cfg.unroll) {
                limit = *cfg.unroll;
            } else if (cfg.fixpoint) {
                if (cfg.mode != Mode::Linear)
                    throw std::invalid_argument("fixpoint iteration requires Linear mode");
                use_fixpoint = true;
            } else {
                throw EvalError("unbounded loop reached without an iteration policy");
            }
        }

        std::vector<QubitCoord> own;
        Ket running = project_bits(state, all_ones(ambient));
        if (top_level && cfg.trace) cfg.trace(0, state, running);

        std::uint32_t stall = 0;
        bool exact_exit = false;
        std::uint64_t ran = 0;
        for (std::uint64_t i = 1; !limit || i <= *limit; ++i) {
            if (use_fixpoint && i > cfg.fixpoint->max_iter) {
                m_ctx.converged = false;
                m_ctx.notes.push_back("loop did not converge within " +
                                      std::to_string(cfg.fixpoint->max_iter) + " iterations");
                break;
            }
            const std::uint32_t cell = m_ctx.alloc_cell();
            std::vector<std::pair<QubitCoord, bool>> newly = all_ones(ambient);
            for (const auto& c : own) newly.emplace_back(c, true);
            newly.emplace_back(QubitCoord::ancilla(cell), false);

            state = iterate(guard, body, std::move(state), ambient, own, cell);
            ran = i;

            const double increment = norm(project_bits(state, newly));
            running = project_bits(state, all_ones(body_coords(ambient, own)));
            if (top_level) m_ctx.increments.push_back(increment);
            if (top_level && cfg.trace) cfg.trace(i, state, running);

            if (running.empty()) {
                exact_exit = true;
                break;
            }
            if (use_fixpoint) {
                stall = increment < cfg.fixpoint->eps ? stall + 1 : 0;
                if (stall >= cfg.fixpoint->window) break;
            }
        }

        if (use_fixpoint && !exact_exit && m_ctx.converged) {
            const double leftover = norm(running);
            if (leftover * leftover > cfg.fixpoint->eps)
                m_ctx.notes.push_back("stopped by stall window after " + std::to_string(ran) +
                                      " iterations with still-running mass " +
                                      format_double(leftover * leftover) +
                                      "; the loop may still be progressing");
        }
        if (top_level) {
            const double r = norm(running);
            m_ctx.final_running_mass_sq = r * r;
        }
        if (cfg.mode == Mode::Linear) {
            state = add_scaled(cplx(-1.0, 0.0), running, state, cfg.prune_eps);
        }
        return state;
    }

    static std::vector<QubitCoord> body_coords(const std::vector<QubitCoord>& ambient,
                                               const std::vector<QubitCoord>& own) {
        std::vector<QubitCoord> out = ambient;
        out.insert(out.end(), own.begin(), own.end());
        return out;
    }

    Ctx& m_ctx;
};

Ket input_or_throw(const std::vector<Decl>& decls, const Ket& input) {
    for (const auto& [label, amp] : input.terms()) {
        (void)amp;
        if (label.regs.size() != decls.size())
            throw EvalError("input state has a register count different from the declarations");
    }
    return input;
}

EvalReport eval_core(const std::vector<Decl>& decls, const StmtPtr& program, const Ket& input,
                     const EvalConfig& config) {
    if (config.unroll && config.fixpoint)
        throw std::invalid_argument("choose either a fixed unroll depth or fixpoint iteration");
    if (config.fixpoint && config.mode != Mode::Linear)
        throw std::invalid_argument("fixpoint iteration requires Linear mode");
    Ctx ctx(decls, config);
    Evaluator ev(ctx);
    EvalReport report;
    report.final = ev.run(program, input_or_throw(decls, input), {}, true);
    report.iterations_run = ctx.iterations;
    report.ancillas_used = ctx.ancillas;
    report.increments = std::move(ctx.increments);
    report.converged = ctx.converged;
    report.notes = std::move(ctx.notes);
    const double n = norm(report.final);
    if (config.mode == Mode::Linear)
        report.terminated_mass = n * n;
    else
        report.terminated_mass = std::max(0.0, n * n - ctx.final_running_mass_sq);
    return report;
}

StmtPtr loop_of(const Guard& guard, const StmtPtr& body) {
    return make_stmt(Stmt{While{guard, body}, SourceLoc{}});
}

}  // namespace

Ket initial_state(const std::vector<Decl>& decls) {
    std::vector<std::uint64_t> regs;
    regs.reserve(decls.size());
    for (const auto& d : decls) regs.push_back(d.init);
    return Ket::basis(BasisLabel("", std::move(regs)));
}

EvalReport eval(const std::vector<Decl>& decls, const StmtPtr& program, const Ket& input,
                const EvalConfig& config) {
    if (std::abs(norm(input) - 1.0) > 1e-9)
        throw EvalError("input state must be normalized");
    return eval_core(decls, program, input, config);
}

Ket loop_step(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body, const Ket& k,
              std::uint32_t iteration) {
    if (iteration == 0) throw std::invalid_argument("iterations are numbered from 1");
    EvalConfig config;
    Ctx ctx(decls, config);
    ctx.allow_alloc = false;
    Evaluator ev(ctx);
    std::vector<QubitCoord> own;
    own.reserve(iteration - 1);
    for (std::uint32_t c = 1; c < iteration; ++c) own.push_back(QubitCoord::ancilla(c));
    return ev.iterate(guard, body, k, {}, own, iteration);
}

ProjectorSpec still_running_projector(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("still_running_projector requires n >= 1");
    std::vector<std::pair<std::uint32_t, bool>> constraints;
    constraints.reserve(n);
    for (std::uint32_t c = 1; c <= n; ++c) constraints.emplace_back(c, true);
    return ProjectorSpec::onto(std::move(constraints));
}

Ket eval_linear_n(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                  const Ket& input, std::uint64_t n, double prune_eps) {
    EvalConfig config;
    config.mode = Mode::Linear;
    config.unroll = n;
    config.prune_eps = prune_eps;
    return eval_core(decls, loop_of(guard, body), input, config).final;
}

double terminated_mass(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                       const Ket& input, std::uint64_t n) {
    const double m = norm(eval_linear_n(decls, guard, body, input, n));
    return m * m;
}

EvalReport fixpoint(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                    const Ket& input, const FixpointConfig& config, double prune_eps) {
    EvalConfig full;
    full.mode = Mode::Linear;
    full.fixpoint = config;
    full.prune_eps = prune_eps;
    return eval_core(decls, loop_of(guard, body), input, full);
}

}  // namespace qwl
