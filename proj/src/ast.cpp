#include "qwl/ast.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qwl {

StmtPtr make_stmt(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }

const std::vector<std::string>& reserved_words() {
    static const std::vector<std::string> words = {"skip", "ctrl", "nctrl", "if",  "while", "qubit", "uint",
                                                   "x",    "h",    "z",     "cx",  "inc",   "dec",   "u"};
    return words;
}

namespace {

std::string loc_prefix(const SourceLoc& loc) {
    std::ostringstream os;
    os << loc.line << ":" << loc.col << ": ";
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(diagnostics.empty()
                             ? std::string("validation failed")
                             : loc_prefix(diagnostics.front().loc) + diagnostics.front().message +
                                   (diagnostics.size() > 1
                                        ? " (+" + std::to_string(diagnostics.size() - 1) + " more)"
                                        : "")),
      m_diagnostics(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// structural equality

bool equals(const StmtPtr& a, const StmtPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, Skip>) {
                return true;
            } else if constexpr (std::is_same_v<T, Apply>) {
                return lhs.gate == rhs.gate && lhs.operands == rhs.operands && lhs.ctrls == rhs.ctrls;
            } else if constexpr (std::is_same_v<T, GuardCopy>) {
                return lhs.guard == rhs.guard && lhs.slot == rhs.slot && lhs.ctrls == rhs.ctrls;
            } else if constexpr (std::is_same_v<T, Seq>) {
                return equals(lhs.first, rhs.first) && equals(lhs.second, rhs.second);
            } else if constexpr (std::is_same_v<T, If>) {
                return lhs.guard == rhs.guard && lhs.ctrls == rhs.ctrls && equals(lhs.body, rhs.body);
            } else if constexpr (std::is_same_v<T, While>) {
                return lhs.guard == rhs.guard && equals(lhs.body, rhs.body);
            } else {
                static_assert(std::is_same_v<T, BoundedWhile>);
                return lhs.bound == rhs.bound && lhs.guard == rhs.guard && equals(lhs.body, rhs.body);
            }
        },
        a->node);
}

// ---------------------------------------------------------------------------
// pretty printer

namespace {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

std::string format_complex(cplx value) {
    if (value.imag() == 0.0) return format_double(value.real());
    if (value.real() == 0.0) return format_double(value.imag()) + "i";
    std::string out = format_double(value.real());
    if (value.imag() < 0.0)
        out += "-" + format_double(-value.imag());
    else
        out += "+" + format_double(value.imag());
    return out + "i";
}

std::string guard_text(const Guard& guard) {
    switch (guard.kind) {
        case GuardKind::QubitTrue:
            return guard.var;
        case GuardKind::GtZero:
            return "(" + guard.var + " > 0)";
        case GuardKind::EqConst:
            return "(" + guard.var + " == " + std::to_string(guard.value) + ")";
    }
    return guard.var;
}

std::string gate_text(const GateSpec& gate) {
    switch (gate.kind) {
        case GateKind::X:
            return "x";
        case GateKind::H:
            return "h";
        case GateKind::Z:
            return "z";
        case GateKind::CX:
            return "cx";
        case GateKind::Inc:
            return "inc";
        case GateKind::Dec:
            return "dec";
        case GateKind::Custom: {
            std::string out = "u[";
            for (std::size_t i = 0; i < gate.custom.dim(); ++i) {
                out += i == 0 ? "[" : ",[";
                for (std::size_t j = 0; j < gate.custom.dim(); ++j) {
                    if (j) out += ",";
                    out += format_complex(gate.custom.at(i, j));
                }
                out += "]";
            }
            return out + "]";
        }
    }
    return "?";
}

class PrettyWriter {
public:
    std::string take() { return std::move(m_out); }

    void decl(const Decl& d) {
        if (d.kind == Decl::Kind::Qubit) {
            m_out += "qubit " + d.name + ";\n";
        } else {
            m_out += "uint<" + std::to_string(d.width) + "> " + d.name;
            if (d.init != 0) m_out += " = " + std::to_string(d.init);
            m_out += ";\n";
        }
    }

    void stmt(const StmtPtr& s, int indent) {
        if (const auto* seq = std::get_if<Seq>(&s->node)) {
            stmt(seq->first, indent);
            stmt(seq->second, indent);
            return;
        }
        std::visit([this, indent](const auto& node) { emit(node, indent); }, s->node);
    }

private:
    void pad(int indent) { m_out.append(static_cast<std::size_t>(indent) * 2, ' '); }

    // Controls print as nested ctrl/nctrl blocks, outermost first.
    void wrapped(const std::vector<CtrlRef>& ctrls, std::size_t next, int indent,
                 const std::function<void(int)>& inner) {
        if (next == ctrls.size()) {
            inner(indent);
            return;
        }
        const CtrlRef& c = ctrls[next];
        if (c.slot >= 0) throw std::invalid_argument("token controls have no surface syntax");
        pad(indent);
        m_out += (c.negated ? "nctrl " : "ctrl ") + c.var + " {\n";
        wrapped(ctrls, next + 1, indent + 1, inner);
        pad(indent);
        m_out += "}\n";
    }

    void emit(const Skip&, int indent) {
        pad(indent);
        m_out += "skip;\n";
    }

    void emit(const Apply& a, int indent) {
        wrapped(a.ctrls, 0, indent, [this, &a](int at) {
            pad(at);
            m_out += gate_text(a.gate);
            for (const auto& operand : a.operands) m_out += " " + operand;
            m_out += ";\n";
        });
    }

    void emit(const GuardCopy&, int) {
        throw std::invalid_argument("guard copies have no surface syntax");
    }

    void emit(const Seq&, int) {}  // handled in stmt()

    void emit(const If& node, int indent) {
        wrapped(node.ctrls, 0, indent, [this, &node](int at) {
            pad(at);
            m_out += "if " + guard_text(node.guard) + " {\n";
            stmt(node.body, at + 1);
            pad(at);
            m_out += "}\n";
        });
    }

    void emit(const While& node, int indent) {
        pad(indent);
        m_out += "while " + guard_text(node.guard) + " {\n";
        stmt(node.body, indent + 1);
        pad(indent);
        m_out += "}\n";
    }

    void emit(const BoundedWhile& node, int indent) {
        pad(indent);
        m_out += "while<" + std::to_string(node.bound) + "> " + guard_text(node.guard) + " {\n";
        stmt(node.body, indent + 1);
        pad(indent);
        m_out += "}\n";
    }

    std::string m_out;
};

}  // namespace

std::string pretty(const SourceUnit& unit) {
    PrettyWriter writer;
    for (const auto& d : unit.decls) writer.decl(d);
    if (unit.program) writer.stmt(unit.program, 0);
    return writer.take();
}

// ---------------------------------------------------------------------------
// validation

namespace {

class Validator {
public:
    explicit Validator(const SourceUnit& unit) : m_unit(unit) {}

    std::vector<Diagnostic> run() {
        check_decls();
        if (m_unit.program) check_stmt(m_unit.program, false);
        return std::move(m_diags);
    }

private:
    void report(const SourceLoc& loc, std::string message) {
        m_diags.push_back(Diagnostic{loc, std::move(message)});
    }

    static bool init_fits(std::uint64_t init, std::uint32_t width) {
        if (width >= 64) return true;
        return (init >> width) == 0;
    }

    void check_decls() {
        const auto& reserved = reserved_words();
        for (const auto& d : m_unit.decls) {
            SourceLoc loc{};  // declarations carry no location; report at 0:0
            if (d.name.empty()) report(loc, "declaration with empty name");
            for (const auto& word : reserved)
                if (d.name == word) report(loc, "'" + d.name + "' is a reserved word");
            if (!m_slots.emplace(d.name, static_cast<std::uint32_t>(&d - m_unit.decls.data())).second)
                report(loc, "duplicate declaration of '" + d.name + "'");
            if (d.kind == Decl::Kind::Qubit && d.width != 1)
                report(loc, "qubit '" + d.name + "' must have width 1");
            if (d.width == 0 || d.width > 63)
                report(loc, "register '" + d.name + "' width must be between 1 and 63");
            else if (!init_fits(d.init, d.width))
                report(loc, "initial value of '" + d.name + "' does not fit in " +
                                std::to_string(d.width) + " bits");
        }
    }

    const Decl* lookup(const std::string& name) {
        auto it = m_slots.find(name);
        return it == m_slots.end() ? nullptr : &m_unit.decls[it->second];
    }

    void check_guard(const Guard& guard, const SourceLoc& loc) {
        const Decl* d = lookup(guard.var);
        if (!d) {
            report(loc, "undeclared variable '" + guard.var + "' in guard");
            return;
        }
        if (guard.kind == GuardKind::QubitTrue && d->width != 1)
            report(loc, "guard variable '" + guard.var + "' must be a single qubit");
        if (guard.kind == GuardKind::EqConst && !init_fits(guard.value, d->width))
            report(loc, "guard constant does not fit in register '" + guard.var + "'");
    }

    void check_ctrls(const std::vector<CtrlRef>& ctrls, const std::vector<std::string>& operands,
                     const SourceLoc& loc) {
        std::set<std::string> seen;
        for (const auto& c : ctrls) {
            if (c.slot >= 0) {
                if (c.negated) report(loc, "token controls cannot be negated");
                continue;
            }
            const Decl* d = lookup(c.var);
            if (!d) {
                report(loc, "undeclared control variable '" + c.var + "'");
                continue;
            }
            if (d->width != 1) report(loc, "control variable '" + c.var + "' must be a single qubit");
            if (!seen.insert(c.var).second) report(loc, "variable '" + c.var + "' controls a statement twice");
            for (const auto& operand : operands)
                if (operand == c.var)
                    report(loc, "control variable '" + c.var + "' overlaps an operand");
        }
    }

    void check_apply(const Apply& a, const SourceLoc& loc) {
        const GateSpec& g = a.gate;
        if (g.kind == GateKind::Custom) {
            std::size_t dim = g.custom.dim();
            const bool power_of_two = dim >= 2 && (dim & (dim - 1)) == 0;
            if (!power_of_two)
                report(loc, "custom gate dimension must be a power of two, at least 2");
            else if (check_unitary(g.custom) > 1e-9)
                report(loc, "custom gate matrix is not unitary");
        }
        if (a.operands.size() != g.operand_count())
            report(loc, "gate expects " + std::to_string(g.operand_count()) + " operand(s), got " +
                            std::to_string(a.operands.size()));
        std::set<std::string> seen;
        for (const auto& operand : a.operands) {
            const Decl* d = lookup(operand);
            if (!d) {
                report(loc, "undeclared variable '" + operand + "'");
                continue;
            }
            if (!seen.insert(operand).second) report(loc, "operand '" + operand + "' repeated");
            const bool register_gate = g.kind == GateKind::Inc || g.kind == GateKind::Dec;
            if (register_gate && d->kind != Decl::Kind::UInt)
                report(loc, "'" + gate_text(g) + "' expects a uint register, got qubit '" + operand + "'");
            if (!register_gate && d->width != 1)
                report(loc, "'" + gate_text(g) + "' expects single qubits, got register '" + operand + "'");
        }
        check_ctrls(a.ctrls, a.operands, loc);
    }

    static bool contains_loop(const StmtPtr& s) {
        if (!s) return false;
        if (std::holds_alternative<While>(s->node) || std::holds_alternative<BoundedWhile>(s->node))
            return true;
        if (const auto* seq = std::get_if<Seq>(&s->node))
            return contains_loop(seq->first) || contains_loop(seq->second);
        if (const auto* branch = std::get_if<If>(&s->node)) return contains_loop(branch->body);
        return false;
    }

    void check_stmt(const StmtPtr& s, bool inside_if) {
        std::visit(
            [this, &s, inside_if](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Skip>) {
                    (void)node;
                } else if constexpr (std::is_same_v<T, Apply>) {
                    check_apply(node, s->loc);
                } else if constexpr (std::is_same_v<T, GuardCopy>) {
                    check_guard(node.guard, s->loc);
                    if (node.slot < 0) report(s->loc, "guard copy with unassigned token");
                    check_ctrls(node.ctrls, {}, s->loc);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    check_stmt(node.first, inside_if);
                    check_stmt(node.second, inside_if);
                } else if constexpr (std::is_same_v<T, If>) {
                    check_guard(node.guard, s->loc);
                    check_ctrls(node.ctrls, {}, s->loc);
                    if (contains_loop(node.body))
                        report(s->loc, "if body must not contain while loops");
                    check_stmt(node.body, true);
                } else {
                    check_guard(node.guard, s->loc);
                    if (inside_if) report(s->loc, "while loop inside an if body");
                    check_stmt(node.body, inside_if);
                }
            },
            s->node);
    }

    const SourceUnit& m_unit;
    std::map<std::string, std::uint32_t> m_slots;
    std::vector<Diagnostic> m_diags;
};

}  // namespace

std::vector<Diagnostic> validate(const SourceUnit& unit) { return Validator(unit).run(); }

// ---------------------------------------------------------------------------
// desugaring

namespace {

// Appends `extra` to the control list of every gate application and guard
// copy in an already-desugared statement.
StmtPtr add_controls(const StmtPtr& s, const std::vector<CtrlRef>& extra) {
    if (extra.empty()) return s;
    Stmt out = *s;
    if (auto* a = std::get_if<Apply>(&out.node)) {
        a->ctrls.insert(a->ctrls.end(), extra.begin(), extra.end());
    } else if (auto* g = std::get_if<GuardCopy>(&out.node)) {
        g->ctrls.insert(g->ctrls.end(), extra.begin(), extra.end());
    } else if (auto* seq = std::get_if<Seq>(&out.node)) {
        seq->first = add_controls(seq->first, extra);
        seq->second = add_controls(seq->second, extra);
    } else if (std::holds_alternative<Skip>(out.node)) {
        return s;
    } else {
        throw ValidationError({Diagnostic{s->loc, "if body must not contain while loops"}});
    }
    return make_stmt(std::move(out));
}

StmtPtr desugar_stmt(const StmtPtr& s, std::int32_t& next_token) {
    return std::visit(
        [&s, &next_token](const auto& node) -> StmtPtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, Apply> ||
                          std::is_same_v<T, GuardCopy>) {
                return s;
            } else if constexpr (std::is_same_v<T, Seq>) {
                Seq out;
                out.first = desugar_stmt(node.first, next_token);
                out.second = desugar_stmt(node.second, next_token);
                return make_stmt(Stmt{out, s->loc});
            } else if constexpr (std::is_same_v<T, If>) {
                StmtPtr body = desugar_stmt(node.body, next_token);
                const std::int32_t token = next_token++;
                GuardCopy copy{node.guard, token, node.ctrls};
                std::vector<CtrlRef> onto = node.ctrls;
                onto.push_back(CtrlRef{"", token, false});
                Seq out;
                out.first = make_stmt(Stmt{copy, s->loc});
                out.second = add_controls(body, onto);
                return make_stmt(Stmt{out, s->loc});
            } else if constexpr (std::is_same_v<T, While>) {
                While out{node.guard, desugar_stmt(node.body, next_token)};
                return make_stmt(Stmt{out, s->loc});
            } else {
                static_assert(std::is_same_v<T, BoundedWhile>);
                BoundedWhile out{node.bound, node.guard, desugar_stmt(node.body, next_token)};
                return make_stmt(Stmt{out, s->loc});
            }
        },
        s->node);
}

}  // namespace

SourceUnit desugar(const SourceUnit& unit) {
    SourceUnit out;
    out.decls = unit.decls;
    if (unit.program) {
        std::int32_t next_token = 0;
        out.program = desugar_stmt(unit.program, next_token);
    }
    return out;
}

}  // namespace qwl
