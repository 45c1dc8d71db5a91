#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qwl/gates.hpp"

namespace qwl {

// Declared variable: a single qubit or an unsigned register of `width` bits
// initialized to `init`.  A qubit is stored as a width-1 register.
struct Decl {
    enum class Kind { Qubit, UInt };
    Kind kind = Kind::Qubit;
    std::string name;
    std::uint32_t width = 1;
    std::uint64_t init = 0;

    bool operator==(const Decl&) const = default;
};

// One control wrapped around a statement: a declared qubit (by name) from a
// ctrl/nctrl block, or — after desugaring — the fresh tape cell of an if,
// identified by a desugar-assigned token `slot`.
struct CtrlRef {
    std::string var;       // empty for token controls
    std::int32_t slot = -1;  // >= 0 for token controls
    bool negated = false;  // nctrl; token controls are never negated

    bool operator==(const CtrlRef&) const = default;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct Skip {};

struct Apply {
    GateSpec gate;
    std::vector<std::string> operands;
    std::vector<CtrlRef> ctrls;
};

// Core-only statement produced by desugaring an if: flips the tape cell bound
// to token `slot` on states where `guard` holds.
struct GuardCopy {
    Guard guard;
    std::int32_t slot = 0;
    std::vector<CtrlRef> ctrls;
};

struct Seq {
    StmtPtr first;
    StmtPtr second;
};

struct If {
    Guard guard;
    StmtPtr body;
    std::vector<CtrlRef> ctrls;
};

struct While {
    Guard guard;
    StmtPtr body;
};

struct BoundedWhile {
    std::uint64_t bound = 0;
    Guard guard;
    StmtPtr body;
};

struct Stmt {
    std::variant<Skip, Apply, GuardCopy, Seq, If, While, BoundedWhile> node;
    SourceLoc loc;
};

StmtPtr make_stmt(Stmt s);

// A parsed file: declarations followed by the program body.
struct SourceUnit {
    std::vector<Decl> decls;
    StmtPtr program;
};

struct Diagnostic {
    SourceLoc loc;
    std::string message;
};

bool equals(const StmtPtr& a, const StmtPtr& b);

// Canonical, re-parseable source for a surface-syntax AST (no GuardCopy, no
// token controls).  parse(pretty(unit)) reproduces the unit structurally.
std::string pretty(const SourceUnit& unit);

// Structural checks over an arbitrarily built AST; returns every violation
// found, in source order, and never throws.  Empty result means the unit
// satisfies all invariants assumed by evaluation.
std::vector<Diagnostic> validate(const SourceUnit& unit);

// Rewrites every if into a guard copy onto a fresh token followed by the body
// under that token as a positive control.  Throws ValidationError if an if
// body contains a loop (such a branch has no sound controlled form).
SourceUnit desugar(const SourceUnit& unit);

// Keywords and gate names; none of these may be declared as variables.
const std::vector<std::string>& reserved_words();

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return m_diagnostics; }

private:
    std::vector<Diagnostic> m_diagnostics;
};

}  // namespace qwl
