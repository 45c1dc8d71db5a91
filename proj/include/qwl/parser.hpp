#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qwl/ast.hpp"

namespace qwl {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourceLoc loc, const std::string& message)
        : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + message),
          m_loc(loc) {}

    SourceLoc where() const { return m_loc; }

private:
    SourceLoc m_loc;
};

// Parses a source file and checks every structural invariant.  Throws
// SyntaxError on malformed input and ValidationError when the program is
// grammatical but ill-formed (undeclared variables, arity mismatches,
// non-unitary custom gates, ...).
SourceUnit parse(const std::string& source);

// Syntax only; the caller is responsible for running validate().
SourceUnit parse_unchecked(const std::string& source);

// Folds statements into a right-nested sequence; parse() builds blocks the
// same way, so ASTs assembled with this helper round-trip through pretty().
StmtPtr seq_of(std::vector<StmtPtr> stmts);

}  // namespace qwl
