#include "qwl/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace qwl {

namespace {

enum class Tok {
    Ident,
    Int,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Lt,
    Gt,
    Assign,
    EqEq,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::uint64_t value = 0;
    SourceLoc loc;
};

const char* token_name(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::Semi: return "';'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::Assign: return "'='";
        case Tok::EqEq: return "'=='";
        case Tok::End: return "end of input";
    }
    return "?";
}

// Lazy scanner.  Matrix literals are read at character level by the parser
// (their complex-number grammar does not tokenize cleanly), so the scanner
// exposes its raw position alongside the usual token stream.
class Scanner {
public:
    explicit Scanner(const std::string& source) : m_src(source) {}

    SourceLoc here() const { return SourceLoc{m_line, m_col}; }

    Token next() {
        skip_blank();
        Token tok;
        tok.loc = here();
        if (m_pos >= m_src.size()) return tok;
        const char c = m_src[m_pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (m_pos < m_src.size() &&
                   (std::isalnum(static_cast<unsigned char>(m_src[m_pos])) || m_src[m_pos] == '_'))
                tok.text += take();
            tok.kind = Tok::Ident;
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (m_pos < m_src.size() && std::isdigit(static_cast<unsigned char>(m_src[m_pos])))
                tok.text += take();
            auto [end, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
            if (ec != std::errc() || end != tok.text.data() + tok.text.size())
                throw SyntaxError(tok.loc, "integer literal out of range");
            tok.kind = Tok::Int;
            return tok;
        }
        take();
        switch (c) {
            case ';': tok.kind = Tok::Semi; return tok;
            case '{': tok.kind = Tok::LBrace; return tok;
            case '}': tok.kind = Tok::RBrace; return tok;
            case '(': tok.kind = Tok::LParen; return tok;
            case ')': tok.kind = Tok::RParen; return tok;
            case '<': tok.kind = Tok::Lt; return tok;
            case '>': tok.kind = Tok::Gt; return tok;
            case '=':
                if (m_pos < m_src.size() && m_src[m_pos] == '=') {
                    take();
                    tok.kind = Tok::EqEq;
                } else {
                    tok.kind = Tok::Assign;
                }
                return tok;
            default:
                throw SyntaxError(tok.loc, std::string("unexpected character '") + c + "'");
        }
    }

    // --- character-level access for matrix literals ---

    void skip_blank() {
        while (m_pos < m_src.size()) {
            const char c = m_src[m_pos];
            if (c == '#') {
                while (m_pos < m_src.size() && m_src[m_pos] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    char peek_char() { return m_pos < m_src.size() ? m_src[m_pos] : '\0'; }

    char take() {
        const char c = m_src[m_pos++];
        if (c == '\n') {
            ++m_line;
            m_col = 1;
        } else {
            ++m_col;
        }
        return c;
    }

    void expect_char(char want, const char* what) {
        skip_blank();
        if (peek_char() != want) throw SyntaxError(here(), std::string("expected ") + what);
        take();
    }

    double scan_double() {
        skip_blank();
        const SourceLoc at = here();
        // from_chars rejects a leading '+', so consume it here.
        bool negate = false;
        if (peek_char() == '+') take();
        else if (peek_char() == '-') {
            take();
            negate = true;
        }
        std::size_t end = m_pos;
        while (end < m_src.size() && (std::isdigit(static_cast<unsigned char>(m_src[end])) ||
                                      m_src[end] == '.' || m_src[end] == 'e' || m_src[end] == 'E' ||
                                      ((m_src[end] == '+' || m_src[end] == '-') &&
                                       (m_src[end - 1] == 'e' || m_src[end - 1] == 'E'))))
            ++end;
        double value = 0.0;
        auto [parsed, ec] = std::from_chars(m_src.data() + m_pos, m_src.data() + end, value);
        if (ec != std::errc() || parsed == m_src.data() + m_pos)
            throw SyntaxError(at, "expected a number");
        while (m_pos < m_src.size() && m_src.data() + m_pos != parsed) take();
        return negate ? -value : value;
    }

    // number ['i'] | number ('+'|'-') number 'i'
    cplx scan_complex() {
        const double first = scan_double();
        skip_blank();
        if (peek_char() == 'i') {
            take();
            return cplx(0.0, first);
        }
        if (peek_char() == '+' || peek_char() == '-') {
            const double second = scan_double();
            skip_blank();
            if (peek_char() != 'i') throw SyntaxError(here(), "expected 'i' after imaginary part");
            take();
            return cplx(first, second);
        }
        return cplx(first, 0.0);
    }

private:
    const std::string& m_src;
    std::size_t m_pos = 0;
    int m_line = 1;
    int m_col = 1;
};

class Parser {
public:
    explicit Parser(const std::string& source) : m_scan(source) { advance(); }

    SourceUnit run() {
        SourceUnit unit;
        while (m_tok.kind == Tok::Ident && (m_tok.text == "qubit" || m_tok.text == "uint"))
            unit.decls.push_back(parse_decl());
        std::vector<StmtPtr> stmts;
        while (m_tok.kind != Tok::End) stmts.push_back(parse_stmt());
        if (stmts.empty()) throw SyntaxError(m_tok.loc, "expected a statement");
        unit.program = seq_of(std::move(stmts));
        return unit;
    }

private:
    void advance() { m_tok = m_scan.next(); }

    Token expect(Tok kind, const char* what) {
        if (m_tok.kind != kind)
            throw SyntaxError(m_tok.loc, std::string("expected ") + what + ", got " + token_name(m_tok.kind));
        Token tok = m_tok;
        advance();
        return tok;
    }

    std::string expect_ident() { return expect(Tok::Ident, "identifier").text; }

    Decl parse_decl() {
        Decl d;
        if (m_tok.text == "qubit") {
            advance();
            d.kind = Decl::Kind::Qubit;
            d.width = 1;
            d.name = expect_ident();
        } else {
            advance();
            d.kind = Decl::Kind::UInt;
            expect(Tok::Lt, "'<'");
            const Token width = expect(Tok::Int, "register width");
            if (width.value == 0 || width.value > 63)
                throw SyntaxError(width.loc, "register width must be between 1 and 63");
            d.width = static_cast<std::uint32_t>(width.value);
            expect(Tok::Gt, "'>'");
            d.name = expect_ident();
            if (m_tok.kind == Tok::Assign) {
                advance();
                d.init = expect(Tok::Int, "initial value").value;
            }
        }
        expect(Tok::Semi, "';'");
        return d;
    }

    Guard parse_guard() {
        if (m_tok.kind == Tok::Ident) {
            Guard g{GuardKind::QubitTrue, expect_ident(), 0};
            return g;
        }
        expect(Tok::LParen, "guard");
        const std::string var = expect_ident();
        Guard g;
        g.var = var;
        if (m_tok.kind == Tok::Gt) {
            advance();
            const Token zero = expect(Tok::Int, "'0'");
            if (zero.value != 0) throw SyntaxError(zero.loc, "comparison guards only support '> 0'");
            g.kind = GuardKind::GtZero;
        } else if (m_tok.kind == Tok::EqEq) {
            advance();
            g.kind = GuardKind::EqConst;
            g.value = expect(Tok::Int, "guard constant").value;
        } else {
            throw SyntaxError(m_tok.loc, "expected '>' or '==' in guard");
        }
        expect(Tok::RParen, "')'");
        return g;
    }

    std::vector<StmtPtr> parse_block() {
        expect(Tok::LBrace, "'{'");
        std::vector<StmtPtr> stmts;
        while (m_tok.kind != Tok::RBrace) {
            if (m_tok.kind == Tok::End) throw SyntaxError(m_tok.loc, "unterminated block");
            stmts.push_back(parse_stmt());
        }
        advance();
        if (stmts.empty()) throw SyntaxError(m_tok.loc, "blocks must contain at least one statement");
        return stmts;
    }

    // Distributes a ctrl/nctrl wrapper onto a block statement.  Controls
    // attach to gate applications and ifs; loops cannot be controlled.
    StmtPtr distribute_ctrl(const StmtPtr& s, const CtrlRef& ctrl) {
        Stmt out = *s;
        if (auto* a = std::get_if<Apply>(&out.node)) {
            a->ctrls.insert(a->ctrls.begin(), ctrl);
        } else if (auto* branch = std::get_if<If>(&out.node)) {
            branch->ctrls.insert(branch->ctrls.begin(), ctrl);
        } else if (auto* seq = std::get_if<Seq>(&out.node)) {
            seq->first = distribute_ctrl(seq->first, ctrl);
            seq->second = distribute_ctrl(seq->second, ctrl);
        } else if (std::holds_alternative<Skip>(out.node)) {
            return s;
        } else {
            throw SyntaxError(s->loc, "while loops cannot appear inside ctrl/nctrl blocks");
        }
        return make_stmt(std::move(out));
    }

    StmtPtr parse_stmt() {
        const SourceLoc at = m_tok.loc;
        if (m_tok.kind != Tok::Ident) throw SyntaxError(at, "expected a statement");
        const std::string head = m_tok.text;

        if (head == "skip") {
            advance();
            expect(Tok::Semi, "';'");
            return make_stmt(Stmt{Skip{}, at});
        }
        if (head == "ctrl" || head == "nctrl") {
            advance();
            CtrlRef ctrl{expect_ident(), -1, head == "nctrl"};
            std::vector<StmtPtr> body = parse_block();
            std::vector<StmtPtr> wrapped;
            wrapped.reserve(body.size());
            for (const auto& s : body) wrapped.push_back(distribute_ctrl(s, ctrl));
            return seq_of(std::move(wrapped));
        }
        if (head == "if") {
            advance();
            If node;
            node.guard = parse_guard();
            node.body = seq_of(parse_block());
            return make_stmt(Stmt{node, at});
        }
        if (head == "while") {
            advance();
            std::optional<std::uint64_t> bound;
            if (m_tok.kind == Tok::Lt) {
                advance();
                bound = expect(Tok::Int, "loop bound").value;
                expect(Tok::Gt, "'>'");
            }
            Guard guard = parse_guard();
            StmtPtr body = seq_of(parse_block());
            if (bound) return make_stmt(Stmt{BoundedWhile{*bound, guard, body}, at});
            return make_stmt(Stmt{While{guard, body}, at});
        }

        // gate application
        Apply apply;
        if (head == "x") apply.gate.kind = GateKind::X;
        else if (head == "h") apply.gate.kind = GateKind::H;
        else if (head == "z") apply.gate.kind = GateKind::Z;
        else if (head == "cx") apply.gate.kind = GateKind::CX;
        else if (head == "inc") apply.gate.kind = GateKind::Inc;
        else if (head == "dec") apply.gate.kind = GateKind::Dec;
        else if (head == "u") {
            apply.gate.kind = GateKind::Custom;
            // The scanner sits just past "u"; the literal is read at
            // character level and parse_matrix re-primes the lookahead.
            apply.gate.custom = parse_matrix(at);
            while (m_tok.kind == Tok::Ident) apply.operands.push_back(expect_ident());
            expect(Tok::Semi, "';'");
            return make_stmt(Stmt{apply, at});
        } else {
            throw SyntaxError(at, "unknown statement '" + head + "'");
        }
        advance();
        while (m_tok.kind == Tok::Ident) apply.operands.push_back(expect_ident());
        expect(Tok::Semi, "';'");
        return make_stmt(Stmt{apply, at});
    }

    // Reads "[[entry,...],...]" directly from the character stream; called
    // with the current lookahead token already consumed up to 'u'.
    Matrix parse_matrix(const SourceLoc& at) {
        m_scan.expect_char('[', "'[' to open a matrix literal");
        std::vector<std::vector<cplx>> rows;
        for (;;) {
            m_scan.expect_char('[', "'[' to open a matrix row");
            std::vector<cplx> row;
            for (;;) {
                m_scan.skip_blank();
                row.push_back(m_scan.scan_complex());
                m_scan.skip_blank();
                if (m_scan.peek_char() == ',') {
                    m_scan.take();
                    continue;
                }
                break;
            }
            m_scan.expect_char(']', "']' to close a matrix row");
            rows.push_back(std::move(row));
            m_scan.skip_blank();
            if (m_scan.peek_char() == ',') {
                m_scan.take();
                continue;
            }
            break;
        }
        m_scan.expect_char(']', "']' to close a matrix literal");
        for (const auto& row : rows)
            if (row.size() != rows.size())
                throw SyntaxError(at, "matrix literal must be square");
        Matrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
        advance();  // resume tokenizing after the literal
        return m;
    }

    Scanner m_scan;
    Token m_tok;
};

}  // namespace

StmtPtr seq_of(std::vector<StmtPtr> stmts) {
    if (stmts.empty()) throw std::invalid_argument("empty statement list");
    StmtPtr out = stmts.back();
    for (std::size_t i = stmts.size() - 1; i-- > 0;) {
        Seq seq{stmts[i], out};
        out = make_stmt(Stmt{seq, stmts[i]->loc});
    }
    return out;
}

SourceUnit parse_unchecked(const std::string& source) { return Parser(source).run(); }

SourceUnit parse(const std::string& source) {
    SourceUnit unit = parse_unchecked(source);
    std::vector<Diagnostic> diags = validate(unit);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return unit;
}

}  // namespace qwl
