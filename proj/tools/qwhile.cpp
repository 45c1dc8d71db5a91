// qwhile: interpreter and analysis tool for a measurement-free quantum
// while language.  See README.md for the language and output formats.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qwl/json_io.hpp"
#include "qwl/parser.hpp"

namespace {

// Exit codes shared with the test suite.
constexpr int kOk = 0;
constexpr int kSyntaxError = 1;
constexpr int kValidationError = 2;
constexpr int kMissingPolicy = 3;
constexpr int kNotConverged = 4;
constexpr int kCheckFailed = 5;

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

std::string format_amplitude(qwl::cplx amp) {
    std::string out = format_double(amp.real());
    out += amp.imag() < 0.0 ? "-" : "+";
    out += format_double(std::abs(amp.imag())) + "i";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool has_unbounded_loop(const qwl::StmtPtr& s) {
    if (!s) return false;
    if (std::holds_alternative<qwl::While>(s->node)) return true;
    if (const auto* seq = std::get_if<qwl::Seq>(&s->node))
        return has_unbounded_loop(seq->first) || has_unbounded_loop(seq->second);
    if (const auto* branch = std::get_if<qwl::If>(&s->node)) return has_unbounded_loop(branch->body);
    if (const auto* loop = std::get_if<qwl::BoundedWhile>(&s->node))
        return has_unbounded_loop(loop->body);
    return false;
}

void print_state(std::ostream& os, const qwl::Ket& k, const std::vector<qwl::Decl>& decls) {
    if (k.empty()) {
        os << "  (zero state)\n";
        return;
    }
    for (const auto& [label, amp] : k.terms()) {
        os << "  |" << (label.ancillas.empty() ? "0..." : label.ancillas + "0...") << ">";
        os << " |";
        for (std::size_t i = 0; i < decls.size(); ++i) {
            if (i) os << ",";
            os << decls[i].name << "=" << label.regs[i];
        }
        os << ">  " << format_amplitude(amp) << "\n";
    }
}

void print_report(std::ostream& os, const qwl::EvalReport& report, qwl::Mode mode,
                  const std::vector<qwl::Decl>& decls) {
    os << "mode:            " << (mode == qwl::Mode::Unitary ? "unitary" : "linear") << "\n";
    os << "iterations:      " << report.iterations_run << "\n";
    os << "converged:       " << (report.converged ? "yes" : "no") << "\n";
    os << "terminated mass: " << format_double(report.terminated_mass) << "\n";
    if (!report.increments.empty()) {
        os << "increments:     ";
        for (double inc : report.increments) os << " " << format_double(inc);
        os << "\n";
    }
    for (const auto& note : report.notes) os << "note: " << note << "\n";
    os << "state:\n";
    print_state(os, report.final, decls);
}

struct Common {
    std::string path;
    std::string mode = "unitary";
    std::optional<std::uint64_t> n;
    double prune = 0.0;
    bool pretty = false;
};

qwl::Mode mode_of(const std::string& name) {
    return name == "linear" ? qwl::Mode::Linear : qwl::Mode::Unitary;
}

qwl::SourceUnit load_program(const std::string& path) {
    return qwl::desugar(qwl::parse(read_file(path)));
}

int cmd_run(const Common& opt) {
    const qwl::SourceUnit unit = load_program(opt.path);
    qwl::EvalConfig config;
    config.mode = mode_of(opt.mode);
    config.unroll = opt.n;
    config.prune_eps = opt.prune;
    if (!opt.n && has_unbounded_loop(unit.program)) {
        if (config.mode == qwl::Mode::Unitary) {
            std::cerr
                << "error: the program has an unbounded loop; choose an iteration count with --n\n";
            return kMissingPolicy;
        }
        config.fixpoint = qwl::FixpointConfig{};  // linear mode can run to the fixpoint
    }
    const qwl::EvalReport report =
        qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), config);
    if (opt.pretty)
        print_report(std::cout, report, config.mode, unit.decls);
    else
        std::cout << qwl::run_report_to_json(report, config.mode, unit.decls).dump(2) << "\n";
    return kOk;
}

int cmd_trace(const Common& opt) {
    const qwl::SourceUnit unit = load_program(opt.path);
    qwl::EvalConfig config;
    config.mode = mode_of(opt.mode);
    config.unroll = opt.n;
    config.prune_eps = opt.prune;
    if (!opt.n && has_unbounded_loop(unit.program)) {
        if (config.mode == qwl::Mode::Unitary) {
            std::cerr
                << "error: the program has an unbounded loop; choose an iteration count with --n\n";
            return kMissingPolicy;
        }
        config.fixpoint = qwl::FixpointConfig{};
    }

    struct Entry {
        std::uint64_t iteration;
        qwl::Ket state;
    };
    std::vector<Entry> entries;
    const bool linear = config.mode == qwl::Mode::Linear;
    config.trace = [&entries, linear](std::uint64_t iteration, const qwl::Ket& state,
                                      const qwl::Ket& running) {
        // Unitary trace shows the coherent state; linear trace shows the
        // terminated component accumulated so far.
        if (linear)
            entries.push_back({iteration, qwl::add_scaled(qwl::cplx(-1.0, 0.0), running, state)});
        else
            entries.push_back({iteration, state});
    };
    const qwl::EvalReport report =
        qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), config);
    // A loop-free program has no iterations; dump its final state once.
    if (entries.empty()) entries.push_back({0, report.final});

    const std::string prefix = linear ? "L_" : "W_";
    if (opt.pretty) {
        for (const auto& entry : entries) {
            std::cout << prefix << entry.iteration << ":\n";
            print_state(std::cout, entry.state, unit.decls);
        }
    } else {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& entry : entries)
            trace.push_back({{"label", prefix + std::to_string(entry.iteration)},
                             {"state", qwl::state_to_json(entry.state, unit.decls)}});
        nlohmann::json out = {{"schema_version", "1"},
                              {"mode", linear ? "linear" : "unitary"},
                              {"trace", std::move(trace)}};
        std::cout << out.dump(2) << "\n";
    }
    return kOk;
}

// Splits "leading statements; trailing unbounded loop" for fixpoint runs.
bool split_trailing_loop(const qwl::StmtPtr& s, std::vector<qwl::StmtPtr>& leading,
                         qwl::Guard& guard, qwl::StmtPtr& body) {
    if (const auto* seq = std::get_if<qwl::Seq>(&s->node)) {
        leading.push_back(seq->first);
        return split_trailing_loop(seq->second, leading, guard, body);
    }
    if (const auto* loop = std::get_if<qwl::While>(&s->node)) {
        guard = loop->guard;
        body = loop->body;
        return true;
    }
    return false;
}

int cmd_fixpoint(const std::string& path, const qwl::FixpointConfig& fcfg, double prune,
                 bool pretty) {
    const qwl::SourceUnit unit = load_program(path);
    std::vector<qwl::StmtPtr> leading;
    qwl::Guard guard;
    qwl::StmtPtr body;
    if (!split_trailing_loop(unit.program, leading, guard, body)) {
        std::cerr << "error: fixpoint analysis needs a program ending in an unbounded while loop\n";
        return kValidationError;
    }
    for (const auto& s : leading)
        if (has_unbounded_loop(s)) {
            std::cerr << "error: only the final loop of the program can be unbounded here\n";
            return kValidationError;
        }

    qwl::Ket state = qwl::initial_state(unit.decls);
    if (!leading.empty()) {
        qwl::EvalConfig lead_cfg;
        lead_cfg.prune_eps = prune;
        state = qwl::eval(unit.decls, qwl::seq_of(leading), state, lead_cfg).final;
    }
    const qwl::EvalReport report = qwl::fixpoint(unit.decls, guard, body, state, fcfg, prune);
    if (pretty)
        print_report(std::cout, report, qwl::Mode::Linear, unit.decls);
    else
        std::cout << qwl::run_report_to_json(report, qwl::Mode::Linear, unit.decls).dump(2) << "\n";
    return report.converged ? kOk : kNotConverged;
}

int cmd_check(const qwl::SuiteConfig& config, bool pretty) {
    const qwl::SuiteReport report = qwl::check_suite(config);
    if (pretty) {
        for (const auto& [name, result] : report)
            std::cout << (result.pass ? "pass" : "FAIL") << "  " << name
                      << "  max deviation " << format_double(result.max_deviation) << "\n";
    } else {
        std::cout << qwl::suite_report_to_json(report).dump(2) << "\n";
    }
    return qwl::suite_passed(report) ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interpreter and analysis tool for a measurement-free quantum while language"};
    app.require_subcommand(1);

    Common run_opt, trace_opt;
    std::string fix_path;
    qwl::FixpointConfig fcfg;
    double fix_prune = 0.0;
    bool fix_pretty = false;
    qwl::SuiteConfig suite;
    bool check_pretty = false;

    bool json_flag = false;  // JSON is the default; the flag is accepted for symmetry

    CLI::App* run = app.add_subcommand("run", "evaluate a program on its declared initial state");
    run->add_option("file", run_opt.path, "program file")->required();
    run->add_option("--mode", run_opt.mode, "unitary or linear")
        ->check(CLI::IsMember({"unitary", "linear"}))
        ->capture_default_str();
    run->add_option("--n", run_opt.n, "iteration count for unbounded loops");
    run->add_option("--prune", run_opt.prune, "drop amplitudes at or below this magnitude");
    run->add_flag("--json", json_flag, "machine-readable output (default)");
    run->add_flag("--pretty", run_opt.pretty, "human-readable output instead of JSON");

    CLI::App* trace = app.add_subcommand("trace", "dump the state after every loop iteration");
    trace->add_option("file", trace_opt.path, "program file")->required();
    trace->add_option("--mode", trace_opt.mode, "unitary or linear")
        ->check(CLI::IsMember({"unitary", "linear"}))
        ->capture_default_str();
    trace->add_option("--n", trace_opt.n, "iteration count for unbounded loops");
    trace->add_option("--prune", trace_opt.prune, "drop amplitudes at or below this magnitude");
    trace->add_flag("--json", json_flag, "machine-readable output (default)");
    trace->add_flag("--pretty", trace_opt.pretty, "human-readable output instead of JSON");

    CLI::App* fix = app.add_subcommand("fixpoint", "iterate the final loop to convergence");
    fix->add_option("file", fix_path, "program file")->required();
    fix->add_option("--eps", fcfg.eps, "increment threshold")->capture_default_str();
    fix->add_option("--window", fcfg.window, "consecutive sub-eps increments required to stop")
        ->capture_default_str();
    fix->add_option("--max-iter", fcfg.max_iter, "iteration cap")->capture_default_str();
    fix->add_option("--prune", fix_prune, "drop amplitudes at or below this magnitude");
    fix->add_flag("--json", json_flag, "machine-readable output (default)");
    fix->add_flag("--pretty", fix_pretty, "human-readable output instead of JSON");

    CLI::App* check = app.add_subcommand("check", "run the dense self-check suite");
    check->add_option("--ancillas", suite.ancilla_count, "tape cells in the dense space")
        ->capture_default_str();
    check->add_option("--nmax", suite.n_max, "largest loop depth checked")->capture_default_str();
    check->add_option("--trials", suite.trials, "random trials per case")->capture_default_str();
    check->add_option("--seed", suite.seed, "random seed")->capture_default_str();
    check->add_flag("--json", json_flag, "machine-readable output (default)");
    check->add_flag("--pretty", check_pretty, "human-readable output instead of JSON");
    (void)json_flag;

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (trace->parsed()) return cmd_trace(trace_opt);
        if (fix->parsed()) return cmd_fixpoint(fix_path, fcfg, fix_prune, fix_pretty);
        if (check->parsed()) return cmd_check(suite, check_pretty);
    } catch (const qwl::SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kSyntaxError;
    } catch (const qwl::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationError;
    } catch (const qwl::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return kOk;
}
