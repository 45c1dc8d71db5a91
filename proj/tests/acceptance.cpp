// Release gate: one PASS/FAIL line per criterion, with the measured runtime
// against each criterion's budget.  Exits nonzero if any line fails.
//
// Tolerances are pinned here and nowhere else:
//   kStateTol  1e-9   amplitude-by-amplitude state comparisons
//   kMassTol   1e-9   terminated-mass comparisons
//   kExactTol  1e-12  quantities exact up to floating-point roundoff

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwl/eval.hpp"
#include "qwl/oracle.hpp"
#include "qwl/parser.hpp"

namespace {

using qwl::BasisLabel;
using qwl::cplx;
using qwl::Ket;

constexpr double kStateTol = 1e-9;
constexpr double kMassTol = 1e-9;
constexpr double kExactTol = 1e-12;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }

    void close(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol))
            failures.push_back(what + ": got " + std::to_string(got) + ", want " +
                               std::to_string(want));
    }

    // Term-by-term comparison; extra terms above tol also fail.
    void state_close(const Ket& got, const Ket& want, double tol, const std::string& what) {
        for (const auto& [label, amp] : want.terms())
            if (std::abs(got.amplitude(label) - amp) > tol)
                failures.push_back(what + ": wrong amplitude on tape |" +
                                   (label.ancillas.empty() ? "0..." : label.ancillas + "0...") +
                                   ">");
        for (const auto& [label, amp] : got.terms())
            if (want.amplitude(label) == cplx(0.0, 0.0) && std::abs(amp) > tol)
                failures.push_back(what + ": unexpected term on tape |" +
                                   (label.ancillas.empty() ? "0..." : label.ancillas + "0...") +
                                   ">");
    }
};

qwl::EvalReport run_unrolled(const qwl::SourceUnit& unit, qwl::Mode mode, std::uint64_t n) {
    qwl::EvalConfig config;
    config.mode = mode;
    config.unroll = n;
    return qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), config);
}

qwl::StmtPtr loop_body(const qwl::SourceUnit& unit) {
    const auto* loop = std::get_if<qwl::While>(&unit.program->node);
    return loop ? loop->body : nullptr;
}

// --------------------------------------------------------------------------
// 1. x-body loop: both unrolled states match the worked example and the
//    second is exactly the first (the loop has settled).

void criterion1(Checker& c) {
    const qwl::SourceUnit unit = qwl::parse("qubit q; h q; while q { x q; }");
    Ket want;
    want.add_term(BasisLabel("", {0}), kInvSqrt2);
    want.add_term(BasisLabel("1", {0}), kInvSqrt2);

    const qwl::EvalReport w1 = run_unrolled(unit, qwl::Mode::Unitary, 1);
    const qwl::EvalReport w2 = run_unrolled(unit, qwl::Mode::Unitary, 2);
    c.state_close(w1.final, want, kStateTol, "one iteration");
    c.state_close(w2.final, want, kStateTol, "two iterations");
    c.expect(w1.final == w2.final, "the settled states must agree exactly");
}

// --------------------------------------------------------------------------
// 2. h-body loop: worked states at n = 1, 2, 3 and the general term at
//    n = 20.  Exits carry 2^{-h/2} with signs +, +, then alternating
//    (-1)^h; the still-running pair carries (-1)^(n-1) 2^{-(n+1)/2} on
//    register 0 and the opposite sign on register 1.

Ket h_loop_state(std::uint32_t n) {
    Ket want;
    for (std::uint32_t h = 1; h <= n; ++h) {
        const double sign = h <= 2 ? 1.0 : (h % 2 == 0 ? 1.0 : -1.0);
        want.add_term(BasisLabel(std::string(h - 1, '1'), {0}), sign * std::pow(2.0, -0.5 * h));
    }
    const double r0 = n % 2 == 1 ? 1.0 : -1.0;
    const double mag = std::pow(2.0, -0.5 * (n + 1));
    want.add_term(BasisLabel(std::string(n, '1'), {0}), r0 * mag);
    want.add_term(BasisLabel(std::string(n, '1'), {1}), -r0 * mag);
    return want;
}

void criterion2(Checker& c) {
    const qwl::SourceUnit unit = qwl::parse("qubit q; h q; while q { h q; }");
    for (const std::uint32_t n : {1u, 2u, 3u, 20u}) {
        const qwl::EvalReport report = run_unrolled(unit, qwl::Mode::Unitary, n);
        c.state_close(report.final, h_loop_state(n), kStateTol,
                      "n = " + std::to_string(n));
    }
}

// --------------------------------------------------------------------------
// 3. skip-body loop from |1>: the unrolled state is the single branch
//    |1^n 0...>|1> and consecutive states stay a squared distance of 2
//    apart — the sequence never settles.

void criterion3(Checker& c) {
    const qwl::SourceUnit unit = qwl::parse("qubit q; x q; while q { skip; }");
    Ket prev = run_unrolled(unit, qwl::Mode::Unitary, 0).final;
    for (std::uint32_t n = 1; n <= 20; ++n) {
        const Ket cur = run_unrolled(unit, qwl::Mode::Unitary, n).final;
        Ket want = Ket::basis(BasisLabel(std::string(n, '1'), {1}));
        c.state_close(cur, want, kStateTol, "n = " + std::to_string(n));
        const double d = qwl::norm(qwl::add_scaled(cplx(-1.0, 0.0), prev, cur));
        c.close(d * d, 2.0, kStateTol, "squared step distance at n = " + std::to_string(n));
        prev = cur;
    }
}

// --------------------------------------------------------------------------
// 4. linear semantics: worked terminated states for all three loops, the
//    never-terminating loop has mass 0, the x-body loop reaches mass 1 at
//    its fixpoint, and the h-body loop terminates with mass 1 - 2^-n.

void criterion4(Checker& c) {
    {
        const qwl::SourceUnit unit = qwl::parse("qubit q; h q; while q { x q; }");
        Ket l1 = Ket::basis(BasisLabel("", {0}), kInvSqrt2);
        Ket l2 = l1;
        l2.add_term(BasisLabel("1", {0}), kInvSqrt2);
        c.state_close(run_unrolled(unit, qwl::Mode::Linear, 1).final, l1, kStateTol, "x loop n = 1");
        c.state_close(run_unrolled(unit, qwl::Mode::Linear, 2).final, l2, kStateTol, "x loop n = 2");
        c.state_close(run_unrolled(unit, qwl::Mode::Linear, 3).final, l2, kStateTol, "x loop n = 3");

        qwl::EvalConfig config;
        config.mode = qwl::Mode::Linear;
        config.fixpoint = qwl::FixpointConfig{};
        const qwl::EvalReport fix =
            qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), config);
        c.expect(fix.converged, "x loop fixpoint must converge");
        c.close(fix.terminated_mass, 1.0, kMassTol, "x loop fixpoint mass");
    }
    {
        const qwl::SourceUnit unit = qwl::parse("qubit q; h q; while q { h q; }");
        for (const std::uint32_t n : {1u, 2u, 3u}) {
            Ket want;
            for (std::uint32_t h = 1; h <= n; ++h) {
                const double sign = h <= 2 ? 1.0 : (h % 2 == 0 ? 1.0 : -1.0);
                want.add_term(BasisLabel(std::string(h - 1, '1'), {0}),
                              sign * std::pow(2.0, -0.5 * h));
            }
            c.state_close(run_unrolled(unit, qwl::Mode::Linear, n).final, want, kStateTol,
                          "h loop n = " + std::to_string(n));
        }
        for (std::uint32_t n = 0; n <= 20; ++n)
            c.close(run_unrolled(unit, qwl::Mode::Linear, n).terminated_mass,
                    1.0 - std::pow(2.0, -double(n)), kMassTol,
                    "h loop mass at n = " + std::to_string(n));
    }
    {
        const qwl::SourceUnit unit = qwl::parse("qubit q; x q; while q { skip; }");
        for (const std::uint32_t n : {1u, 5u}) {
            const qwl::EvalReport report = run_unrolled(unit, qwl::Mode::Linear, n);
            c.expect(report.final.empty(), "skip loop must terminate nowhere");
            c.close(report.terminated_mass, 0.0, kExactTol,
                    "skip loop mass at n = " + std::to_string(n));
        }
    }
}

// --------------------------------------------------------------------------
// 5. coin-controlled counter: the traced states after iterations 1, 2, 3,
//    the two terminated branches visible after iteration 5, and the
//    terminated masses 0.25 (n = 3) and 0.5 (n = 5).

void criterion5(Checker& c) {
    const qwl::SourceUnit unit = qwl::parse(
        "qubit c; uint<3> q = 2;"
        "while (q > 0) { h c; ctrl c { inc q; } nctrl c { dec q; } }");

    std::map<std::uint64_t, std::pair<Ket, Ket>> snaps;  // iteration -> (state, running)
    qwl::EvalConfig config;
    config.mode = qwl::Mode::Unitary;
    config.unroll = 5;
    config.trace = [&snaps](std::uint64_t iteration, const Ket& state, const Ket& running) {
        snaps[iteration] = {state, running};
    };
    qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), config);

    Ket w1;
    w1.add_term(BasisLabel("1", {0, 1}), kInvSqrt2);
    w1.add_term(BasisLabel("1", {1, 3}), kInvSqrt2);
    c.state_close(snaps.at(1).first, w1, kStateTol, "iteration 1");

    Ket w2;
    w2.add_term(BasisLabel("11", {0, 0}), 0.5);
    w2.add_term(BasisLabel("11", {0, 2}), 0.5);
    w2.add_term(BasisLabel("11", {1, 2}), 0.5);
    w2.add_term(BasisLabel("11", {1, 4}), -0.5);
    c.state_close(snaps.at(2).first, w2, kStateTol, "iteration 2");

    Ket w3;
    w3.add_term(BasisLabel("11", {0, 0}), 0.5);
    w3.add_term(BasisLabel("111", {0, 1}), kInvSqrt2);
    w3.add_term(BasisLabel("111", {0, 3}), -0.5 * kInvSqrt2);
    w3.add_term(BasisLabel("111", {1, 5}), 0.5 * kInvSqrt2);
    c.state_close(snaps.at(3).first, w3, kStateTol, "iteration 3");

    const Ket& fifth = snaps.at(5).first;
    c.close(std::abs(fifth.amplitude(BasisLabel("11", {0, 0}))), 0.5, kStateTol,
            "terminated branch after two iterations");
    c.close(std::abs(fifth.amplitude(BasisLabel("1111", {0, 0}))), 0.5, kStateTol,
            "terminated branch after four iterations");

    auto mass_at = [&snaps](std::uint64_t n) {
        const double r = qwl::norm(snaps.at(n).second);
        return 1.0 - r * r;  // the traced state is normalized
    };
    c.close(mass_at(3), 0.25, kMassTol, "terminated mass at n = 3");
    c.close(mass_at(5), 0.5, kMassTol, "terminated mass at n = 5");
}

// --------------------------------------------------------------------------
// 6. dense operators: the step recursion and the closed product/sum formula
//    build the same matrices, for both the coherent and the terminated
//    family, across five bodies and n = 0..4 on a 32-dimensional space.

void criterion6(Checker& c) {
    const qwl::SpaceSpec space{4, {1}};
    const qwl::Guard guard{qwl::GuardKind::QubitTrue, "q", 0};
    const std::vector<std::pair<std::string, std::string>> programs = {
        {"skip", "qubit q; while q { skip; }"},
        {"x", "qubit q; while q { x q; }"},
        {"h", "qubit q; while q { h q; }"},
        {"z", "qubit q; while q { z q; }"},
        {"h;x", "qubit q; while q { h q; x q; }"},
    };
    for (const auto& [name, text] : programs) {
        const qwl::SourceUnit unit = qwl::parse(text);
        const qwl::StmtPtr body = loop_body(unit);
        c.expect(body != nullptr, "program must be a single loop");
        if (!body) continue;
        for (std::uint32_t n = 0; n <= 4; ++n) {
            const double wdiff = qwl::max_abs_diff(
                qwl::dense_unitary_loop(unit.decls, guard, body, n, space, qwl::LoopBuild::Recursive),
                qwl::dense_unitary_loop(unit.decls, guard, body, n, space, qwl::LoopBuild::ClosedForm));
            const double ldiff = qwl::max_abs_diff(
                qwl::dense_linear_loop(unit.decls, guard, body, n, space, qwl::LoopBuild::Recursive),
                qwl::dense_linear_loop(unit.decls, guard, body, n, space, qwl::LoopBuild::ClosedForm));
            c.close(wdiff, 0.0, kStateTol,
                    "coherent family, body " + name + ", n = " + std::to_string(n));
            c.close(ldiff, 0.0, kStateTol,
                    "terminated family, body " + name + ", n = " + std::to_string(n));
        }
    }
}

// --------------------------------------------------------------------------
// 7. dense property suite: 200 seeded random trials on a 64-dimensional
//    space, loop depths up to 5; every property must hold at its pinned
//    threshold.

void criterion7(Checker& c) {
    qwl::SuiteConfig config;
    config.ancilla_count = 5;
    config.n_max = 5;
    config.trials = 200;
    config.seed = 1;
    const qwl::SuiteReport report = qwl::check_suite(config);
    c.expect(report.size() == 13, "the suite must run all thirteen properties");
    for (const auto& [name, result] : report)
        c.expect(result.pass, name + ": max deviation " + std::to_string(result.max_deviation) +
                                  " over threshold " + std::to_string(result.threshold));
}

// --------------------------------------------------------------------------
// 8. stopping rule: the countdown from 5 terminates all at once on the
//    sixth iteration.  The default stall window rides it out and reports
//    mass 1; a one-iteration window stops early and must flag the visible
//    still-running mass instead of claiming convergence silently.

void criterion8(Checker& c) {
    const qwl::SourceUnit unit = qwl::parse("uint<3> q = 5; while (q > 0) { dec q; }");

    qwl::EvalConfig patient;
    patient.mode = qwl::Mode::Linear;
    patient.fixpoint = qwl::FixpointConfig{};  // window 8 outlasts the six quiet rounds
    const qwl::EvalReport ok =
        qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), patient);
    c.expect(ok.converged, "default window must converge");
    c.close(ok.terminated_mass, 1.0, kExactTol, "default window mass");
    c.expect(ok.notes.empty(), "a clean convergence must not be flagged");

    qwl::EvalConfig hasty;
    hasty.mode = qwl::Mode::Linear;
    hasty.fixpoint = qwl::FixpointConfig{1e-9, 1, 10000};
    const qwl::EvalReport early =
        qwl::eval(unit.decls, unit.program, qwl::initial_state(unit.decls), hasty);
    c.expect(!early.notes.empty(), "a window-1 stop must be flagged");
    c.expect(early.iterations_run < 5, "the window-1 stop must happen before the mass arrives");
    c.close(early.terminated_mass, 0.0, kExactTol, "window-1 mass");
}

struct Entry {
    std::string name;
    std::optional<double> cap_seconds;
    std::function<void(Checker&)> run;
};

}  // namespace

int main() {
    const std::vector<Entry> entries = {
        {"x-body loop matches its worked states and settles", 0.1, criterion1},
        {"h-body loop matches its worked states and general term", 1.0, criterion2},
        {"skip-body loop yields the divergence witness", std::nullopt, criterion3},
        {"linear semantics matches its worked states and masses", std::nullopt, criterion4},
        {"coin-counter trace matches its worked iterations", 1.0, criterion5},
        {"recursive and closed-form dense operators agree", 10.0, criterion6},
        {"dense property suite passes 200 seeded trials", 30.0, criterion7},
        {"fixpoint stopping is honest on the countdown loop", std::nullopt, criterion8},
    };

    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        entries[i].run(checker);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        bool pass = checker.failures.empty();
        std::string timing = " (" + std::to_string(seconds).substr(0, 5) + " s";
        if (entries[i].cap_seconds) {
            timing += " of " + std::to_string(*entries[i].cap_seconds).substr(0, 4) + " s budget";
            if (seconds > *entries[i].cap_seconds) {
                pass = false;
                checker.failures.push_back("over the runtime budget");
            }
        }
        timing += ")";

        std::printf("%s  %zu/%zu  %s%s\n", pass ? "PASS" : "FAIL", i + 1, entries.size(),
                    entries[i].name.c_str(), timing.c_str());
        for (const auto& reason : checker.failures) std::printf("      - %s\n", reason.c_str());
        if (!pass) ++failures;
    }

    if (failures == 0)
        std::printf("all %zu criteria passed\n", entries.size());
    else
        std::printf("%d of %zu criteria failed\n", failures, entries.size());
    return failures == 0 ? 0 : 1;
}
