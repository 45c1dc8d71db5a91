#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qwl/oracle.hpp"
#include "qwl/parser.hpp"

using namespace qwl;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StmtPtr body_of_single_loop(const SourceUnit& unit) {
    const auto* loop = std::get_if<While>(&unit.program->node);
    REQUIRE(loop != nullptr);
    return loop->body;
}

}  // namespace

TEST_CASE("index and label round trip in order") {
    const SpaceSpec space{2, {2, 1}};
    CHECK(space.total_bits() == 5);
    CHECK(space.dim() == 32);

    BasisLabel prev("", {0, 0});
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const BasisLabel label = label_of_index(i, space);
        CHECK(index_of_label(label, space) == i);
        if (i > 0) CHECK(prev < label);  // index order agrees with label order
        prev = label;
    }

    // Spot checks of the big-endian layout: cell 1, cell 2, reg bits 1..0, reg bit 0.
    CHECK(index_of_label(BasisLabel("1", {0, 0}), space) == 16);
    CHECK(index_of_label(BasisLabel("01", {0, 0}), space) == 8);
    CHECK(index_of_label(BasisLabel("", {2, 0}), space) == 4);
    CHECK(index_of_label(BasisLabel("", {0, 1}), space) == 1);
    CHECK(label_of_index(21, space) == BasisLabel("1", {2, 1}));

    CHECK_THROWS_AS(index_of_label(BasisLabel("001", {0, 0}), space), std::invalid_argument);
    CHECK_THROWS_AS(index_of_label(BasisLabel("", {0}), space), std::invalid_argument);
    CHECK_THROWS_AS(index_of_label(BasisLabel("", {4, 0}), space), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec({13, {}}).dim(), std::invalid_argument);
}

TEST_CASE("vector and ket round trip") {
    const SpaceSpec space{1, {1}};
    Ket k;
    k.add_term(BasisLabel("", {1}), cplx(kInvSqrt2, 0.0));
    k.add_term(BasisLabel("1", {0}), cplx(0.0, -kInvSqrt2));

    const std::vector<cplx> v = vector_of_ket(k, space);
    REQUIRE(v.size() == 4);
    CHECK(v[0] == cplx(0.0, 0.0));
    CHECK(v[1] == cplx(kInvSqrt2, 0.0));
    CHECK(v[2] == cplx(0.0, -kInvSqrt2));
    CHECK(v[3] == cplx(0.0, 0.0));

    const Ket back = ket_of_vector(v, space);
    CHECK(back.terms().size() == 2);
    CHECK(back.amplitude(BasisLabel("", {1})) == cplx(kInvSqrt2, 0.0));
    CHECK(back.amplitude(BasisLabel("1", {0})) == cplx(0.0, -kInvSqrt2));

    CHECK_THROWS_AS(vector_of_ket(Ket::basis(BasisLabel("11", {0})), space), std::invalid_argument);
    CHECK_THROWS_AS(ket_of_vector(std::vector<cplx>(3), space), std::invalid_argument);
}

TEST_CASE("dense operator of loop-free programs") {
    {
        const SourceUnit unit = parse("qubit q; skip;");
        const SpaceSpec space{0, {1}};
        const Matrix m = dense_of_program(unit.decls, unit.program, space);
        CHECK(max_abs_diff(m, Matrix::identity(2)) == 0.0);
    }
    {
        const SourceUnit unit = parse("qubit q; x q;");
        const SpaceSpec space{0, {1}};
        const Matrix m = dense_of_program(unit.decls, unit.program, space);
        CHECK(m.at(0, 1) == cplx(1.0, 0.0));
        CHECK(m.at(1, 0) == cplx(1.0, 0.0));
        CHECK(m.at(0, 0) == cplx(0.0, 0.0));
        CHECK(m.at(1, 1) == cplx(0.0, 0.0));
    }
    {
        const SourceUnit unit = parse("qubit q; h q; h q;");
        const SpaceSpec space{0, {1}};
        const Matrix m = dense_of_program(unit.decls, unit.program, space);
        CHECK(max_abs_diff(m, Matrix::identity(2)) <= 1e-12);
    }
    {
        const SourceUnit unit = parse("qubit q; while q { x q; }");
        const SpaceSpec space{2, {1}};
        CHECK_THROWS_AS(dense_of_program(unit.decls, unit.program, space), std::invalid_argument);
    }
}

TEST_CASE("unitary loop operator on small spaces") {
    const SourceUnit skip_loop = parse("qubit q; while q { skip; }");
    const Guard guard{GuardKind::QubitTrue, "q", 0};

    {
        const SpaceSpec space{1, {1}};
        const Matrix w0 =
            dense_unitary_loop(skip_loop.decls, guard, body_of_single_loop(skip_loop), 0, space);
        CHECK(max_abs_diff(w0, Matrix::identity(4)) == 0.0);

        // One round of a skip body is just the guard copy: |0>|1> -> |1>|1>.
        const Matrix w1 =
            dense_unitary_loop(skip_loop.decls, guard, body_of_single_loop(skip_loop), 1, space);
        CHECK(w1.at(3, 1) == cplx(1.0, 0.0));
        CHECK(w1.at(1, 1) == cplx(0.0, 0.0));
        CHECK(w1.at(0, 0) == cplx(1.0, 0.0));
        CHECK(check_unitary(w1) <= 1e-12);
    }

    {
        // x-body loop on the plus state settles after two rounds.
        const SourceUnit x_loop = parse("qubit q; while q { x q; }");
        const SpaceSpec space{2, {1}};
        const Matrix w2 =
            dense_unitary_loop(x_loop.decls, guard, body_of_single_loop(x_loop), 2, space);
        std::vector<cplx> input(space.dim(), cplx(0.0, 0.0));
        input[index_of_label(BasisLabel("", {0}), space)] = kInvSqrt2;
        input[index_of_label(BasisLabel("", {1}), space)] = kInvSqrt2;
        const std::vector<cplx> out = w2 * input;
        const Ket result = ket_of_vector(out, space, 1e-12);
        CHECK(result.terms().size() == 2);
        CHECK(std::abs(result.amplitude(BasisLabel("", {0})) - cplx(kInvSqrt2, 0.0)) <= 1e-12);
        CHECK(std::abs(result.amplitude(BasisLabel("1", {0})) - cplx(kInvSqrt2, 0.0)) <= 1e-12);
    }
}

TEST_CASE("linear loop operator on small spaces") {
    const Guard guard{GuardKind::QubitTrue, "q", 0};

    {
        const SourceUnit x_loop = parse("qubit q; while q { x q; }");
        const SpaceSpec space{1, {1}};
        const Matrix l0 =
            dense_linear_loop(x_loop.decls, guard, body_of_single_loop(x_loop), 0, space);
        CHECK(max_abs_diff(l0, Matrix::zero(4)) == 0.0);

        // After one round the |1> branch is still running, so its column is zero.
        const Matrix l1 =
            dense_linear_loop(x_loop.decls, guard, body_of_single_loop(x_loop), 1, space);
        for (std::size_t r = 0; r < 4; ++r) CHECK(l1.at(r, 1) == cplx(0.0, 0.0));
        CHECK(l1.at(0, 0) == cplx(1.0, 0.0));
    }

    {
        // h-body loop: terminated amplitudes alternate in sign from the third exit on.
        const SourceUnit h_loop = parse("qubit q; while q { h q; }");
        const SpaceSpec space{3, {1}};
        const Matrix l3 =
            dense_linear_loop(h_loop.decls, guard, body_of_single_loop(h_loop), 3, space);
        std::vector<cplx> input(space.dim(), cplx(0.0, 0.0));
        input[index_of_label(BasisLabel("", {0}), space)] = kInvSqrt2;
        input[index_of_label(BasisLabel("", {1}), space)] = kInvSqrt2;
        const std::vector<cplx> out = l3 * input;
        const Ket result = ket_of_vector(out, space, 1e-12);
        CHECK(result.terms().size() == 3);
        CHECK(std::abs(result.amplitude(BasisLabel("", {0})) - cplx(kInvSqrt2, 0.0)) <= 1e-12);
        CHECK(std::abs(result.amplitude(BasisLabel("1", {0})) - cplx(0.5, 0.0)) <= 1e-12);
        CHECK(std::abs(result.amplitude(BasisLabel("11", {0})) - cplx(-std::pow(2.0, -1.5), 0.0)) <=
              1e-12);
    }
}

TEST_CASE("recursive and closed builds agree, and differ across iteration counts") {
    const SourceUnit h_loop = parse("qubit q; while q { h q; }");
    const Guard guard{GuardKind::QubitTrue, "q", 0};
    const StmtPtr body = body_of_single_loop(h_loop);
    const SpaceSpec space{3, {1}};

    for (std::uint32_t n = 0; n <= 3; ++n) {
        const Matrix w_rec = dense_unitary_loop(h_loop.decls, guard, body, n, space, LoopBuild::Recursive);
        const Matrix w_clo = dense_unitary_loop(h_loop.decls, guard, body, n, space, LoopBuild::ClosedForm);
        const Matrix l_rec = dense_linear_loop(h_loop.decls, guard, body, n, space, LoopBuild::Recursive);
        const Matrix l_clo = dense_linear_loop(h_loop.decls, guard, body, n, space, LoopBuild::ClosedForm);
        CHECK(max_abs_diff(w_rec, w_clo) <= 1e-10);
        CHECK(max_abs_diff(l_rec, l_clo) <= 1e-10);
    }

    // A deliberate mismatch must register loudly; guards the checks above
    // against ever comparing two identical code paths by accident.
    const Matrix w3 = dense_unitary_loop(h_loop.decls, guard, body, 3, space, LoopBuild::Recursive);
    const Matrix w2 = dense_unitary_loop(h_loop.decls, guard, body, 2, space, LoopBuild::ClosedForm);
    CHECK(max_abs_diff(w3, w2) >= 0.5);
}

TEST_CASE("shift conjugation relabels tape cells") {
    const SpaceSpec space{3, {1}};
    const GateSpec x{GateKind::X, Matrix(0)};
    const Matrix on_cell1 = extended(space, matrix_of(x), {QubitCoord::ancilla(1)});
    const Matrix on_cell2 = extended(space, matrix_of(x), {QubitCoord::ancilla(2)});
    CHECK(max_abs_diff(shift_conjugate(space, on_cell1), on_cell2) == 0.0);

    const Matrix perm = shift_matrix(space);
    CHECK(check_unitary(perm) == 0.0);
    CHECK(max_abs_diff(shift_conjugate(space, on_cell1), perm * on_cell1 * adjoint(perm)) <= 1e-12);
}

TEST_CASE("guard copy is an involution") {
    const SpaceSpec space{2, {2}};
    const Guard guard{GuardKind::GtZero, "q", 0};
    const Matrix g = guard_copy_matrix(space, guard, 0, 1);
    CHECK(max_abs_diff(g * g, Matrix::identity(space.dim())) == 0.0);
    CHECK(check_unitary(g) == 0.0);
}

TEST_CASE("running projector") {
    const SpaceSpec space{2, {1}};
    CHECK(max_abs_diff(running_projector_matrix(space, 0), Matrix::identity(space.dim())) == 0.0);
    const Matrix p2 = running_projector_matrix(space, 2);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const BasisLabel label = label_of_index(i, space);
        const bool running = label.ancilla_bit(1) && label.ancilla_bit(2);
        CHECK(p2.at(i, i) == cplx(running ? 1.0 : 0.0, 0.0));
    }
    CHECK_THROWS_AS(running_projector_matrix(space, 3), std::invalid_argument);
}

TEST_CASE("loop builder rejections") {
    const Guard guard{GuardKind::QubitTrue, "q", 0};

    {
        const SourceUnit unit = parse("qubit q; while q { skip; }");
        const SpaceSpec space{2, {1}};
        CHECK_THROWS_AS(
            dense_unitary_loop(unit.decls, guard, body_of_single_loop(unit), 3, space),
            std::invalid_argument);
    }
    {
        // A nested loop in the body has no loop-free dense operator.
        const SourceUnit unit = parse("qubit q; while q { while<1> q { x q; } }");
        const SpaceSpec space{3, {1}};
        CHECK_THROWS_AS(
            dense_unitary_loop(unit.decls, guard, body_of_single_loop(unit), 1, space),
            std::invalid_argument);
    }
    {
        const SourceUnit unit = parse("uint<2> q = 1; while (q > 0) { dec q; }");
        const Guard wide{GuardKind::GtZero, "q", 0};
        const SpaceSpec space{2, {2}};
        CHECK_THROWS_AS(
            dense_linear_loop(unit.decls, wide, body_of_single_loop(unit), 1, space),
            std::invalid_argument);
    }
}

TEST_CASE("self-check suite passes on a small budget") {
    SuiteConfig config;
    config.ancilla_count = 3;
    config.n_max = 3;
    config.trials = 5;
    config.seed = 7;
    const SuiteReport report = check_suite(config);
    CHECK(report.size() == 13);
    for (const auto& [name, result] : report) {
        INFO(name);
        CHECK(result.pass);
        CHECK(result.max_deviation <= result.threshold);
    }
    CHECK(suite_passed(report));
}
