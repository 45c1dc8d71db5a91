#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qwl/gates.hpp"

using namespace qwl;

TEST_CASE("gate matrices have their textbook entries") {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix h = matrix_of(GateSpec{GateKind::H, {}});
    CHECK(h.at(0, 0).real() == doctest::Approx(s));
    CHECK(h.at(0, 1).real() == doctest::Approx(s));
    CHECK(h.at(1, 0).real() == doctest::Approx(s));
    CHECK(h.at(1, 1).real() == doctest::Approx(-s));

    Matrix x = matrix_of(GateSpec{GateKind::X, {}});
    CHECK(x.at(0, 1) == cplx(1.0, 0.0));
    CHECK(x.at(1, 0) == cplx(1.0, 0.0));
    CHECK(x.at(0, 0) == cplx(0.0, 0.0));

    Matrix z = matrix_of(GateSpec{GateKind::Z, {}});
    CHECK(z.at(0, 0) == cplx(1.0, 0.0));
    CHECK(z.at(1, 1) == cplx(-1.0, 0.0));

    // CX: |c t> with c the high bit; |10> -> |11>, |11> -> |10>.
    Matrix cx = matrix_of(GateSpec{GateKind::CX, {}});
    CHECK(cx.at(0, 0) == cplx(1.0, 0.0));
    CHECK(cx.at(1, 1) == cplx(1.0, 0.0));
    CHECK(cx.at(3, 2) == cplx(1.0, 0.0));
    CHECK(cx.at(2, 3) == cplx(1.0, 0.0));
}

TEST_CASE("inc and dec are modular shifts of the register value") {
    Matrix inc = matrix_of(GateSpec{GateKind::Inc, {}}, 2);
    REQUIRE(inc.dim() == 4);
    for (std::size_t v = 0; v < 4; ++v) CHECK(inc.at((v + 1) % 4, v) == cplx(1.0, 0.0));
    Matrix dec = matrix_of(GateSpec{GateKind::Dec, {}}, 2);
    for (std::size_t v = 0; v < 4; ++v) CHECK(dec.at((v + 3) % 4, v) == cplx(1.0, 0.0));
    CHECK(check_unitary(inc) == 0.0);
    CHECK(check_unitary(inc * dec) == 0.0);
    CHECK_THROWS_AS(matrix_of(GateSpec{GateKind::Inc, {}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(matrix_of(GateSpec{GateKind::Inc, {}}, 32), std::invalid_argument);
}

TEST_CASE("every library gate is exactly unitary") {
    for (GateKind kind : {GateKind::X, GateKind::H, GateKind::Z, GateKind::CX})
        CHECK(check_unitary(matrix_of(GateSpec{kind, {}})) <= 1e-15);
}

TEST_CASE("operand counts follow the gate shape") {
    CHECK(GateSpec{GateKind::X, {}}.operand_count() == 1);
    CHECK(GateSpec{GateKind::CX, {}}.operand_count() == 2);
    CHECK(GateSpec{GateKind::Inc, {}}.operand_count() == 1);
    CHECK(GateSpec{GateKind::Custom, Matrix::identity(4)}.operand_count() == 2);
}

TEST_CASE("guards evaluate on register values") {
    CHECK(guard_holds(Guard{GuardKind::QubitTrue, "q", 0}, 1));
    CHECK_FALSE(guard_holds(Guard{GuardKind::QubitTrue, "q", 0}, 0));
    CHECK(guard_holds(Guard{GuardKind::GtZero, "q", 0}, 5));
    CHECK_FALSE(guard_holds(Guard{GuardKind::GtZero, "q", 0}, 0));
    CHECK(guard_holds(Guard{GuardKind::EqConst, "q", 3}, 3));
    CHECK_FALSE(guard_holds(Guard{GuardKind::EqConst, "q", 3}, 2));
}

TEST_CASE("guard flips mark the tape exactly where the guard holds") {
    Guard gt{GuardKind::GtZero, "q", 0};
    Ket k;
    k.add_term(BasisLabel("", {0}), cplx(0.6, 0.0));
    k.add_term(BasisLabel("", {2}), cplx(0.8, 0.0));
    Ket flipped = apply_guard_flip(k, guard_flip(gt, 0, 1));
    CHECK(flipped.amplitude(BasisLabel("", {0})) == cplx(0.6, 0.0));
    CHECK(flipped.amplitude(BasisLabel("1", {2})) == cplx(0.8, 0.0));
    // Involution: applying the same flip twice restores the state.
    CHECK(apply_guard_flip(flipped, guard_flip(gt, 0, 1)) == k);
    CHECK(norm(flipped) == doctest::Approx(norm(k)).epsilon(1e-15));
}

TEST_CASE("guard flips respect controls") {
    Guard q1{GuardKind::QubitTrue, "q", 0};
    Ket k;
    k.add_term(BasisLabel("", {1}), cplx(0.6, 0.0));
    k.add_term(BasisLabel("01", {1}), cplx(0.8, 0.0));
    ControlSpec on_cell2;
    on_cell2.positive.push_back(QubitCoord::ancilla(2));
    Ket flipped = apply_guard_flip(k, guard_flip(q1, 0, 1), on_cell2);
    CHECK(flipped.amplitude(BasisLabel("", {1})) == cplx(0.6, 0.0));
    CHECK(flipped.amplitude(BasisLabel("11", {1})) == cplx(0.8, 0.0));
}

TEST_CASE("guard flips reject out-of-range register slots") {
    Ket k = Ket::basis(BasisLabel("", {1}));
    CHECK_THROWS_AS(apply_guard_flip(k, guard_flip(Guard{GuardKind::QubitTrue, "q", 0}, 3, 1)),
                    std::out_of_range);
}
