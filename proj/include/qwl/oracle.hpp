#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qwl/ast.hpp"
#include "qwl/eval.hpp"
#include "qwl/matrix.hpp"

namespace qwl {

// Truncated program space for the dense cross-check: `ancilla_count` tape
// cells followed by the declared registers.  Basis index layout is big-endian
// — tape cell 1 is the most significant bit, then cells 2..A, then register 0
// down to the last register — so index order agrees with BasisLabel order.
struct SpaceSpec {
    std::uint32_t ancilla_count = 0;
    std::vector<std::uint32_t> reg_widths;

    std::uint32_t total_bits() const;
    std::size_t dim() const;  // throws std::invalid_argument above 4096
};

std::size_t index_of_label(const BasisLabel& label, const SpaceSpec& space);
BasisLabel label_of_index(std::size_t index, const SpaceSpec& space);

std::vector<cplx> vector_of_ket(const Ket& k, const SpaceSpec& space);
Ket ket_of_vector(const std::vector<cplx>& v, const SpaceSpec& space, double prune_eps = 0.0);

// Projector onto `coord` = value.
Matrix bit_projector(const SpaceSpec& space, const QubitCoord& coord, bool value);
// Projector onto "cells 1..n all 1" (identity for n = 0).
Matrix running_projector_matrix(const SpaceSpec& space, std::uint32_t n);

// `gate` applied to `targets` (big-endian), under the given controls,
// extended by the identity elsewhere.
Matrix extended(const SpaceSpec& space, const Matrix& gate, const std::vector<QubitCoord>& targets,
                const ControlSpec& controls = {});

// The guard-copy involution as a dense permutation matrix.
Matrix guard_copy_matrix(const SpaceSpec& space, const Guard& guard, std::uint32_t slot,
                         std::uint32_t cell, const ControlSpec& controls = {});

// Conjugates m by the cyclic tape relabeling t_i -> t_{i+1} (cell A wraps to
// cell 1).  For m acting trivially on the last cell this is exactly the tape
// shift used by the recursive loop operators.
Matrix shift_conjugate(const SpaceSpec& space, const Matrix& m);
// The relabeling permutation itself.
Matrix shift_matrix(const SpaceSpec& space);

// Dense operator of a loop-free core program (ifs already desugared).  Throws
// std::invalid_argument on loops.
Matrix dense_of_program(const std::vector<Decl>& decls, const StmtPtr& program, const SpaceSpec& space);

enum class LoopBuild { Recursive, ClosedForm };

// Dense n-iteration loop operators over a single-qubit guard: the coherent
// unroll, and its terminated part.  Both are built either by the step
// recursion or by the closed product/sum formula; the two must agree, and the
// self-check suite holds them to that.  The body must act on registers only.
Matrix dense_unitary_loop(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                          std::uint32_t n, const SpaceSpec& space,
                          LoopBuild build = LoopBuild::Recursive);
Matrix dense_linear_loop(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                         std::uint32_t n, const SpaceSpec& space,
                         LoopBuild build = LoopBuild::Recursive);

struct PropertyResult {
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

struct SuiteConfig {
    std::uint32_t ancilla_count = 5;
    std::uint32_t n_max = 5;
    std::uint32_t trials = 20;
    std::uint64_t seed = 1;
};

using SuiteReport = std::map<std::string, PropertyResult>;

// Runs every cross-check over fixed gate-library bodies, random unitary
// bodies, and random input states; deterministic for a fixed config.
SuiteReport check_suite(const SuiteConfig& config);

bool suite_passed(const SuiteReport& report);

}  // namespace qwl
