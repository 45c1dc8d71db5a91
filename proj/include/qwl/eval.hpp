#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwl/ast.hpp"
#include "qwl/ket.hpp"

namespace qwl {

// Unitary: loops unroll coherently and the still-running branch stays in the
// state.  Linear: after the chosen number of iterations the still-running
// branch is removed, leaving the terminated component only.
enum class Mode { Unitary, Linear };

struct FixpointConfig {
    double eps = 1e-9;          // increment threshold
    std::uint32_t window = 8;   // consecutive sub-eps increments required to stop
    std::uint64_t max_iter = 10000;
};

// Called once before the first iteration of each top-level loop (iteration =
// 0) and once after each iteration.  `state` is the full coherent state;
// `running` is its still-running component.
using TraceFn = std::function<void(std::uint64_t iteration, const Ket& state, const Ket& running)>;

struct EvalConfig {
    Mode mode = Mode::Unitary;
    // Iteration count for unbounded loops; bounded loops always use their own
    // bound.  Mutually exclusive with `fixpoint`.
    std::optional<std::uint64_t> unroll;
    // Run unbounded loops to the stopping rule instead (Linear mode only).
    std::optional<FixpointConfig> fixpoint;
    double prune_eps = 0.0;
    std::uint64_t ancilla_budget = 1000000;
    TraceFn trace;
};

struct EvalReport {
    Ket final;
    std::uint64_t iterations_run = 0;    // loop iterations plus desugared ifs
    std::uint64_t ancillas_used = 0;
    // Norm of the newly terminated component after each top-level loop
    // iteration; the underlying vectors are pairwise orthogonal.
    std::vector<double> increments;
    double terminated_mass = 0.0;
    bool converged = true;
    std::vector<std::string> notes;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |0...0> tape with every register at its declared initial value.
Ket initial_state(const std::vector<Decl>& decls);

// Evaluates a desugared program on a normalized input.  Throws EvalError when
// the program still contains an if, when an unbounded loop is reached without
// an iteration policy, or when the ancilla budget is exhausted;
// std::invalid_argument for contradictory configurations.
EvalReport eval(const std::vector<Decl>& decls, const StmtPtr& program, const Ket& input,
                const EvalConfig& config);

// One loop iteration on the fixed tape layout where iteration i uses cell i:
// guard copy onto cell `iteration` controlled on cells 1..iteration-1, then
// the body controlled on cells 1..iteration.  The body must be free of loops
// and ifs.
Ket loop_step(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body, const Ket& k,
              std::uint32_t iteration);

// Projector onto "cells 1..n all 1": the branch still inside the loop after n
// iterations of the layout above.
ProjectorSpec still_running_projector(std::uint32_t n);

// Terminated component after n iterations: the unrolled loop state with the
// still-running branch removed.  n = 0 gives the zero vector.
Ket eval_linear_n(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                  const Ket& input, std::uint64_t n, double prune_eps = 0.0);

// Norm squared of eval_linear_n's result.
double terminated_mass(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                       const Ket& input, std::uint64_t n);

// Iterates the loop until the newly terminated increments stay below
// config.eps for config.window consecutive iterations, the still-running
// branch vanishes exactly, or config.max_iter is reached (converged = false).
// A stop with visible still-running mass is reported in `notes`.
EvalReport fixpoint(const std::vector<Decl>& decls, const Guard& guard, const StmtPtr& body,
                    const Ket& input, const FixpointConfig& config, double prune_eps = 0.0);

}  // namespace qwl
