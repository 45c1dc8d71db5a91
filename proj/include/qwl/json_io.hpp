#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qwl/ast.hpp"
#include "qwl/eval.hpp"
#include "qwl/oracle.hpp"

namespace qwl {

// State dump: one entry per basis term, in label order, with registers keyed
// by their declared names.  Round-trips exactly (amplitudes are emitted with
// shortest round-trip formatting by the JSON library).
nlohmann::json state_to_json(const Ket& k, const std::vector<Decl>& decls);
Ket state_from_json(const nlohmann::json& j, const std::vector<Decl>& decls);

nlohmann::json run_report_to_json(const EvalReport& report, Mode mode,
                                  const std::vector<Decl>& decls);

nlohmann::json suite_report_to_json(const SuiteReport& report);

}  // namespace qwl
