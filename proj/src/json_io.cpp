#include "qwl/json_io.hpp"

#include <stdexcept>

namespace qwl {

nlohmann::json state_to_json(const Ket& k, const std::vector<Decl>& decls) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [label, amp] : k.terms()) {
        if (label.regs.size() != decls.size())
            throw std::invalid_argument("state register count does not match the declarations");
        nlohmann::json regs = nlohmann::json::object();
        for (std::size_t i = 0; i < decls.size(); ++i) regs[decls[i].name] = label.regs[i];
        out.push_back({{"ancillas", label.ancillas},
                       {"regs", std::move(regs)},
                       {"re", amp.real()},
                       {"im", amp.imag()}});
    }
    return out;
}

Ket state_from_json(const nlohmann::json& j, const std::vector<Decl>& decls) {
    Ket k;
    for (const auto& entry : j) {
        std::vector<std::uint64_t> regs(decls.size(), 0);
        const auto& reg_obj = entry.at("regs");
        for (std::size_t i = 0; i < decls.size(); ++i)
            regs[i] = reg_obj.at(decls[i].name).get<std::uint64_t>();
        k.add_term(BasisLabel(entry.at("ancillas").get<std::string>(), std::move(regs)),
                   cplx(entry.at("re").get<double>(), entry.at("im").get<double>()));
    }
    return k;
}

nlohmann::json run_report_to_json(const EvalReport& report, Mode mode,
                                  const std::vector<Decl>& decls) {
    return {{"schema_version", "1"},
            {"mode", mode == Mode::Unitary ? "unitary" : "linear"},
            {"iterations", report.iterations_run},
            {"converged", report.converged},
            {"terminated_mass", report.terminated_mass},
            {"increments", report.increments},
            {"notes", report.notes},
            {"state", state_to_json(report.final, decls)}};
}

nlohmann::json suite_report_to_json(const SuiteReport& report) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, result] : report)
        out[name] = {{"max_deviation", result.max_deviation}, {"pass", result.pass}};
    return out;
}

}  // namespace qwl
