#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "thinfilm/errors.hpp"
#include "thinfilm/validate.hpp"

namespace thinfilm {

inline nlohmann::ordered_json check_to_json(const CheckRecord& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["measured"] = c.measured;
    j["threshold"] = c.threshold;
    j["pass"] = c.pass;
    j["tier"] = c.hard ? "hard" : "warning";
    j["basis"] = c.basis;
    if (!c.location.empty()) j["location"] = c.location;
    return j;
}

inline nlohmann::ordered_json report_to_json(const ValidationReport& rep) {
    nlohmann::ordered_json j;
    j["verdict"]["hard_pass"] = rep.hard_pass;
    j["verdict"]["warnings_pass"] = rep.warnings_pass;
    if (!rep.refusal.empty()) j["verdict"]["refusal"] = rep.refusal;
    j["method"] = rep.method;
    if (rep.ode_pointwise_deviation)
        j["ode_pointwise_max_relative_deviation"] = *rep.ode_pointwise_deviation;

    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) j["checks"].push_back(check_to_json(c));

    j["smallness"]["chi"] = rep.smallness.chi;
    j["smallness"]["all_pass"] = rep.smallness.all_pass;
    j["smallness"]["conditions"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.smallness.conditions) j["smallness"]["conditions"].push_back(check_to_json(c));

    j["brackets"]["m"] = rep.brackets.m;
    j["brackets"]["M"] = rep.brackets.M;
    j["brackets"]["feasible"] = rep.brackets.feasible;
    j["brackets"]["mobility_low_margin"] = rep.brackets.mobility_low_margin;
    j["brackets"]["mobility_high_margin"] = rep.brackets.mobility_high_margin;
    j["brackets"]["mobility_ok"] = rep.brackets.mobility_ok;
    j["brackets"]["dkdq_low_margin"] = rep.brackets.dkdq_low_margin;
    j["brackets"]["dkdq_high_margin"] = rep.brackets.dkdq_high_margin;
    j["brackets"]["dkdq_ok"] = rep.brackets.dkdq_ok;
    j["brackets"]["collapse_error_r0"] = rep.brackets.collapse_error;

    j["residuals"]["momentum"] = rep.residuals.momentum;
    j["residuals"]["dzp"] = rep.residuals.dzp;
    j["residuals"]["divergence"] = rep.residuals.divergence;
    j["residuals"]["closure11"] = rep.residuals.closure11;
    j["residuals"]["closure12"] = rep.residuals.closure12;
    j["residuals"]["closure22"] = rep.residuals.closure22;
    return j;
}

inline void write_report_json(const std::string& path, const ValidationReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("cannot open output file '" + path + "'");
    out << report_to_json(rep).dump(2) << '\n';
}

} // namespace thinfilm
