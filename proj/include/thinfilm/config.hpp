#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thinfilm/errors.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/reynolds.hpp"

namespace thinfilm {

enum class SolverChoice { Pointwise, Ode, Both };

inline const char* to_string(SolverChoice c) {
    switch (c) {
        case SolverChoice::Pointwise: return "pointwise";
        case SolverChoice::Ode: return "ode";
        case SolverChoice::Both: return "both";
    }
    return "pointwise";
}

/// Fully validated run description. Every numeric constraint of the fluid
/// and gap types is re-checked at parse time; unknown keys are rejected.
struct RunConfig {
    FluidParams fluid;
    GapProfile gap = GapProfile::constant(1.0, 1.0);
    std::optional<double> flux;   ///< Q; defaults to s h(0)/2 when absent
    int N = 128;
    int M = 128;
    SolverChoice solver = SolverChoice::Pointwise;
    std::string out_dir = "out";
    std::vector<double> epsilons; ///< optional rescale targets

    double resolved_flux() const { return flux ? *flux : default_flux(gap, fluid); }

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        auto gap_equal = [](const GapProfile& x, const GapProfile& y) {
            return x.kind() == y.kind() && x.length() == y.length() &&
                   x.param_a() == y.param_a() && x.param_b() == y.param_b() &&
                   x.table_x() == y.table_x() && x.table_h() == y.table_h();
        };
        return a.fluid.nu == b.fluid.nu && a.fluid.r == b.fluid.r &&
               a.fluid.lambda_star == b.fluid.lambda_star && a.fluid.s == b.fluid.s &&
               a.fluid.rho == b.fluid.rho && gap_equal(a.gap, b.gap) && a.flux == b.flux &&
               a.N == b.N && a.M == b.M && a.solver == b.solver && a.out_dir == b.out_dir &&
               a.epsilons == b.epsilons;
    }
};

namespace detail {

inline std::string trim(std::string v) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!v.empty() && issp(v.front())) v.erase(v.begin());
    while (!v.empty() && issp(v.back())) v.pop_back();
    return v;
}

inline bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline bool parse_int(const std::string& text, int& out) {
    const std::string t = trim(text);
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace detail

/// Parse the flat key = value format with [section] headers. '#' starts a
/// comment. All problems are collected and reported together: syntax and
/// unknown-key issues raise ParseError, violated value constraints raise
/// ConstraintError.
inline RunConfig parse_config_text(const std::string& text) {
    std::vector<std::string> parse_issues, constraint_issues;
    std::map<std::string, std::string> kv;
    std::string section;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parse_issues.push_back("line " + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parse_issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = section + "." + detail::trim(line.substr(0, eq));
        if (kv.count(key)) parse_issues.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = detail::trim(line.substr(eq + 1));
    }

    static const std::set<std::string> known = {
        "fluid.nu", "fluid.r", "fluid.lambda_star", "fluid.s", "fluid.rho",
        "gap.kind", "gap.L", "gap.h0", "gap.h1", "gap.h2", "gap.h_mean", "gap.h_amp", "gap.points",
        "flux.Q", "grid.N", "grid.M", "solver.method", "output.dir", "rescale.epsilons"};
    for (const auto& [key, value] : kv)
        if (!known.count(key)) parse_issues.push_back("unknown key '" + key + "'");

    auto take_double = [&](const std::string& key, bool required, double fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) parse_issues.push_back("missing required key '" + key + "'");
            return fallback;
        }
        double v = fallback;
        if (!detail::parse_double(it->second, v))
            parse_issues.push_back("key '" + key + "': cannot parse number from '" + it->second + "'");
        return v;
    };
    auto take_int = [&](const std::string& key, int fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        int v = fallback;
        if (!detail::parse_int(it->second, v))
            parse_issues.push_back("key '" + key + "': cannot parse integer from '" + it->second + "'");
        return v;
    };

    RunConfig cfg;
    cfg.fluid.nu = take_double("fluid.nu", true, 1.0);
    cfg.fluid.r = take_double("fluid.r", true, 0.0);
    cfg.fluid.lambda_star = take_double("fluid.lambda_star", true, 0.0);
    cfg.fluid.s = take_double("fluid.s", true, 0.0);
    cfg.fluid.rho = take_double("fluid.rho", false, 1.0);

    const std::string kind = kv.count("gap.kind") ? kv["gap.kind"] : "";
    if (kind.empty()) parse_issues.push_back("missing required key 'gap.kind'");
    const double L = take_double("gap.L", true, 1.0);

    if (kv.count("flux.Q")) {
        double q = 0.0;
        if (detail::parse_double(kv["flux.Q"], q))
            cfg.flux = q;
        else
            parse_issues.push_back("key 'flux.Q': cannot parse number from '" + kv["flux.Q"] + "'");
    }
    cfg.N = take_int("grid.N", 128);
    cfg.M = take_int("grid.M", 128);
    if (kv.count("solver.method")) {
        const std::string m = kv["solver.method"];
        if (m == "pointwise") cfg.solver = SolverChoice::Pointwise;
        else if (m == "ode") cfg.solver = SolverChoice::Ode;
        else if (m == "both") cfg.solver = SolverChoice::Both;
        else parse_issues.push_back("key 'solver.method': expected pointwise | ode | both, got '" + m + "'");
    }
    if (kv.count("output.dir")) cfg.out_dir = kv["output.dir"];
    if (kv.count("rescale.epsilons")) {
        std::istringstream es(kv["rescale.epsilons"]);
        std::string item;
        while (std::getline(es, item, ',')) {
            double e = 0.0;
            if (detail::parse_double(item, e))
                cfg.epsilons.push_back(e);
            else
                parse_issues.push_back("key 'rescale.epsilons': cannot parse number from '" + item + "'");
        }
    }

    if (!parse_issues.empty()) throw ParseError(parse_issues);

    // Data constraints (geometry/rheology validity; the r < 2/9 solver gate
    // is applied by validate_for_solve so that validation-only runs can
    // still report the refusal).
    try {
        cfg.fluid.validate();
    } catch (const std::invalid_argument& e) {
        constraint_issues.push_back(e.what());
    }
    try {
        if (kind == "constant") {
            cfg.gap = GapProfile::constant(take_double("gap.h0", true, 1.0), L);
        } else if (kind == "slider") {
            cfg.gap = GapProfile::slider(take_double("gap.h1", true, 1.0),
                                         take_double("gap.h2", true, 1.0), L);
        } else if (kind == "cosine") {
            cfg.gap = GapProfile::cosine(take_double("gap.h_mean", true, 1.0),
                                         take_double("gap.h_amp", false, 0.0), L);
        } else if (kind == "table") {
            std::vector<double> xs, hs;
            if (!kv.count("gap.points")) {
                constraint_issues.push_back("gap.kind = table requires gap.points = x0:h0, x1:h1, ...");
            } else {
                std::istringstream psrc(kv["gap.points"]);
                std::string pair;
                while (std::getline(psrc, pair, ',')) {
                    const auto colon = pair.find(':');
                    double xv = 0.0, hv = 0.0;
                    if (colon == std::string::npos || !detail::parse_double(pair.substr(0, colon), xv) ||
                        !detail::parse_double(pair.substr(colon + 1), hv)) {
                        constraint_issues.push_back("gap.points: cannot parse pair '" + pair + "'");
                        break;
                    }
                    xs.push_back(xv);
                    hs.push_back(hv);
                }
                if (constraint_issues.empty()) cfg.gap = GapProfile::table(std::move(xs), std::move(hs));
            }
        } else {
            constraint_issues.push_back("gap.kind: expected constant | slider | cosine | table, got '" + kind + "'");
        }
    } catch (const std::invalid_argument& e) {
        constraint_issues.push_back(e.what());
    }
    if (!parse_issues.empty()) throw ParseError(parse_issues); // number parse issues found above
    if (cfg.N < 16) constraint_issues.push_back("grid.N must be >= 16, got " + std::to_string(cfg.N));
    if (cfg.M < 8) constraint_issues.push_back("grid.M must be >= 8, got " + std::to_string(cfg.M));
    if (cfg.flux && !std::isfinite(*cfg.flux)) constraint_issues.push_back("flux.Q must be finite");
    for (double e : cfg.epsilons)
        if (!(e > 0.0 && e <= 1.0))
            constraint_issues.push_back("rescale.epsilons entries must lie in (0, 1], got " + std::to_string(e));

    if (!constraint_issues.empty()) throw ConstraintError(constraint_issues);
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError({"cannot open config file '" + path + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Constraints that apply as soon as a solve is requested; kept out of
/// parse_config so a validation run can turn the refusal into a report.
inline void validate_for_solve(const RunConfig& cfg) {
    std::vector<std::string> issues;
    if (!cfg.fluid.reynolds_admissible())
        issues.push_back("solving requires r < 2/9 (the pressure-gradient mobility must keep one sign), got r = " +
                         std::to_string(cfg.fluid.r));
    if (!issues.empty()) throw ConstraintError(issues);
}

/// Canonical serialization; parse_config_text(dump_config(cfg)) == cfg.
inline std::string dump_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[fluid]\n"
        << "nu = " << cfg.fluid.nu << "\n"
        << "r = " << cfg.fluid.r << "\n"
        << "lambda_star = " << cfg.fluid.lambda_star << "\n"
        << "s = " << cfg.fluid.s << "\n"
        << "rho = " << cfg.fluid.rho << "\n\n";
    out << "[gap]\n";
    switch (cfg.gap.kind()) {
        case GapProfile::Kind::Constant:
            out << "kind = constant\n"
                << "L = " << cfg.gap.length() << "\n"
                << "h0 = " << cfg.gap.param_a() << "\n";
            break;
        case GapProfile::Kind::Slider:
            out << "kind = slider\n"
                << "L = " << cfg.gap.length() << "\n"
                << "h1 = " << cfg.gap.param_a() << "\n"
                << "h2 = " << cfg.gap.param_b() << "\n";
            break;
        case GapProfile::Kind::Cosine:
            out << "kind = cosine\n"
                << "L = " << cfg.gap.length() << "\n"
                << "h_mean = " << cfg.gap.param_a() << "\n"
                << "h_amp = " << cfg.gap.param_b() << "\n";
            break;
        case GapProfile::Kind::Table: {
            out << "kind = table\n"
                << "L = " << cfg.gap.length() << "\n"
                << "points = ";
            const auto& xs = cfg.gap.table_x();
            const auto& hs = cfg.gap.table_h();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i) out << ", ";
                out << xs[i] << ":" << hs[i];
            }
            out << "\n";
            break;
        }
    }
    out << "\n";
    if (cfg.flux) out << "[flux]\nQ = " << *cfg.flux << "\n\n";
    out << "[grid]\nN = " << cfg.N << "\nM = " << cfg.M << "\n\n";
    out << "[solver]\nmethod = " << to_string(cfg.solver) << "\n\n";
    out << "[output]\ndir = " << cfg.out_dir << "\n";
    if (!cfg.epsilons.empty()) {
        out << "\n[rescale]\nepsilons = ";
        for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
            if (i) out << ", ";
            out << cfg.epsilons[i];
        }
        out << "\n";
    }
    return out.str();
}

} // namespace thinfilm
