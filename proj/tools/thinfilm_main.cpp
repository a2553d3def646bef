// Command-line front end: solve, validate, rescale and oracle-compare
// subcommands over a key = value configuration file.
//
// Exit codes: 0 success, 2 parse error, 3 constraint violation,
// 4 solver failure, 5 hard validation failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thinfilm/thinfilm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitConstraint = 3;
constexpr int kExitSolver = 4;
constexpr int kExitValidation = 5;

struct CommonOpts {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> grid;
    std::optional<std::string> solver;
    bool dump_config = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "configuration file (key = value sections)")->required();
    sub->add_option("--out", o.out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--grid", o.grid, "grid override as N,M");
    sub->add_option("--solver", o.solver, "solver override: pointwise | ode | both")
        ->check(CLI::IsMember({"pointwise", "ode", "both"}));
    sub->add_flag("--dump-config", o.dump_config, "print the effective configuration and exit");
}

thinfilm::RunConfig load_config(const CommonOpts& o) {
    thinfilm::RunConfig cfg = thinfilm::parse_config(o.config_path);
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.grid) {
        int n = 0, m = 0;
        if (std::sscanf(o.grid->c_str(), "%d,%d", &n, &m) != 2)
            throw thinfilm::ParseError({"--grid expects N,M, got '" + *o.grid + "'"});
        if (n < 16) throw thinfilm::ConstraintError({"--grid: N must be >= 16"});
        if (m < 8) throw thinfilm::ConstraintError({"--grid: M must be >= 8"});
        cfg.N = n;
        cfg.M = m;
    }
    if (o.solver) {
        if (*o.solver == "pointwise") cfg.solver = thinfilm::SolverChoice::Pointwise;
        else if (*o.solver == "ode") cfg.solver = thinfilm::SolverChoice::Ode;
        else cfg.solver = thinfilm::SolverChoice::Both;
    }
    return cfg;
}

std::filesystem::path prepare_out_dir(const thinfilm::RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int cmd_solve(const CommonOpts& o) {
    thinfilm::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << thinfilm::dump_config(cfg);
        return kExitOk;
    }
    thinfilm::validate_for_solve(cfg);
    const thinfilm::SolveOutcome out = thinfilm::run_validation(cfg);

    const auto dir = prepare_out_dir(cfg);
    thinfilm::write_pressure_csv((dir / "pressure.csv").string(), *out.primary);
    thinfilm::write_fields_csv((dir / "fields.csv").string(), *out.fields);
    thinfilm::write_report_json((dir / "report.json").string(), out.report);

    std::cout << thinfilm::format_report(out.report);
    std::cout << "wrote " << (dir / "pressure.csv").string() << ", " << (dir / "fields.csv").string()
              << ", " << (dir / "report.json").string() << "\n";
    return out.report.hard_pass ? kExitOk : kExitValidation;
}

int cmd_validate(const CommonOpts& o) {
    thinfilm::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << thinfilm::dump_config(cfg);
        return kExitOk;
    }
    const thinfilm::SolveOutcome out = thinfilm::run_validation(cfg);
    std::cout << thinfilm::format_report(out.report);
    if (out.refused) return kExitConstraint;
    return out.report.hard_pass ? kExitOk : kExitValidation;
}

int cmd_rescale(const CommonOpts& o, const std::vector<double>& eps_flag) {
    thinfilm::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << thinfilm::dump_config(cfg);
        return kExitOk;
    }
    std::vector<double> epsilons = eps_flag.empty() ? cfg.epsilons : eps_flag;
    if (epsilons.empty())
        throw thinfilm::ConstraintError({"rescale needs --epsilon <v> or a [rescale] epsilons list"});
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0))
            throw thinfilm::ConstraintError({"rescale: epsilon must lie in (0, 1], got " +
                                             thinfilm::format_value_short(e)});

    thinfilm::validate_for_solve(cfg);
    const thinfilm::SolveOutcome out = thinfilm::run_validation(cfg);

    const auto dir = prepare_out_dir(cfg);
    for (double e : epsilons) {
        const thinfilm::LimitFields scaled = thinfilm::rescale_to_epsilon(*out.fields, e);
        const std::string tag = thinfilm::format_value_short(e);
        thinfilm::write_fields_csv((dir / ("fields_eps_" + tag + ".csv")).string(), scaled);
        thinfilm::write_pressure_csv((dir / ("pressure_eps_" + tag + ".csv")).string(), scaled.pressure);
        std::cout << "wrote fields_eps_" << tag << ".csv and pressure_eps_" << tag << ".csv in "
                  << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_oracle_compare(const CommonOpts& o) {
    thinfilm::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << thinfilm::dump_config(cfg);
        return kExitOk;
    }
    thinfilm::validate_for_solve(cfg);

    const bool couette_applies = cfg.gap.kind() == thinfilm::GapProfile::Kind::Constant;
    const bool newtonian_applies = cfg.fluid.lambda_star == 0.0;
    if (!couette_applies && !newtonian_applies)
        throw thinfilm::ConstraintError(
            {"oracle-compare needs a constant gap (drag-flow oracle) or lambda_star = 0 (Newtonian oracle)"});

    const thinfilm::SolveOutcome out = thinfilm::run_validation(cfg);
    bool ok = true;
    for (const auto& c : out.report.checks) {
        if (c.name == "oracle_constant_gap" || c.name == "oracle_newtonian") {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": max deviation "
                      << c.measured << " vs limit " << c.threshold << "\n";
            ok = ok && c.pass;
        }
    }
    return ok ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thin-film viscoelastic lubrication solver"};
    app.require_subcommand(1);

    CommonOpts solve_opts, validate_opts, rescale_opts, oracle_opts;
    std::vector<double> rescale_eps;

    CLI::App* solve = app.add_subcommand("solve", "solve and write pressure.csv, fields.csv, report.json");
    add_common(solve, solve_opts);
    CLI::App* validate = app.add_subcommand("validate", "solve and print the full property report");
    add_common(validate, validate_opts);
    CLI::App* rescale = app.add_subcommand("rescale", "write fields rescaled to a finite relative thickness");
    add_common(rescale, rescale_opts);
    rescale->add_option("--epsilon", rescale_eps, "relative thickness in (0, 1]; repeatable");
    CLI::App* oracle = app.add_subcommand("oracle-compare", "compare the solve against closed-form references");
    add_common(oracle, oracle_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParse;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opts);
        if (validate->parsed()) return cmd_validate(validate_opts);
        if (rescale->parsed()) return cmd_rescale(rescale_opts, rescale_eps);
        if (oracle->parsed()) return cmd_oracle_compare(oracle_opts);
    } catch (const thinfilm::ParseError& e) {
        std::cerr << "configuration parse error:\n";
        for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
        return kExitParse;
    } catch (const thinfilm::RheologyOutOfRange& e) {
        std::cerr << "constraint violation: " << e.what() << "\n";
        return kExitConstraint;
    } catch (const thinfilm::ConstraintError& e) {
        std::cerr << "constraint violation:\n";
        for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
        return kExitConstraint;
    } catch (const thinfilm::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
