// mcvar: graph surfaces of minimum mean curvature variation.
//
// Subcommands: check, solve, convergence, energy, export. Each takes a flat
// key=value config file; command-line flags override config values.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "mcvar/calculus.hpp"
#include "mcvar/io.hpp"
#include "mcvar/presets.hpp"

namespace fs = std::filesystem;
using namespace mcvar;

namespace {

struct Overrides {
    std::string mode, out, preset;
    int m = -1;
    double omega = -1, eps0 = -1;
    long long seed = -1;
    bool force = false, snapshots = false, dump_system = false, allow_1d = false;
    std::vector<int> resolutions;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--mode", ov.mode, "simplified | geometric")
        ->check(CLI::IsMember({"simplified", "geometric"}));
    cmd->add_option("--m", ov.m, "nodes per axis");
    cmd->add_option("--omega", ov.omega, "under-relaxation in (0,1]");
    cmd->add_option("--eps0", ov.eps0, "epsilon_0 for the Giaquinta bound");
    cmd->add_option("--seed", ov.seed, "seed for randomized probes");
    cmd->add_option("--out", ov.out, "output directory");
    cmd->add_flag("--force", ov.force, "run despite failed admissibility");
    cmd->add_flag("--snapshots", ov.snapshots, "write per-iteration CSV snapshots");
    cmd->add_flag("--dump-system", ov.dump_system, "dump the assembled system (MatrixMarket)");
    cmd->add_flag("--allow-1d-nonzero-h", ov.allow_1d,
                  "waive the 1-d endpoint curvature convention");
}

RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    if (!ov.mode.empty())
        cfg.iterate.mode = ov.mode == "geometric" ? IterateMode::Tensor : IterateMode::Scalar;
    if (ov.m > 0) cfg.m = ov.m;
    if (ov.omega > 0) cfg.iterate.omega = ov.omega;
    if (ov.eps0 > 0) cfg.iterate.eps0 = ov.eps0;
    if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
    if (!ov.out.empty()) cfg.out_dir = ov.out;
    if (!ov.preset.empty()) cfg.preset = ov.preset;
    if (!ov.resolutions.empty()) cfg.resolutions = ov.resolutions;
    cfg.force |= ov.force;
    cfg.snapshots |= ov.snapshots;
    cfg.dump_system |= ov.dump_system;
    cfg.iterate.allow_1d_nonzero_h |= ov.allow_1d;
    validate(cfg);
    return cfg;
}

const char* status_str(CondStatus s) {
    switch (s) {
        case CondStatus::Satisfied: return "satisfied";
        case CondStatus::Borderline: return "BORDERLINE";
        case CondStatus::Violated: return "VIOLATED";
    }
    return "?";
}

int cmd_check(const RunConfig& cfg) {
    const GridPtr grid = make_grid(cfg.domain, cfg.m);
    const BoundaryData bd = BoundaryData::from_text(*grid, cfg.g_text, cfg.h_text);
    const AdmissibilityReport rep =
        check_h(bd, cfg.domain, *grid, cfg.iterate.eps0, cfg.iterate.allow_1d_nonzero_h);
    for (const auto& c : rep.conditions)
        std::printf("%-22s %-11s margin=% .6e  threshold=% .6e  observed=% .6e  (%d samples)%s\n",
                    c.name.c_str(), status_str(c.status), c.margin, c.threshold, c.observed,
                    c.samples, c.required ? "" : "  [informational]");
    for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
    std::cout << (rep.required_ok() ? "admissible\n" : "NOT admissible\n");
    return rep.required_ok() ? 0 : 1;
}

int cmd_solve(RunConfig cfg) {
    const GridPtr grid = make_grid(cfg.domain, cfg.m);
    const BoundaryData bd = BoundaryData::from_text(*grid, cfg.g_text, cfg.h_text);
    fs::create_directories(cfg.out_dir);
    if (cfg.snapshots) fs::create_directories(cfg.out_dir + "/snapshots");

    FixedPointResult res;
    try {
        if (cfg.snapshots) {
            cfg.iterate.on_iterate = [&](int k, const ScalarField& u, const ScalarField& H) {
                char name[64];
                std::snprintf(name, sizeof(name), "/snapshots/u_%03d.csv", k);
                write_csv(cfg.out_dir + name, u);
                std::snprintf(name, sizeof(name), "/snapshots/H_%03d.csv", k);
                write_csv(cfg.out_dir + name, H);
            };
        }
        res = fixed_point(bd, grid, cfg.iterate, cfg.force);
    } catch (const std::runtime_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 1;
    }

    write_report(cfg.out_dir + "/report.json", res.report, cfg);
    write_csv(cfg.out_dir + "/u.csv", res.u);
    write_csv(cfg.out_dir + "/H.csv", res.H);
    write_obj(cfg.out_dir + "/surface.obj", res.u);
    if (cfg.dump_system) {
        const CoefficientField coef = build_coefficient(res.u, cfg.iterate.mode);
        const LinearSystem sys = assemble(coef, *grid, bd.h_sites);
        write_matrix_market(cfg.out_dir + "/system.mtx", sys.A);
    }

    const char* st = res.report.status == SolveStatus::Converged  ? "converged"
                     : res.report.status == SolveStatus::MaxIters ? "max-iters"
                                                                  : "pmc-failure";
    std::printf("status=%s outer=%zu E_simplified=%.9e E_geometric=%.9e\n", st,
                res.report.history.size(), res.report.final_e_simplified,
                res.report.final_e_geometric);
    std::printf("certificate: pmc=%.3e elliptic=%.3e (target %.1e)\n", res.report.cert_pmc,
                res.report.cert_elliptic, 10 * cfg.iterate.newton.tol);
    return res.report.status == SolveStatus::Converged ? 0 : 1;
}

int cmd_convergence(const RunConfig& cfg) {
    Preset preset;
    if (!cfg.preset.empty()) {
        preset = make_preset(cfg.preset);
    } else if (!cfg.u_exact_text.empty()) {
        preset.name = "custom";
        preset.domain = cfg.domain;
        const Expr ue = Expr::parse(cfg.u_exact_text);
        const DomainSpec spec = cfg.domain;
        preset.u_exact = [ue, spec](double x, double y) {
            return ue.eval(domain_point(spec, x, y));
        };
        preset.H_exact = [ue, spec](double x, double y) {
            return curvature_of_expr(ue, spec, x, y);
        };
    } else {
        std::cerr << "convergence needs a preset or u_exact_expr\n";
        return 2;
    }

    const ConvergenceStudy study = run_convergence(preset, cfg.resolutions, cfg.iterate.newton);
    std::printf("preset %s\n", preset.name.c_str());
    std::printf("%6s %14s %14s %14s %14s\n", "m", "err(curv)", "err(pmc)", "E_simpl", "E_geom");
    for (const auto& r : study.rows)
        std::printf("%6d %14.6e %14.6e %14.6e %14.6e%s\n", r.m, r.err_curvature, r.err_pmc,
                    r.e_simplified, r.e_geometric, r.newton_ok ? "" : "  [newton failed]");
    auto show = [](const char* what, const std::vector<double>& v) {
        std::printf("order %-10s", what);
        for (double o : v)
            std::isnan(o) ? std::printf("  at-floor") : std::printf("  %.2f", o);
        std::printf("\n");
    };
    show("curvature", study.order_curvature);
    show("pmc", study.order_pmc);
    show("energy", study.order_energy);

    bool newton_all = true;
    for (const auto& r : study.rows) newton_all &= r.newton_ok;
    const bool ok = newton_all && study.all_orders_ok(1.9);
    std::printf("%s\n", ok ? "orders >= 1.9" : "FAILED order check");
    return ok ? 0 : 1;
}

int cmd_energy(const RunConfig& cfg, const std::string& u_file, const std::string& H_file) {
    const GridPtr grid = make_grid(cfg.domain, cfg.m);
    ScalarField u = read_csv(u_file, grid);
    ScalarField H = read_csv(H_file, grid);
    const BoundaryData bd = BoundaryData::from_text(*grid, cfg.g_text, cfg.h_text);
    u.set_trace(bd.g_sites);
    H.set_trace(bd.h_sites);

    const double es = energy_simplified(H, u);
    const double eg = energy_geometric(H, u);

    // nodal sandwich check: |grad H|^2 / D^2 <= |grad_M H|^2 <= |grad H|^2
    const ScalarField tg = tangential_gradient_sq(H, u);
    const VectorField dH = gradient(H);
    const ScalarField D = area_factor(u);
    int violations = 0;
    const Grid& g = *grid;
    for (int q = 0; q < g.num_interior(); ++q) {
        const std::size_t c = static_cast<std::size_t>(g.compact_of_int[q]);
        double g2 = 0;
        for (int k = 0; k < g.n; ++k) g2 += dH.comp(q, k) * dH.comp(q, k);
        const double lo = g2 / (D.values[c] * D.values[c]);
        const double tol = 1e-12 * std::max(1.0, g2);
        if (tg.values[c] < lo - tol || tg.values[c] > g2 + tol) ++violations;
    }
    std::printf("E_simplified=%.12e\nE_geometric=%.12e\nsandwich_violations=%d\n", es, eg,
                violations);
    return 0;
}

int cmd_export(const RunConfig& cfg, const std::string& u_file) {
    const GridPtr grid = make_grid(cfg.domain, cfg.m);
    ScalarField u = read_csv(u_file, grid);
    const BoundaryData bd = BoundaryData::from_text(*grid, cfg.g_text, cfg.h_text);
    u.set_trace(bd.g_sites);
    fs::create_directories(cfg.out_dir);
    write_obj(cfg.out_dir + "/surface.obj", u);
    std::printf("wrote %s/surface.obj\n", cfg.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph surfaces of minimum mean curvature variation"};
    app.require_subcommand(1);

    std::string config_path, u_file, H_file;
    Overrides ov;

    auto* check = app.add_subcommand("check", "verify admissibility of the boundary data");
    check->add_option("config", config_path, "run config file")->required();
    add_common_flags(check, ov);

    auto* solve = app.add_subcommand("solve", "run the fixed-point iteration");
    solve->add_option("config", config_path, "run config file")->required();
    add_common_flags(solve, ov);

    auto* conv = app.add_subcommand("convergence", "grid-refinement study");
    conv->add_option("config", config_path, "run config file");
    conv->add_option("--preset", ov.preset, "plane | cap[-R] | sine");
    conv->add_option("--resolutions", ov.resolutions, "m values")->delimiter(',');
    add_common_flags(conv, ov);

    auto* energy = app.add_subcommand("energy", "evaluate both energies for stored fields");
    energy->add_option("config", config_path, "run config file")->required();
    energy->add_option("u_csv", u_file, "u field CSV")->required();
    energy->add_option("H_csv", H_file, "H field CSV")->required();
    add_common_flags(energy, ov);

    auto* exp = app.add_subcommand("export", "re-export a stored u field as OBJ");
    exp->add_option("config", config_path, "run config file")->required();
    exp->add_option("u_csv", u_file, "u field CSV")->required();
    add_common_flags(exp, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_with_overrides(config_path, ov);
        if (check->parsed()) return cmd_check(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        if (energy->parsed()) return cmd_energy(cfg, u_file, H_file);
        if (exp->parsed()) return cmd_export(cfg, u_file);
    } catch (const ExprError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
