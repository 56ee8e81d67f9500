#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "navsim/analysis.hpp"
#include "navsim/csvio.hpp"
#include "navsim/errors.hpp"
#include "navsim/fblin.hpp"
#include "navsim/runner.hpp"
#include "navsim/svgplot.hpp"

namespace fs = std::filesystem;
using namespace navsim;

namespace {

void write_run_outputs(const Scenario& sc, const RunLog& log, const fs::path& out) {
    fs::create_directories(out);
    write_csv(log, out / (sc.name + ".csv"));
    write_trajectory_plot(out / (sc.name + "_trajectories.svg"), sc.name, log);
    MetricsSeries ms = compute_metrics(log);
    std::vector<SvgSeries> err;
    err.push_back({"e_tilde", {ms.t.data(), ms.t.data() + ms.t.size()},
                   {ms.e_tilde.data(), ms.e_tilde.data() + ms.e_tilde.size()}});
    err.push_back({"eps_tilde", {ms.t.data(), ms.t.data() + ms.t.size()},
                   {ms.eps_tilde.data(), ms.eps_tilde.data() + ms.eps_tilde.size()}});
    write_line_chart(out / (sc.name + "_errors.svg"), sc.name + " errors", "t [s]",
                     "log10 error [m]", err, true);
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
    Scenario sc = Scenario::from_file(scenario_path);
    if (seed) {
        sc.seed = *seed;
        if (sc.attack) sc.attack->seed = *seed;
    }
    RunLog partial;
    RunLog log;
    try {
        log = run_scenario(sc, &partial);
    } catch (const RuntimeFailure&) {
        if (partial.rows() > 0) {
            fs::create_directories(out_dir);
            write_csv(partial, fs::path(out_dir) / (sc.name + "_partial.csv"));
            std::cerr << "partial log flushed to " << sc.name << "_partial.csv\n";
        }
        throw;
    }
    write_run_outputs(sc, log, out_dir);
    MetricsSeries ms = compute_metrics(log);
    std::cout << sc.name << ": final e_tilde = " << ms.e_tilde(ms.e_tilde.size() - 1)
              << ", steady-state e_tilde = " << ms.steady_state(ms.e_tilde) << "\n";
    return 0;
}

int cmd_grid(const std::string& out_dir, int m, double horizon, double dt, double abar,
             std::uint64_t seed) {
    fs::create_directories(out_dir);
    std::vector<GridResult> grid = run_experiment_grid(m, horizon, dt, abar, seed);

    std::vector<SvgSeries> e_curves, eps_curves;
    std::ofstream summary(fs::path(out_dir) / "summary.txt");
    summary << "experiment grid: m=" << m << ", T=" << horizon << " s, dt=" << dt
            << ", abar=" << abar << ", seed=" << seed << "\n"
            << "defaults not fixed by the reference experiment: horizon, dt, attack waveform "
               "(sinusoid), abar, circle navigator (radius 5, omega0 0.2)\n\n";
    summary << "run                steady-state e_tilde   steady-state eps_tilde   worst-case\n";
    for (const GridResult& r : grid) {
        write_run_outputs(r.scenario, r.log, out_dir);
        const MetricsSeries& ms = r.metrics;
        std::vector<double> tv(ms.t.data(), ms.t.data() + ms.t.size());
        e_curves.push_back(
            {r.scenario.name, tv, {ms.e_tilde.data(), ms.e_tilde.data() + ms.e_tilde.size()}});
        eps_curves.push_back({r.scenario.name, tv,
                              {ms.eps_tilde.data(), ms.eps_tilde.data() + ms.eps_tilde.size()}});
        char line[160];
        std::snprintf(line, sizeof line, "%-18s %-22.6g %-24.6g %s\n", r.scenario.name.c_str(),
                      ms.steady_state(ms.e_tilde), ms.steady_state(ms.eps_tilde),
                      r.log.worst_case ? "yes" : "no");
        summary << line;
    }
    write_line_chart(fs::path(out_dir) / "grid_e_tilde.svg", "average leader-tracking error",
                     "t [s]", "log10 e_tilde [m]", e_curves, true);
    write_line_chart(fs::path(out_dir) / "grid_eps_tilde.svg", "average disagreement", "t [s]",
                     "log10 eps_tilde [m]", eps_curves, true);
    std::cout << "grid written to " << out_dir << "\n";
    return 0;
}

int cmd_certify(const std::string& scenario_path, const std::string& out_dir) {
    Scenario sc = Scenario::from_file(scenario_path);
    if (!sc.attack) throw ConfigError("certify requires a scenario with an attack section");
    RunLog log = run_scenario(sc);
    MetricsSeries ms = compute_metrics(log);

    const int m = sc.net.vehicle_count();
    Eigen::MatrixXd Ac = closed_loop_matrix(sc.controller.gains, m);
    auto [A, B] = chain_matrices(m);
    const double rho_d = estimate_rho_d(log, Ac, B, sc.attack->abar);
    RobustnessCertificate cert =
        ultimate_bound(Ac, B, Eigen::MatrixXd::Identity(6 * m, 6 * m), rho_d, sc.attack->abar);
    const std::string report = certificate_report(cert, ms.steady_state(ms.eta_norm),
                                                  ms.steady_state(ms.e_tilde));
    std::cout << report;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / (sc.name + "_certificate.txt")) << report;
    }
    return 0;
}

int cmd_plot(const std::string& log_path, const std::string& out_dir) {
    RunLog log = read_csv(log_path);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(log_path).stem().string();
    write_trajectory_plot(fs::path(out_dir) / (stem + "_trajectories.svg"), stem, log);
    MetricsSeries ms = compute_metrics(log);
    std::vector<SvgSeries> err;
    std::vector<double> tv(ms.t.data(), ms.t.data() + ms.t.size());
    err.push_back({"e_tilde", tv, {ms.e_tilde.data(), ms.e_tilde.data() + ms.e_tilde.size()}});
    err.push_back(
        {"eps_tilde", tv, {ms.eps_tilde.data(), ms.eps_tilde.data() + ms.eps_tilde.size()}});
    write_line_chart(fs::path(out_dir) / (stem + "_errors.svg"), stem + " errors", "t [s]",
                     "log10 error [m]", err, true);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"networked nonholonomic vehicle tracking simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", log_path;
    std::optional<std::uint64_t> seed_opt;
    int m = 12;
    double horizon = 20.0, dt = 1e-3, abar = 1.0;
    std::uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "run one scenario and emit CSV + plots");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_opt, "override the scenario seed");

    auto* grid = app.add_subcommand("grid", "run the 3-topology x {clean, attacked} grid");
    grid->add_option("--out", out_dir, "output directory");
    grid->add_option("--m", m, "vehicle count");
    grid->add_option("--T", horizon, "horizon [s]");
    grid->add_option("--dt", dt, "time step [s]");
    grid->add_option("--abar", abar, "attack bound");
    grid->add_option("--seed", seed, "seed");

    auto* certify = app.add_subcommand("certify", "emit the robustness certificate for a run");
    certify->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    certify->add_option("--out", out_dir, "output directory (optional)");

    auto* plot = app.add_subcommand("plot", "re-plot a CSV log");
    plot->add_option("--log", log_path, "CSV log file")->required();
    plot->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(scenario_path, out_dir, seed_opt);
        if (grid->parsed()) return cmd_grid(out_dir, m, horizon, dt, abar, seed);
        if (certify->parsed()) return cmd_certify(scenario_path, out_dir);
        if (plot->parsed()) return cmd_plot(log_path, out_dir);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const RuntimeFailure& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
