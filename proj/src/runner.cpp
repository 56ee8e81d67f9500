#include "navsim/runner.hpp"

#include <algorithm>
#include <future>

#include "navsim/analysis.hpp"
#include "navsim/errors.hpp"
#include "navsim/fblin.hpp"

namespace navsim {

RunLog run_scenario(const Scenario& sc, RunLog* partial) {
    sc.validate();
    const int m = sc.net.vehicle_count();
    const int steps = sc.steps();

    AttackView attacks;
    if (sc.attack) attacks = AttackView(*sc.attack);
    const AttackView* att = sc.attack ? &attacks : nullptr;
    const ResilienceConfig* res = sc.resilience ? &*sc.resilience : nullptr;

    RunLog log;
    log.m = m;
    log.dt = sc.dt;
    log.t.reserve(steps + 1);

    NetworkState ns;
    ns.t = 0.0;
    ns.states = sc.initial_states();

    std::vector<int> switches(m, 0);
    std::vector<TrimResult> prev_trims;

    for (int k = 0; k <= steps; ++k) {
      try {
        ErrorState err = build_eta(ns, sc.net, sc.navigator, att, res);
        std::vector<ControlInput> u = solve_control(ns, err, sc.net, sc.controller, sc.navigator);

        if (res && !err.trims.empty()) {
            if (!prev_trims.empty()) {
                for (int i = 0; i < m; ++i)
                    if (err.trims[i].kept != prev_trims[i].kept) ++switches[i];
            }
            for (int i = 0; i < m; ++i) {
                if (err.trims[i].worst_case) {
                    log.worst_case = true;
                    if (std::find(log.worst_case_vehicles.begin(), log.worst_case_vehicles.end(),
                                  i + 1) == log.worst_case_vehicles.end())
                        log.worst_case_vehicles.push_back(i + 1);
                }
            }
            prev_trims = err.trims;
        }

        log.t.push_back(ns.t);
        log.states.push_back(ns.states);
        log.nav.push_back(sc.navigator.eval(ns.t));
        log.z.push_back(err.z);
        Eigen::VectorXd uvec(2 * m);
        for (int i = 0; i < m; ++i) {
            uvec(2 * i) = u[i].u1;
            uvec(2 * i + 1) = u[i].u2;
        }
        log.u.push_back(uvec);
        log.eta.push_back(err.eta);
        log.attack_max.push_back(err.attack_max);
        log.trim_switches.push_back(switches);

        if (k == steps) break;

        // The kept sets are frozen across the RK4 stages of this step.
        const std::vector<TrimResult>* frozen = err.trims.empty() ? nullptr : &err.trims;
        ControlLaw law = [&](const NetworkState& at) {
            ErrorState stage_err = build_eta(at, sc.net, sc.navigator, att, res, frozen);
            return solve_control(at, stage_err, sc.net, sc.controller, sc.navigator);
        };
        ns = step(ns, law, sc.dt);
      } catch (const RuntimeFailure&) {
        if (partial) *partial = std::move(log);
        throw;
      }
    }

    if (sc.attack) {
        const double worst = *std::max_element(log.attack_max.begin(), log.attack_max.end());
        if (worst > sc.attack->abar + 1e-9)
            throw RuntimeFailure("attack bound violated: max ||a|| = " + std::to_string(worst),
                                 log.t.back());
    }
    return log;
}

std::vector<GridResult> run_experiment_grid(int m, double horizon, double dt, double abar,
                                            std::uint64_t seed) {
    std::vector<Scenario> scenarios = experiment_grid(m, horizon, dt, abar, seed);
    std::vector<std::future<GridResult>> futures;
    for (const Scenario& sc : scenarios)
        futures.push_back(std::async(std::launch::async, [sc]() {
            GridResult r{sc, run_scenario(sc), {}};
            r.metrics = compute_metrics(r.log);
            return r;
        }));
    std::vector<GridResult> out;
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

}  // namespace navsim
