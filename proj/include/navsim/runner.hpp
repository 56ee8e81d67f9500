#pragma once

#include "navsim/runlog.hpp"
#include "navsim/scenario.hpp"

namespace navsim {

// Runs the closed loop: per step, evaluate the navigator, apply the adversary
// view, freeze the trim sets, build eta, solve the implicit control, integrate.
// Deterministic for a fixed scenario + seed. On a RuntimeFailure the rows
// logged so far are moved into `partial` (when given) before rethrowing.
RunLog run_scenario(const Scenario& sc, RunLog* partial = nullptr);

struct GridResult {
    Scenario scenario;
    RunLog log;
    MetricsSeries metrics;
};

// The 3 topologies x {clean, attacked} grid, executed concurrently.
std::vector<GridResult> run_experiment_grid(int m = 12, double horizon = 20.0, double dt = 1e-3,
                                            double abar = 1.0, std::uint64_t seed = 1);

}  // namespace navsim
