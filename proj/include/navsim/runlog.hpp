#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "navsim/vehicle.hpp"

namespace navsim {

// Full per-step record of one closed-loop run. One row per control step,
// including the initial state (row count = T/dt + 1).
struct RunLog {
    int m = 0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<std::vector<VehicleState>> states;        // per step, m entries
    std::vector<NavigatorTrajectory::Sample> nav;         // y0 and derivatives
    std::vector<Eigen::VectorXd> z;                       // 2m fused references
    std::vector<Eigen::VectorXd> u;                       // 2m applied controls
    std::vector<Eigen::VectorXd> eta;                     // 6m error coordinates
    std::vector<double> attack_max;                       // max ||a_ij|| per step
    std::vector<std::vector<int>> trim_switches;          // cumulative, per vehicle
    bool worst_case = false;                              // any vehicle downgraded
    std::vector<int> worst_case_vehicles;

    std::size_t rows() const { return t.size(); }
};

struct MetricsSeries {
    Eigen::VectorXd t;
    Eigen::VectorXd e_tilde;    // (1/m) sum ||y_i - y_0||
    Eigen::VectorXd eps_tilde;  // (1/m) sum ||y_i - z_i||
    Eigen::VectorXd eta_norm;
    Eigen::MatrixXd per_vehicle;  // rows x m, ||y_i - y_0||

    // Max over the final `fraction` of the horizon (limsup surrogate).
    double steady_state(const Eigen::VectorXd& series, double fraction = 0.2) const;
};

}  // namespace navsim
