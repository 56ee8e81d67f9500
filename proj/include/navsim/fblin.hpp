#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "navsim/adversary.hpp"
#include "navsim/netgraph.hpp"
#include "navsim/resilience.hpp"
#include "navsim/vehicle.hpp"

namespace navsim {

struct Gains {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
    bool hurwitz() const { return k1 > 0.0 && k2 > 0.0 && k3 > 0.0 && k2 * k3 > k1; }
};

// Triple pole at -p per output axis: (s+p)^3 = s^3 + 3p s^2 + 3p^2 s + p^3.
Gains gains_from_pole(double p);

struct ControllerConfig {
    Gains gains;
    double v_min = 1e-3;  // |v_x| guard for Psi inversion
};

// A = I_m (x) calA, B = I_m (x) calB: two decoupled integrator chains per
// vehicle, input on the highest-order error derivatives.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> chain_matrices(int m);

// K (2m x 6m) applying u+ = -k1 e - k2 ed - k3 edd per axis per vehicle.
Eigen::MatrixXd gain_matrix(const Gains& g, int m);
Eigen::MatrixXd closed_loop_matrix(const Gains& g, int m);  // A + B K

struct SigmaPsi {
    Eigen::Vector2d sigma;
    Eigen::Matrix2d psi;  // det psi = v_x
};
SigmaPsi sigma_psi(const VehicleState& s);

// Error coordinates eta_bar plus the effective fusion rows actually used to
// form the references (trimmed/renormalized under resilience, nominal
// otherwise). The control solve consumes the same rows.
struct ErrorState {
    Eigen::VectorXd eta;        // 6m, vehicle-major, [e; ed; edd] per vehicle
    Eigen::MatrixXd adj_m_eff;  // m x m
    Eigen::VectorXd adj0_eff;   // m
    std::vector<TrimResult> trims;  // empty when no resilience config
    Eigen::VectorXd z;          // 2m fused references (logging)
    double attack_max = 0.0;    // max ||a_ij(t)|| over active edges this call
};

// Forms z_i (or z_i^res), its first two derivatives, and eta from neighbor
// output derivatives, corrupted per `attacks` where applicable. `frozen_trims`
// pins the kept sets within one control step.
ErrorState build_eta(const NetworkState& ns, const CommNetwork& net,
                     const NavigatorTrajectory& traj, const AttackView* attacks = nullptr,
                     const ResilienceConfig* res = nullptr,
                     const std::vector<TrimResult>* frozen_trims = nullptr);

// Solves M u = Psi^{-1}[-sigma + zddd_sigma + K eta] with
// M = I - Psi^{-1}(A_eff (x) I2) Psi by dense LU with partial pivoting.
// Throws RuntimeFailure on |v_x| < v_min or a numerically singular M.
std::vector<ControlInput> solve_control(const NetworkState& ns, const ErrorState& err,
                                        const CommNetwork& net, const ControllerConfig& cfg,
                                        const NavigatorTrajectory& traj);

}  // namespace navsim
