#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace navsim {

// Dynamically extended unicycle state. theta is left unwrapped; only its
// sine/cosine are ever consumed. F is the extended longitudinal force state
// (dF/dt = u1).
struct VehicleState {
    double px = 0.0;
    double py = 0.0;
    double theta = 0.0;
    double vx = 0.0;
    double omega = 0.0;
    double F = 0.0;
};

struct ControlInput {
    double u1 = 0.0;  // jerk channel, dF/dt
    double u2 = 0.0;  // torque channel
};

struct NetworkState {
    double t = 0.0;
    std::vector<VehicleState> states;
};

struct OutputDerivs {
    Eigen::Vector2d y;    // (px, py)
    Eigen::Vector2d yd;   // (vx cos, vx sin)
    Eigen::Vector2d ydd;  // (F cos - vx w sin, F sin + vx w cos)
};

VehicleState derivative(const VehicleState& s, const ControlInput& u);
OutputDerivs output_derivatives(const VehicleState& s);

// One classical RK4 step with controls held constant (zero-order hold).
// Throws RuntimeFailure naming the vehicle if a non-finite state appears.
NetworkState step(const NetworkState& ns, std::span<const ControlInput> controls, double dt);

// RK4 step with the feedback law re-evaluated at every stage, so the
// integrated system is the continuous closed loop.
using ControlLaw = std::function<std::vector<ControlInput>(const NetworkState&)>;
NetworkState step(const NetworkState& ns, const ControlLaw& law, double dt);

// Smooth planar reference with closed-form derivatives through order 3.
class NavigatorTrajectory {
public:
    struct Sample {
        Eigen::Vector2d y, yd, ydd, yddd;
    };

    static NavigatorTrajectory circle(double radius, double omega0,
                                      Eigen::Vector2d center = {0.0, 0.0});
    // Gerono-style figure eight: (ax sin wt, ay sin wt cos wt) + center.
    static NavigatorTrajectory lemniscate(double ax, double ay, double omega0,
                                          Eigen::Vector2d center = {0.0, 0.0});
    static NavigatorTrajectory line(Eigen::Vector2d origin, Eigen::Vector2d velocity);

    Sample eval(double t) const;
    const std::string& kind() const { return kind_; }

private:
    NavigatorTrajectory() = default;
    std::string kind_;
    double ax_ = 0.0, ay_ = 0.0, omega0_ = 0.0;
    Eigen::Vector2d center_{0.0, 0.0};
    Eigen::Vector2d velocity_{0.0, 0.0};
};

}  // namespace navsim
