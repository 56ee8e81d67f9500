#include "navsim/vehicle.hpp"

#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

VehicleState derivative(const VehicleState& s, const ControlInput& u) {
    VehicleState d;
    d.px = s.vx * std::cos(s.theta);
    d.py = s.vx * std::sin(s.theta);
    d.theta = s.omega;
    d.vx = s.F;
    d.omega = u.u2;
    d.F = u.u1;
    return d;
}

OutputDerivs output_derivatives(const VehicleState& s) {
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    OutputDerivs o;
    o.y = {s.px, s.py};
    o.yd = {s.vx * c, s.vx * sn};
    o.ydd = {s.F * c - s.vx * s.omega * sn, s.F * sn + s.vx * s.omega * c};
    return o;
}

namespace {

VehicleState axpy(const VehicleState& s, const VehicleState& d, double h) {
    return {s.px + h * d.px,    s.py + h * d.py, s.theta + h * d.theta,
            s.vx + h * d.vx,    s.omega + h * d.omega, s.F + h * d.F};
}

bool finite(const VehicleState& s) {
    return std::isfinite(s.px) && std::isfinite(s.py) && std::isfinite(s.theta) &&
           std::isfinite(s.vx) && std::isfinite(s.omega) && std::isfinite(s.F);
}

}  // namespace

NetworkState step(const NetworkState& ns, std::span<const ControlInput> controls, double dt) {
    if (dt <= 0.0) throw ConfigError("step requires dt > 0");
    if (controls.size() != ns.states.size())
        throw ConfigError("control vector length does not match vehicle count");
    NetworkState out;
    out.t = ns.t + dt;
    out.states.resize(ns.states.size());
    for (std::size_t i = 0; i < ns.states.size(); ++i) {
        const VehicleState& s = ns.states[i];
        const ControlInput& u = controls[i];
        VehicleState k1 = derivative(s, u);
        VehicleState k2 = derivative(axpy(s, k1, dt / 2.0), u);
        VehicleState k3 = derivative(axpy(s, k2, dt / 2.0), u);
        VehicleState k4 = derivative(axpy(s, k3, dt), u);
        VehicleState next = s;
        next.px += dt / 6.0 * (k1.px + 2 * k2.px + 2 * k3.px + k4.px);
        next.py += dt / 6.0 * (k1.py + 2 * k2.py + 2 * k3.py + k4.py);
        next.theta += dt / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
        next.vx += dt / 6.0 * (k1.vx + 2 * k2.vx + 2 * k3.vx + k4.vx);
        next.omega += dt / 6.0 * (k1.omega + 2 * k2.omega + 2 * k3.omega + k4.omega);
        next.F += dt / 6.0 * (k1.F + 2 * k2.F + 2 * k3.F + k4.F);
        if (!finite(next))
            throw RuntimeFailure("integration diverged at vehicle " + std::to_string(i + 1) +
                                     ", t=" + std::to_string(ns.t),
                                 ns.t, static_cast<int>(i) + 1);
        out.states[i] = next;
    }
    return out;
}

NetworkState step(const NetworkState& ns, const ControlLaw& law, double dt) {
    if (dt <= 0.0) throw ConfigError("step requires dt > 0");
    const std::size_t m = ns.states.size();

    auto eval = [&](const NetworkState& at) {
        std::vector<ControlInput> u = law(at);
        std::vector<VehicleState> d(m);
        for (std::size_t i = 0; i < m; ++i) d[i] = derivative(at.states[i], u[i]);
        return d;
    };
    auto shifted = [&](const std::vector<VehicleState>& d, double h) {
        NetworkState at;
        at.t = ns.t + h;
        at.states.resize(m);
        for (std::size_t i = 0; i < m; ++i) at.states[i] = axpy(ns.states[i], d[i], h);
        return at;
    };

    std::vector<VehicleState> k1 = eval(ns);
    std::vector<VehicleState> k2 = eval(shifted(k1, dt / 2.0));
    std::vector<VehicleState> k3 = eval(shifted(k2, dt / 2.0));
    std::vector<VehicleState> k4 = eval(shifted(k3, dt));

    NetworkState out;
    out.t = ns.t + dt;
    out.states.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        VehicleState next = ns.states[i];
        next.px += dt / 6.0 * (k1[i].px + 2 * k2[i].px + 2 * k3[i].px + k4[i].px);
        next.py += dt / 6.0 * (k1[i].py + 2 * k2[i].py + 2 * k3[i].py + k4[i].py);
        next.theta += dt / 6.0 * (k1[i].theta + 2 * k2[i].theta + 2 * k3[i].theta + k4[i].theta);
        next.vx += dt / 6.0 * (k1[i].vx + 2 * k2[i].vx + 2 * k3[i].vx + k4[i].vx);
        next.omega += dt / 6.0 * (k1[i].omega + 2 * k2[i].omega + 2 * k3[i].omega + k4[i].omega);
        next.F += dt / 6.0 * (k1[i].F + 2 * k2[i].F + 2 * k3[i].F + k4[i].F);
        if (!finite(next))
            throw RuntimeFailure("integration diverged at vehicle " + std::to_string(i + 1) +
                                     ", t=" + std::to_string(ns.t),
                                 ns.t, static_cast<int>(i) + 1);
        out.states[i] = next;
    }
    return out;
}

NavigatorTrajectory NavigatorTrajectory::circle(double radius, double omega0,
                                                Eigen::Vector2d center) {
    NavigatorTrajectory tr;
    tr.kind_ = "circle";
    tr.ax_ = radius;
    tr.ay_ = radius;
    tr.omega0_ = omega0;
    tr.center_ = center;
    return tr;
}

NavigatorTrajectory NavigatorTrajectory::lemniscate(double ax, double ay, double omega0,
                                                    Eigen::Vector2d center) {
    NavigatorTrajectory tr;
    tr.kind_ = "lemniscate";
    tr.ax_ = ax;
    tr.ay_ = ay;
    tr.omega0_ = omega0;
    tr.center_ = center;
    return tr;
}

NavigatorTrajectory NavigatorTrajectory::line(Eigen::Vector2d origin, Eigen::Vector2d velocity) {
    NavigatorTrajectory tr;
    tr.kind_ = "line";
    tr.center_ = origin;
    tr.velocity_ = velocity;
    return tr;
}

NavigatorTrajectory::Sample NavigatorTrajectory::eval(double t) const {
    Sample s;
    if (kind_ == "line") {
        s.y = center_ + t * velocity_;
        s.yd = velocity_;
        s.ydd.setZero();
        s.yddd.setZero();
        return s;
    }
    const double w = omega0_;
    const double c = std::cos(w * t), sn = std::sin(w * t);
    if (kind_ == "circle") {
        s.y = center_ + Eigen::Vector2d{ax_ * c, ay_ * sn};
        s.yd = {-ax_ * w * sn, ay_ * w * c};
        s.ydd = {-ax_ * w * w * c, -ay_ * w * w * sn};
        s.yddd = {ax_ * w * w * w * sn, -ay_ * w * w * w * c};
        return s;
    }
    // lemniscate: x = ax sin(wt), y = (ay/2) sin(2wt)
    const double c2 = std::cos(2 * w * t), s2 = std::sin(2 * w * t);
    const double b = ay_ / 2.0;
    s.y = center_ + Eigen::Vector2d{ax_ * sn, b * s2};
    s.yd = {ax_ * w * c, 2 * b * w * c2};
    s.ydd = {-ax_ * w * w * sn, -4 * b * w * w * s2};
    s.yddd = {-ax_ * w * w * w * c, -8 * b * w * w * w * c2};
    return s;
}

}  // namespace navsim
