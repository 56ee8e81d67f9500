#include "navsim/fblin.hpp"

#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

Gains gains_from_pole(double p) {
    if (p <= 0.0) throw ConfigError("pole must be positive");
    return {p * p * p, 3.0 * p * p, 3.0 * p};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> chain_matrices(int m) {
    Eigen::MatrixXd calA = Eigen::MatrixXd::Zero(6, 6);
    calA(0, 2) = calA(1, 3) = calA(2, 4) = calA(3, 5) = 1.0;
    Eigen::MatrixXd calB = Eigen::MatrixXd::Zero(6, 2);
    calB(4, 0) = calB(5, 1) = 1.0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6 * m, 6 * m);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        A.block(6 * i, 6 * i, 6, 6) = calA;
        B.block(6 * i, 2 * i, 6, 2) = calB;
    }
    return {A, B};
}

Eigen::MatrixXd gain_matrix(const Gains& g, int m) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * m, 6 * m);
    for (int i = 0; i < m; ++i)
        for (int ax = 0; ax < 2; ++ax) {
            K(2 * i + ax, 6 * i + ax) = -g.k1;
            K(2 * i + ax, 6 * i + 2 + ax) = -g.k2;
            K(2 * i + ax, 6 * i + 4 + ax) = -g.k3;
        }
    return K;
}

Eigen::MatrixXd closed_loop_matrix(const Gains& g, int m) {
    auto [A, B] = chain_matrices(m);
    return A + B * gain_matrix(g, m);
}

SigmaPsi sigma_psi(const VehicleState& s) {
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    SigmaPsi r;
    r.sigma = {-(2.0 * s.F * s.omega * sn + s.vx * s.omega * s.omega * c),
               2.0 * s.F * s.omega * c - s.vx * s.omega * s.omega * sn};
    r.psi << c, -s.vx * sn, sn, s.vx * c;
    return r;
}

ErrorState build_eta(const NetworkState& ns, const CommNetwork& net,
                     const NavigatorTrajectory& traj, const AttackView* attacks,
                     const ResilienceConfig* res, const std::vector<TrimResult>* frozen_trims) {
    const int m = net.vehicle_count();
    if (static_cast<int>(ns.states.size()) != m)
        throw ConfigError("network state size does not match graph");

    ErrorState out;
    out.eta.resize(6 * m);
    out.z.resize(2 * m);
    out.adj_m_eff = net.adj_m();
    out.adj0_eff = net.adj0_diag();

    NavigatorTrajectory::Sample nav = traj.eval(ns.t);
    std::vector<OutputDerivs> own(m);
    for (int i = 0; i < m; ++i) own[i] = output_derivatives(ns.states[i]);

    for (int i = 1; i <= m; ++i) {
        std::map<int, OutputDerivs> received;
        for (int j : net.in_neighbors(i)) {
            OutputDerivs od;
            if (j == 0)
                od = {nav.y, nav.yd, nav.ydd};
            else
                od = own[j - 1];
            if (attacks && attacks->attacked(i, j)) {
                AttackSample a = attacks->eval(i, j, ns.t);
                od.y += a.a;
                od.yd += a.ad;
                od.ydd += a.add;
                out.attack_max = std::max(out.attack_max, a.a.norm());
            }
            received[j] = od;
        }
        if (received.empty())
            throw ConfigError("vehicle " + std::to_string(i) + " has no in-neighbors");

        Eigen::Vector2d z, zd, zdd;
        if (res) {
            const TrimResult* frozen =
                frozen_trims ? &(*frozen_trims)[static_cast<std::size_t>(i - 1)] : nullptr;
            FusedReference fr = resilient_reference(i, received, *res, net, frozen);
            z = fr.z;
            zd = fr.zd;
            zdd = fr.zdd;
            out.trims.push_back(fr.trim);
            // Replace row i by the trimmed, renormalized weights.
            out.adj_m_eff.row(i - 1).setZero();
            out.adj0_eff(i - 1) = 0.0;
            for (int j : fr.trim.kept) {
                if (j == 0)
                    out.adj0_eff(i - 1) = fr.trim.weights.at(j);
                else
                    out.adj_m_eff(i - 1, j - 1) = fr.trim.weights.at(j);
            }
        } else {
            z.setZero();
            zd.setZero();
            zdd.setZero();
            for (const auto& [j, od] : received) {
                const double w = net.weight(i, j);
                z += w * od.y;
                zd += w * od.yd;
                zdd += w * od.ydd;
            }
        }

        const OutputDerivs& mine = own[i - 1];
        out.eta.segment<2>(6 * (i - 1)) = mine.y - z;
        out.eta.segment<2>(6 * (i - 1) + 2) = mine.yd - zd;
        out.eta.segment<2>(6 * (i - 1) + 4) = mine.ydd - zdd;
        out.z.segment<2>(2 * (i - 1)) = z;
    }
    return out;
}

std::vector<ControlInput> solve_control(const NetworkState& ns, const ErrorState& err,
                                        const CommNetwork& net, const ControllerConfig& cfg,
                                        const NavigatorTrajectory& traj) {
    const int m = net.vehicle_count();
    if (!cfg.gains.hurwitz()) throw ConfigError("controller gains are not Hurwitz");

    std::vector<SigmaPsi> sp(m);
    std::vector<Eigen::Matrix2d> psi_inv(m);
    for (int i = 0; i < m; ++i) {
        const VehicleState& s = ns.states[i];
        if (std::abs(s.vx) < cfg.v_min)
            throw RuntimeFailure("Psi singular: |v_x| = " + std::to_string(std::abs(s.vx)) +
                                     " below guard at vehicle " + std::to_string(i + 1) +
                                     ", t=" + std::to_string(ns.t),
                                 ns.t, i + 1);
        sp[i] = sigma_psi(s);
        psi_inv[i] = sp[i].psi.inverse();
    }

    NavigatorTrajectory::Sample nav = traj.eval(ns.t);
    const Eigen::MatrixXd& Am = err.adj_m_eff;
    const Eigen::VectorXd& a0 = err.adj0_eff;

    // rhs = Psi^{-1} [ -sigma + zddd_sigma + K eta ], with
    // zddd_sigma = (A_m (x) I2) sigma + (A_0 (x) I2) yddd_0.
    Eigen::VectorXd rhs(2 * m);
    const Gains& g = cfg.gains;
    for (int i = 0; i < m; ++i) {
        Eigen::Vector2d acc = -sp[i].sigma + a0(i) * nav.yddd;
        for (int j = 0; j < m; ++j)
            if (Am(i, j) != 0.0) acc += Am(i, j) * sp[j].sigma;
        Eigen::Vector2d keta =
            -g.k1 * err.eta.segment<2>(6 * i) - g.k2 * err.eta.segment<2>(6 * i + 2) -
            g.k3 * err.eta.segment<2>(6 * i + 4);
        rhs.segment<2>(2 * i) = psi_inv[i] * (acc + keta);
    }

    // M = I_{2m} - Psi^{-1} (A_m (x) I2) Psi, assembled blockwise.
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (Am(i, j) != 0.0)
                M.block<2, 2>(2 * i, 2 * j) -= Am(i, j) * (psi_inv[i] * sp[j].psi);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_min = diag.minCoeff();
    if (pivot_min < 1e-12) {
        throw RuntimeFailure("control matrix M numerically singular at t=" +
                                 std::to_string(ns.t) + " (pivot ratio " +
                                 std::to_string(pivot_min / diag.maxCoeff()) + ")",
                             ns.t);
    }
    Eigen::VectorXd u = lu.solve(rhs);
    // Residual guard, scaled by the right-hand side so that large Psi^{-1}
    // factors (slow vehicles) do not trip it spuriously.
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if ((M * u - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw RuntimeFailure("control solve residual above tolerance at t=" +
                                 std::to_string(ns.t),
                             ns.t);

    std::vector<ControlInput> out(m);
    for (int i = 0; i < m; ++i) out[i] = {u(2 * i), u(2 * i + 1)};
    return out;
}

}  // namespace navsim
