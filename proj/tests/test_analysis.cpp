#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "navsim/analysis.hpp"
#include "navsim/errors.hpp"
#include "navsim/fblin.hpp"
#include "navsim/runner.hpp"

using namespace navsim;

namespace {

// Minimal hand-built log: m vehicles at fixed positions, navigator at origin.
RunLog static_log(int m, const std::vector<Eigen::Vector2d>& pos, int steps = 5) {
    RunLog log;
    log.m = m;
    log.dt = 0.1;
    for (int k = 0; k <= steps; ++k) {
        log.t.push_back(k * log.dt);
        std::vector<VehicleState> row;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * m);
        for (int i = 0; i < m; ++i) {
            row.push_back({pos[i].x(), pos[i].y(), 0, 1, 0, 0});
            z.segment<2>(2 * i) = Eigen::Vector2d::Zero();
        }
        log.states.push_back(row);
        log.nav.push_back({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
        log.z.push_back(z);
        log.u.push_back(Eigen::VectorXd::Zero(2 * m));
        log.eta.push_back(Eigen::VectorXd::Zero(6 * m));
        log.attack_max.push_back(0.0);
        log.trim_switches.push_back(std::vector<int>(m, 0));
    }
    return log;
}

}  // namespace

TEST_CASE("compute_metrics") {
    SUBCASE("everyone on the navigator: all zero") {
        RunLog log = static_log(3, {{0, 0}, {0, 0}, {0, 0}});
        MetricsSeries ms = compute_metrics(log);
        CHECK(ms.e_tilde.cwiseAbs().maxCoeff() == 0.0);
        CHECK(ms.eps_tilde.cwiseAbs().maxCoeff() == 0.0);
        CHECK(ms.eta_norm.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("two vehicles at offsets 3 and 1: e_tilde = 2") {
        RunLog log = static_log(2, {{3, 0}, {0, 1}});
        MetricsSeries ms = compute_metrics(log);
        CHECK(ms.e_tilde(0) == doctest::Approx(2.0));
        CHECK(ms.per_vehicle(0, 0) == doctest::Approx(3.0));
        CHECK(ms.per_vehicle(0, 1) == doctest::Approx(1.0));
        // z is pinned at the origin, so eps_tilde equals e_tilde here.
        CHECK(ms.eps_tilde(0) == doctest::Approx(2.0));
        CHECK(ms.steady_state(ms.e_tilde) == doctest::Approx(2.0));
    }
    SUBCASE("steady state takes the max over the final fraction") {
        RunLog log = static_log(1, {{1, 0}}, 9);
        MetricsSeries ms = compute_metrics(log);
        Eigen::VectorXd ramp = Eigen::VectorXd::LinSpaced(10, 9.0, 0.0);
        CHECK(ms.steady_state(ramp, 0.2) == doctest::Approx(1.0));
        CHECK(ms.steady_state(ramp, 1.0) == doctest::Approx(9.0));
    }
}

TEST_CASE("is_hurwitz") {
    Eigen::Matrix2d stable;
    stable << 0, 1, -2, -3;  // eigenvalues -1, -2
    CHECK(is_hurwitz(stable));
    Eigen::Matrix2d marginal;
    marginal << 0, 1, -1, 0;  // +-i
    CHECK_FALSE(is_hurwitz(marginal));
    CHECK_FALSE(is_hurwitz(Eigen::Matrix2d::Identity()));
    CHECK(is_hurwitz(closed_loop_matrix(gains_from_pole(2.0), 4)));
}

TEST_CASE("lyapunov_solve") {
    SUBCASE("Ac = -I gives P = Q / 2") {
        Eigen::Matrix3d Ac = -Eigen::Matrix3d::Identity();
        Eigen::Matrix3d P = lyapunov_solve(Ac, Eigen::Matrix3d::Identity());
        CHECK((P - 0.5 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("2x2 companion case matches the vectorized Kronecker solve") {
        Eigen::Matrix2d Ac;
        Ac << 0, 1, -2, -3;
        Eigen::Matrix2d Q = Eigen::Matrix2d::Identity();
        Eigen::Matrix2d P = lyapunov_solve(Ac, Q);
        // Independent solve of (I (x) Ac^T + Ac^T (x) I) vec(P) = -vec(Q).
        Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
        Eigen::MatrixXd K = Eigen::kroneckerProduct(I, Ac.transpose()).eval() +
                            Eigen::kroneckerProduct(Ac.transpose(), I).eval();
        Eigen::Vector4d vq{-Q(0, 0), -Q(1, 0), -Q(0, 1), -Q(1, 1)};
        Eigen::Vector4d vp = K.fullPivLu().solve(vq);
        Eigen::Matrix2d Pref;
        Pref << vp(0), vp(2), vp(1), vp(3);
        CHECK((P - Pref).cwiseAbs().maxCoeff() < 1e-10);
        // Residual, symmetry and positivity.
        CHECK((Ac.transpose() * P + P * Ac + Q).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(P(0, 0) > 0.0);
        CHECK(P.determinant() > 0.0);
    }
    SUBCASE("full-size closed-loop solve has a small residual") {
        Eigen::MatrixXd Ac = closed_loop_matrix(gains_from_pole(2.0), 4);
        Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(24, 24);
        Eigen::MatrixXd P = lyapunov_solve(Ac, Q);
        CHECK((Ac.transpose() * P + P * Ac + Q).cwiseAbs().maxCoeff() < 1e-8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
    SUBCASE("non-Hurwitz input is rejected") {
        CHECK_THROWS_AS(lyapunov_solve(Eigen::Matrix2d::Identity(),
                                       Eigen::Matrix2d::Identity()),
                        ConfigError);
    }
}

TEST_CASE("ultimate_bound") {
    Eigen::MatrixXd Ac = closed_loop_matrix(gains_from_pole(2.0), 2);
    auto [A, B] = chain_matrices(2);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(12, 12);
    SUBCASE("no disturbance, no bound") {
        RobustnessCertificate c = ultimate_bound(Ac, B, Q, 1.0, 0.0);
        CHECK(c.eta_bound == 0.0);
        CHECK(c.delta == 0.0);
        CHECK(c.p_min_eig > 0.0);
        CHECK(c.lyap_residual < 1e-9);
    }
    SUBCASE("bound is linear in abar and rho_d") {
        RobustnessCertificate c1 = ultimate_bound(Ac, B, Q, 1.5, 0.5);
        RobustnessCertificate c2 = ultimate_bound(Ac, B, Q, 1.5, 1.0);
        RobustnessCertificate c3 = ultimate_bound(Ac, B, Q, 3.0, 0.5);
        CHECK(c2.eta_bound == doctest::Approx(2.0 * c1.eta_bound));
        CHECK(c3.eta_bound == doctest::Approx(2.0 * c1.eta_bound));
        CHECK(c1.delta == doctest::Approx(c1.eta_bound));  // s_norm = c_eps = 1
    }
    SUBCASE("matches the hand-assembled formula") {
        RobustnessCertificate c = ultimate_bound(Ac, B, Q, 2.0, 0.7, 1.3, 1.1);
        Eigen::MatrixXd P = lyapunov_solve(Ac, Q);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(P * B);
        double expect = 2.0 * svd.singularValues()(0) * 2.0 * 0.7 / 1.0;
        CHECK(c.eta_bound == doctest::Approx(expect));
        CHECK(c.delta == doctest::Approx(1.1 * 1.3 * expect));
    }
}

TEST_CASE("estimate_rho_d on a clean run is tiny") {
    Scenario sc;
    sc.net = CommNetwork::topology(Topology::Star, 2);
    sc.topology_kind = Topology::Star;
    sc.horizon = 2.0;
    sc.dt = 1e-3;
    RunLog log = run_scenario(sc);
    auto [A, B] = chain_matrices(2);
    Eigen::MatrixXd Ac = closed_loop_matrix(sc.controller.gains, 2);
    CHECK(estimate_rho_d(log, Ac, B, 1.0) < 1e-2);
}

TEST_CASE("fit_decay_rate recovers a synthetic exponential") {
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(201, 0.0, 2.0);
    Eigen::VectorXd y = (-1.7 * t.array()).exp() * 3.0;
    CHECK(fit_decay_rate(t, y, 0.2, 1.8) == doctest::Approx(1.7).epsilon(1e-6));
    // Growing series comes back negative.
    Eigen::VectorXd g = (0.5 * t.array()).exp();
    CHECK(fit_decay_rate(t, g, 0.2, 1.8) == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("certificate report mentions the key quantities") {
    Eigen::MatrixXd Ac = closed_loop_matrix(gains_from_pole(2.0), 2);
    auto [A, B] = chain_matrices(2);
    RobustnessCertificate c =
        ultimate_bound(Ac, B, Eigen::MatrixXd::Identity(12, 12), 1.0, 1.0);
    std::string rep = certificate_report(c, 0.5, 0.4);
    CHECK(rep.find("eta bound") != std::string::npos);
    CHECK(rep.find("delta") != std::string::npos);
    CHECK(rep.find("bound satisfied") != std::string::npos);
}
