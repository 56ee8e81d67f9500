#include "navsim/analysis.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "navsim/errors.hpp"

namespace navsim {

double MetricsSeries::steady_state(const Eigen::VectorXd& series, double fraction) const {
    const Eigen::Index n = series.size();
    const Eigen::Index start = static_cast<Eigen::Index>(std::floor((1.0 - fraction) * n));
    return series.segment(start, n - start).maxCoeff();
}

MetricsSeries compute_metrics(const RunLog& log) {
    const int m = log.m;
    const Eigen::Index n = static_cast<Eigen::Index>(log.rows());
    MetricsSeries ms;
    ms.t.resize(n);
    ms.e_tilde.resize(n);
    ms.eps_tilde.resize(n);
    ms.eta_norm.resize(n);
    ms.per_vehicle.resize(n, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        ms.t(k) = log.t[k];
        const Eigen::Vector2d y0 = log.nav[k].y;
        double esum = 0.0, epssum = 0.0;
        for (int i = 0; i < m; ++i) {
            const VehicleState& s = log.states[k][i];
            Eigen::Vector2d yi{s.px, s.py};
            const double ei = (yi - y0).norm();
            ms.per_vehicle(k, i) = ei;
            esum += ei;
            epssum += (yi - log.z[k].segment<2>(2 * i)).norm();
        }
        ms.e_tilde(k) = esum / m;
        ms.eps_tilde(k) = epssum / m;
        ms.eta_norm(k) = log.eta[k].norm();
    }
    return ms;
}

bool is_hurwitz(const Eigen::MatrixXd& M, double tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    return (es.eigenvalues().real().array() < -tol).all();
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Q) {
    const Eigen::Index n = Ac.rows();
    if (Ac.cols() != n || Q.rows() != n || Q.cols() != n)
        throw ConfigError("lyapunov_solve: dimension mismatch");
    if (!is_hurwitz(Ac)) throw ConfigError("lyapunov_solve: Ac is not Hurwitz");

    // Ac = U T U^H  =>  T^H Y + Y T = -U^H Q U with Y = U^H P U. T upper
    // triangular, so column k satisfies (T^H + t_kk I) y_k = c_k - sum_{j<k}
    // t_jk y_j, a lower-triangular solve.
    Eigen::ComplexSchur<Eigen::MatrixXd> schur(Ac);
    const Eigen::MatrixXcd U = schur.matrixU();
    const Eigen::MatrixXcd T = schur.matrixT();
    Eigen::MatrixXcd C = -U.adjoint() * Q.cast<std::complex<double>>() * U;
    Eigen::MatrixXcd Y(n, n);
    Eigen::MatrixXcd TH = T.adjoint();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXcd rhs = C.col(k);
        for (Eigen::Index j = 0; j < k; ++j) rhs -= T(j, k) * Y.col(j);
        Eigen::MatrixXcd L = TH;
        L.diagonal().array() += T(k, k);
        Y.col(k) = L.triangularView<Eigen::Lower>().solve(rhs);
    }
    Eigen::MatrixXd P = (U * Y * U.adjoint()).real();
    P = 0.5 * (P + P.transpose());
    return P;
}

RobustnessCertificate ultimate_bound(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& B,
                                     const Eigen::MatrixXd& Q, double rho_d, double abar,
                                     double s_norm, double c_eps) {
    RobustnessCertificate cert;
    cert.Q = Q;
    cert.P = lyapunov_solve(Ac, Q);
    cert.rho_d = rho_d;
    cert.abar = abar;
    cert.lyap_residual = (Ac.transpose() * cert.P + cert.P * Ac + Q).norm();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(cert.P);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(Q);
    cert.p_min_eig = pe.eigenvalues().minCoeff();
    cert.q_min_eig = qe.eigenvalues().minCoeff();
    if (cert.q_min_eig <= 0.0) throw ConfigError("ultimate_bound: Q is not positive definite");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cert.P * B);
    const double pb_norm = svd.singularValues()(0);
    cert.eta_bound = 2.0 * pb_norm * rho_d * abar / cert.q_min_eig;
    cert.delta = c_eps * s_norm * cert.eta_bound;
    return cert;
}

double estimate_rho_d(const RunLog& log, const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& B,
                      double abar) {
    if (abar <= 0.0) throw ConfigError("estimate_rho_d requires abar > 0");
    const Eigen::Index n = static_cast<Eigen::Index>(log.rows());
    if (n < 3) throw ConfigError("estimate_rho_d requires at least 3 samples");
    double worst = 0.0;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        Eigen::VectorXd etadot = (log.eta[k + 1] - log.eta[k - 1]) / (2.0 * log.dt);
        Eigen::VectorXd resid = etadot - Ac * log.eta[k];
        // B has orthonormal columns, so B^T projects out the input channels.
        worst = std::max(worst, (B.transpose() * resid).norm());
    }
    return worst / abar;
}

std::string certificate_report(const RobustnessCertificate& cert, double eta_limsup,
                               double e_tilde_limsup) {
    std::ostringstream os;
    os << "robustness certificate\n"
       << "  lyapunov residual   : " << cert.lyap_residual << "\n"
       << "  lambda_min(P)       : " << cert.p_min_eig << "\n"
       << "  lambda_min(Q)       : " << cert.q_min_eig << "\n"
       << "  rho_d ("
       << (cert.empirical_rho ? "empirical" : "given") << ")   : " << cert.rho_d << "\n"
       << "  abar                : " << cert.abar << "\n"
       << "  eta bound           : " << cert.eta_bound << "\n"
       << "  delta(abar)         : " << cert.delta << "\n"
       << "  limsup ||eta||      : " << eta_limsup << "\n"
       << "  limsup e_tilde      : " << e_tilde_limsup << "\n"
       << "  bound satisfied     : " << (eta_limsup <= cert.eta_bound ? "yes" : "no") << "\n";
    return os.str();
}

double fit_decay_rate(const Eigen::VectorXd& t, const Eigen::VectorXd& series, double t_lo,
                      double t_hi, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (Eigen::Index k = 0; k < t.size(); ++k) {
        if (t(k) < t_lo || t(k) > t_hi || series(k) < floor) continue;
        const double x = t(k), y = std::log(series(k));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw ConfigError("fit_decay_rate: not enough samples in window");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

}  // namespace navsim
