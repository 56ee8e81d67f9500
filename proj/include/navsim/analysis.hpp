#pragma once

#include <Eigen/Dense>
#include <string>

#include "navsim/runlog.hpp"

namespace navsim {

MetricsSeries compute_metrics(const RunLog& log);

// All eigenvalue real parts < -tol.
bool is_hurwitz(const Eigen::MatrixXd& M, double tol = 1e-9);

// Unique SPD P with Ac^T P + P Ac = -Q, via complex Schur reduction
// (Bartels-Stewart). Throws ConfigError when Ac is not Hurwitz.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Q);

struct RobustnessCertificate {
    Eigen::MatrixXd P, Q;
    double rho_d = 0.0;
    double abar = 0.0;
    double eta_bound = 0.0;  // 2 ||P B|| rho_d abar / lambda_min(Q)
    double delta = 0.0;      // c_eps ||S|| eta_bound
    double lyap_residual = 0.0;
    double p_min_eig = 0.0;
    double q_min_eig = 0.0;
    bool empirical_rho = true;
};

RobustnessCertificate ultimate_bound(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& B,
                                     const Eigen::MatrixXd& Q, double rho_d, double abar,
                                     double s_norm = 1.0, double c_eps = 1.0);

// Empirical disturbance gain: max_t ||B^+ (etadot - Ac eta)|| / abar, with
// etadot from central differences of the logged eta.
double estimate_rho_d(const RunLog& log, const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& B,
                      double abar);

std::string certificate_report(const RobustnessCertificate& cert, double eta_limsup,
                               double e_tilde_limsup);

// Least-squares slope of log(series) over [t_lo, t_hi]; returns the decay rate
// (positive for decaying series). Samples below `floor` are skipped.
double fit_decay_rate(const Eigen::VectorXd& t, const Eigen::VectorXd& series, double t_lo,
                      double t_hi, double floor = 1e-14);

}  // namespace navsim
