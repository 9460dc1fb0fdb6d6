#pragma once

#include <vector>

#include "rodbif/variational.hpp"

namespace rodbif {

/// Closed-form bifurcation data at the straight state.
struct BifurcationData {
    double lambda0;     ///< critical force (c13*k)^2/c23 - 4*pi^2*c12/L^2
    double kernel_amp;  ///< c13*k*L/(2*c23*pi), first-component amplitude of w*
    double a;           ///< -L/2
    double b;           ///< 0
    double c;           ///< negative pitchfork coefficient, f''(0) along the branch
};

struct Coefficients {
    double a;
    double b;
    double c;
};

/// One point of the amplitude-parametrized branch.
struct BranchPoint {
    double s;
    double f;
    CardanPath path;
    double mu_min;      ///< smallest constrained Hessian eigenvalue at (path, f)
    double energy_gap;  ///< E(path, f) - E(straight, f), negative for s != 0
};

/// Eigenpairs of H x = mu M x, ascending; modes are L2-normalized columns.
struct SpectralResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd modes;
};

/// Critical force (c13*k)^2/c23 - 4*pi^2*c12/L^2; requires the model assumption.
double critical_force(const ElasticConstants& consts);

/// Full closed-form data set (lambda0, kernel amplitude, a, b, c).
BifurcationData bifurcation_data(const ElasticConstants& consts);

/// Kernel direction of the linearized operator at (I, lambda0):
///   w reference*(t) = (amp (1 - cos(2 pi t / L)), 0, -sin(2 pi t / L)).
CardanPath kernel_mode(const ElasticConstants& consts, int n_elems);

/// Analytic kernel mode and its derivative at parameter t.
Eigen::Vector3d kernel_value(const ElasticConstants& consts, double t);
Eigen::Vector3d kernel_derivative(const ElasticConstants& consts, double t);

/// Closed-form coefficients a = -L/2, b = 0 and the pitchfork coefficient c < 0.
Coefficients coefficients_closed(const ElasticConstants& consts);

/// The two algebraically equivalent printed expressions for c.
std::pair<double, double> coefficient_c_forms(const ElasticConstants& consts);

/// Coefficients from derivatives of the weak operator pairing <w*, F(s w*, lambda)>:
/// composite Gauss quadrature of the analytic kernel mode, central differences of
/// step fd_step in the amplitude, exact linearity in the force.
Coefficients coefficients_numeric(const ElasticConstants& consts, int n_elems,
                                  double fd_step = 1e-3);

/// Smallest n_eigs constrained eigenpairs of the Hessian at (path, f) against the
/// consistent L2 mass; dense generalized symmetric solve.
SpectralResult constrained_spectrum(const CardanPath& path, double f,
                                    const ElasticConstants& consts, int n_eigs);

/// Smallest generalized eigenvalue of (H, M) by positive-definiteness bisection.
double smallest_constrained_eigenvalue(const HessianMatrix& H, const MassMatrix& M);

/// Force at which the straight state loses positive definiteness, located by
/// bisection of the smallest identity-Hessian eigenvalue over [bracket_lo, bracket_hi].
double critical_force_numeric(const ElasticConstants& consts, int n_elems, double bracket_lo,
                              double bracket_hi);

struct ContinuationOptions {
    double tol = 1e-10;
    int max_iterations = 50;
    int max_bisections = 8;  ///< sub-step refinements between requested amplitudes
};

/// Follow the pitchfork branch at the requested signed amplitudes. Each point solves
///   gradient(phi, f) = 0,  <phi - s w*, w*>_{L2} = 0
/// for (interior phi, f) by Newton with a predictor from the previous point.
/// Results are sorted by amplitude; s = 0 yields the trivial point (0, lambda0).
std::vector<BranchPoint> continue_branch(const ElasticConstants& consts, int n_elems,
                                         std::vector<double> s_values,
                                         const ContinuationOptions& opts = {});

/// E(path, f) - L (c13 k^2 / 2 - f); the straight-state energy is exact.
double energy_gap(const CardanPath& path, double f, const ElasticConstants& consts);

struct CountOptions {
    int n_elems = 256;
    unsigned rng_seed = 42;
    double tol = 1e-10;
};

/// Distinct stationary points inside the W^{1,2} ball of the given radius around the
/// straight state: Newton from the trivial seed, the two kernel-direction seeds and
/// n_seeds random smooth starts, deduplicated by W^{1,2} distance > 10*tol.
std::vector<CardanPath> count_stationary(const ElasticConstants& consts, double f,
                                         double radius, int n_seeds,
                                         const CountOptions& opts = {});

/// Sign changes of the third Cardan angle across interior nodes (perversion count).
int sign_changes_third_angle(const CardanPath& path);

/// Least-squares fit y = p0 + p1 s + p2 s^2; returns (p0, p1, p2).
Eigen::Vector3d fit_quadratic(const std::vector<double>& s, const std::vector<double>& y);

}  // namespace rodbif
