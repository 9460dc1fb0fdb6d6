#pragma once

#include <random>
#include <vector>

#include "rodbif/bifurcation.hpp"
#include "rodbif/cardan.hpp"
#include "rodbif/energy.hpp"

namespace testutil {

using namespace rodbif;

inline ElasticConstants toy_constants() { return {1.0, 1.0, 1.0, 2.0, 2.0 * M_PI}; }
inline ElasticConstants figure_constants() { return {4.0848, 0.0065, 0.0087, 375.0, 1.0}; }
// Supercritical set sized so the nontrivial pair fits inside a 0.1 ball (see tests).
inline ElasticConstants count_constants() { return {0.01, 10.0, 1.0, 0.025, 2.0 * M_PI}; }

/// Random clamped path from the first few Fourier sine modes; stays smooth and
/// inside the chart for small amplitudes.
inline CardanPath random_path(int n_elems, const ElasticConstants& consts, double amplitude,
                              std::mt19937& rng, int n_modes = 5) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CardanPath p = CardanPath::zero(n_elems);
    Eigen::MatrixXd coeff(3, n_modes);
    for (int c = 0; c < 3; ++c)
        for (int mn = 0; mn < n_modes; ++mn) coeff(c, mn) = U(rng);
    for (int i = 1; i < n_elems; ++i) {
        const double t = consts.L * i / n_elems;
        for (int c = 0; c < 3; ++c) {
            double v = 0.0;
            for (int mn = 0; mn < n_modes; ++mn)
                v += coeff(c, mn) * std::sin((mn + 1) * M_PI * t / consts.L);
            p.values(c, i) = v;
        }
    }
    const double mx = p.values.cwiseAbs().maxCoeff();
    if (mx > 0.0) p.values *= amplitude / mx;
    return p;
}

/// Least-squares slope of log|err| against log n; expects err ~ C n^slope.
inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& err) {
    const size_t m = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double x = std::log(n[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// High-order quadrature oracle for the energy of the piecewise-linear path:
/// same integrand, same P1 interpolation, 10-point Gauss per element instead
/// of the library's 2-point rule.
inline double energy_oracle_gauss10(const CardanPath& path, double f,
                                    const ElasticConstants& consts) {
    static const double pts[5] = {0.1488743389816312, 0.4333953941292472,
                                  0.6794095682990244, 0.8650633666889845,
                                  0.9739065285171717};
    static const double wts[5] = {0.2955242247147529, 0.2692667193099963,
                                  0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};
    const int n = path.n_elems();
    const double h = consts.L / n;
    double energy = 0.0;
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        const Eigen::Vector3d xi = (b - a) / h;
        for (int q = 0; q < 5; ++q)
            for (double sgn : {-1.0, 1.0}) {
                const double z = 0.5 + 0.5 * sgn * pts[q];
                const Eigen::Vector3d u = (1.0 - z) * a + z * b;
                energy += 0.5 * h * wts[q] * integrand(u, xi, f, consts);
            }
    }
    return energy;
}

/// Independent evaluation of the defining integral for the cubic coefficient,
///   -<w*, D^3F(0,lambda0)[w*,w*,w*]> / (3a),
/// via the quartic term of the energy restricted to the kernel direction:
/// c_def = -(3 (c13-c23) kappa^2 + (c13 k)^2/c23 - lambda0/4), kappa = c13 k / c23.
/// This is what the finite-difference procedure of coefficients_numeric converges
/// to; it differs from the printed closed form (see the branch-curvature tests).
inline double c_defining_integral(const ElasticConstants& c) {
    const double kappa = c.c13 * c.k / c.c23;
    const double kap1 = c.c13 * c.k * c.c13 * c.k / c.c23;
    const double lambda0 = critical_force(c);
    return -(3.0 * (c.c13 - c.c23) * kappa * kappa + kap1 - lambda0 / 4.0);
}

/// True branch curvature f''(0): the defining integral plus the second-order
/// Lyapunov-Schmidt correction from the nonzero second component of
/// D^2F(0,lambda0)[w*,w*] (response z2 = Z sin(2 w t) e2). Verified against this
/// library's continuation and an independent BVP solver on three constant sets.
inline double branch_curvature(const ElasticConstants& c) {
    const double kappa = c.c13 * c.k / c.c23;
    const double omega = 2.0 * M_PI / c.L;
    const double lambda0 = critical_force(c);
    const double gamma = c.c13 * c.k + (2.0 * (c.c13 - c.c23) + c.c12) * kappa;
    const double correction =
        gamma * gamma * omega * omega / (4.0 * c.c13 * omega * omega + lambda0);
    return c_defining_integral(c) + correction;
}

}  // namespace testutil
