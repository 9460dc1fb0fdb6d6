#pragma once

#include "rodbif/types.hpp"

namespace rodbif {

/// Energy density g_f at angles u, angle rates xi and force f:
///   c12/2 (xi1 sin u2 + xi3)^2
/// + c13/2 (xi1 cos u2 sin u3 - xi2 cos u3 + k)^2
/// + c23/2 (xi1 cos u2 cos u3 + xi2 sin u3)^2
/// - f cos u2 cos u3
double integrand(const Eigen::Vector3d& u, const Eigen::Vector3d& xi, double f,
                 const ElasticConstants& consts);

/// g_f with all first and second partials; used by the assembly routines.
struct IntegrandDerivs {
    double value;
    Eigen::Vector3d du;     // d g / d u
    Eigen::Vector3d dxi;    // d g / d xi
    Eigen::Matrix3d duu;    // d2 g / du du
    Eigen::Matrix3d dxixi;  // d2 g / dxi dxi
    Eigen::Matrix3d duxi;   // d2 g / du dxi, rows u, cols xi
};

IntegrandDerivs integrand_derivs(const Eigen::Vector3d& u, const Eigen::Vector3d& xi, double f,
                                 const ElasticConstants& consts);

/// Discrete energy of a Cardan path: piecewise-linear angles, 2-point Gauss per element.
double energy_cardan(const CardanPath& path, double f, const ElasticConstants& consts);

/// Discrete energy of a rotation path: strains from the SO(3) logarithm at element
/// midpoints, force term by the trapezoid rule. Matches energy_cardan on G(phi)
/// up to discretization error.
double energy_rotation(const RotationPath& path, double f, const ElasticConstants& consts);

/// Centerline v(t) = int_0^t R(s) e1 ds by the composite trapezoid rule; starts at origin.
Eigen::Matrix3Xd centerline(const RotationPath& path, const ElasticConstants& consts);
Eigen::Matrix3Xd centerline(const CardanPath& path, const ElasticConstants& consts);

/// Principal SO(3) logarithm as a skew matrix; series fallback near the identity.
Eigen::Matrix3d so3_log(const Eigen::Matrix3d& R);

}  // namespace rodbif
