#pragma once

#include "rodbif/types.hpp"

namespace rodbif {

/// Cardan matrix of an angle triple (alpha, beta, gamma); defined on all of R^3
/// and always orthogonal, but a chart only on (-pi,pi) x (-pi/2,pi/2) x (-pi,pi).
/// No domain check; use cardan_to_rotation for the checked chart map.
Eigen::Matrix3d cardan_matrix(const Eigen::Vector3d& phi);

/// Chart map: angles in (-pi,pi) x (-pi/2,pi/2) x (-pi,pi) to a rotation matrix.
/// Throws ChartError outside the box.
Eigen::Matrix3d cardan_to_rotation(const Eigen::Vector3d& phi);

/// Chart inverse on the neighborhood ||R - I||_max < kChartDelta.
/// Throws ValidationError for non-orthogonal input, ChartError outside the neighborhood.
Eigen::Vector3d rotation_to_cardan(const Eigen::Matrix3d& R);

/// Strain components of G(phi)^T d/dt G(phi) for angles u and angle rates xi:
///   a12 = -xi1 sin(u2) - xi3
///   a13 = -xi1 cos(u2) sin(u3) + xi2 cos(u3)
///   a23 = -xi1 cos(u2) cos(u3) - xi2 sin(u3)
AngularStrain angular_strain(const Eigen::Vector3d& u, const Eigen::Vector3d& xi);

/// Nodewise chart map of a whole path (global matrix formula, clamped ends exact).
RotationPath cardan_path_to_rotation(const CardanPath& path);

}  // namespace rodbif
