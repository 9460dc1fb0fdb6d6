#include "rodbif/cardan.hpp"

namespace rodbif {

Eigen::Matrix3d cardan_matrix(const Eigen::Vector3d& phi) {
    const double sa = std::sin(phi[0]), ca = std::cos(phi[0]);
    const double sb = std::sin(phi[1]), cb = std::cos(phi[1]);
    const double sg = std::sin(phi[2]), cg = std::cos(phi[2]);
    Eigen::Matrix3d R;
    R << cb * cg, -cb * sg, sb,
        sa * sb * cg + ca * sg, ca * cg - sa * sb * sg, -sa * cb,
        sa * sg - ca * sb * cg, sa * cg + ca * sb * sg, ca * cb;
    return R;
}

Eigen::Matrix3d cardan_to_rotation(const Eigen::Vector3d& phi) {
    if (std::abs(phi[1]) >= M_PI / 2.0)
        throw ChartError("cardan_to_rotation: |phi2| must be below pi/2");
    if (std::abs(phi[0]) >= M_PI || std::abs(phi[2]) >= M_PI)
        throw ChartError("cardan_to_rotation: |phi1|, |phi3| must be below pi");
    return cardan_matrix(phi);
}

Eigen::Vector3d rotation_to_cardan(const Eigen::Matrix3d& R) {
    const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
    if ((R.transpose() * R - I).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("rotation_to_cardan: input is not orthogonal to 1e-10");
    if (R.determinant() <= 0.0)
        throw ValidationError("rotation_to_cardan: input has non-positive determinant");
    if ((R - I).cwiseAbs().maxCoeff() >= kChartDelta)
        throw ChartError("rotation_to_cardan: rotation outside the chart neighborhood of I");
    // Entries of the Cardan matrix: R(0,2) = sin(beta), first row carries gamma,
    // last column carries alpha; cos(beta) > 0 on the chart neighborhood.
    Eigen::Vector3d phi;
    phi[1] = std::asin(std::clamp(R(0, 2), -1.0, 1.0));
    phi[2] = std::atan2(-R(0, 1), R(0, 0));
    phi[0] = std::atan2(-R(1, 2), R(2, 2));
    return phi;
}

AngularStrain angular_strain(const Eigen::Vector3d& u, const Eigen::Vector3d& xi) {
    const double s2 = std::sin(u[1]), c2 = std::cos(u[1]);
    const double s3 = std::sin(u[2]), c3 = std::cos(u[2]);
    AngularStrain s;
    s.a12 = -xi[0] * s2 - xi[2];
    s.a13 = -xi[0] * c2 * s3 + xi[1] * c3;
    s.a23 = -xi[0] * c2 * c3 - xi[1] * s3;
    return s;
}

RotationPath cardan_path_to_rotation(const CardanPath& path) {
    path.validate();
    RotationPath rp;
    rp.frames.reserve(path.values.cols());
    for (Eigen::Index i = 0; i < path.values.cols(); ++i)
        rp.frames.push_back(cardan_matrix(path.values.col(i)));
    // Clamped path ends are exactly zero, so the end frames are exactly I.
    return rp;
}

}  // namespace rodbif
