#include "rodbif/energy.hpp"

#include "rodbif/cardan.hpp"

namespace rodbif {

namespace {

// 2-point Gauss on the unit interval.
constexpr double kGaussA = 0.5 - 0.28867513459481287;  // 1/(2*sqrt(3))
constexpr double kGaussB = 0.5 + 0.28867513459481287;
constexpr double kGaussPts[2] = {kGaussA, kGaussB};

}  // namespace

double integrand(const Eigen::Vector3d& u, const Eigen::Vector3d& xi, double f,
                 const ElasticConstants& consts) {
    const double s2 = std::sin(u[1]), c2 = std::cos(u[1]);
    const double s3 = std::sin(u[2]), c3 = std::cos(u[2]);
    const double A12 = xi[0] * s2 + xi[2];
    const double A13 = xi[0] * c2 * s3 - xi[1] * c3 + consts.k;
    const double A23 = xi[0] * c2 * c3 + xi[1] * s3;
    return 0.5 * (consts.c12 * A12 * A12 + consts.c13 * A13 * A13 + consts.c23 * A23 * A23) -
           f * c2 * c3;
}

IntegrandDerivs integrand_derivs(const Eigen::Vector3d& u, const Eigen::Vector3d& xi, double f,
                                 const ElasticConstants& consts) {
    const double s2 = std::sin(u[1]), c2 = std::cos(u[1]);
    const double s3 = std::sin(u[2]), c3 = std::cos(u[2]);

    // The three squared strains are linear in xi with u-dependent coefficients.
    const double A12 = xi[0] * s2 + xi[2];
    const double A13 = xi[0] * c2 * s3 - xi[1] * c3 + consts.k;
    const double A23 = xi[0] * c2 * c3 + xi[1] * s3;

    const Eigen::Vector3d p(s2, 0.0, 1.0);            // d A12 / d xi
    const Eigen::Vector3d q(c2 * s3, -c3, 0.0);       // d A13 / d xi
    const Eigen::Vector3d r(c2 * c3, s3, 0.0);        // d A23 / d xi

    const Eigen::Vector3d gu12(0.0, xi[0] * c2, 0.0);
    const Eigen::Vector3d gu13(0.0, -xi[0] * s2 * s3, xi[0] * c2 * c3 + xi[1] * s3);
    const Eigen::Vector3d gu23(0.0, -xi[0] * s2 * c3, -xi[0] * c2 * s3 + xi[1] * c3);

    IntegrandDerivs d;
    d.value = 0.5 * (consts.c12 * A12 * A12 + consts.c13 * A13 * A13 + consts.c23 * A23 * A23) -
              f * c2 * c3;

    d.dxi = consts.c12 * A12 * p + consts.c13 * A13 * q + consts.c23 * A23 * r;
    d.du = consts.c12 * A12 * gu12 + consts.c13 * A13 * gu13 + consts.c23 * A23 * gu23;
    d.du[1] += f * s2 * c3;
    d.du[2] += f * c2 * s3;

    d.dxixi = consts.c12 * p * p.transpose() + consts.c13 * q * q.transpose() +
              consts.c23 * r * r.transpose();

    // d2 A / du dxi (rows u, cols xi); only u2/u3 rows are nonzero.
    Eigen::Matrix3d h12 = Eigen::Matrix3d::Zero();
    h12(1, 0) = c2;
    Eigen::Matrix3d h13 = Eigen::Matrix3d::Zero();
    h13(1, 0) = -s2 * s3;
    h13(2, 0) = c2 * c3;
    h13(2, 1) = s3;
    Eigen::Matrix3d h23 = Eigen::Matrix3d::Zero();
    h23(1, 0) = -s2 * c3;
    h23(2, 0) = -c2 * s3;
    h23(2, 1) = c3;

    d.duxi = consts.c12 * (gu12 * p.transpose() + A12 * h12) +
             consts.c13 * (gu13 * q.transpose() + A13 * h13) +
             consts.c23 * (gu23 * r.transpose() + A23 * h23);

    // d2 A / du du; symmetric, nonzero only in the (u2,u3) block.
    Eigen::Matrix3d H12 = Eigen::Matrix3d::Zero();
    H12(1, 1) = -s2 * xi[0];
    Eigen::Matrix3d H13 = Eigen::Matrix3d::Zero();
    H13(1, 1) = -c2 * s3 * xi[0];
    H13(1, 2) = -s2 * c3 * xi[0];
    H13(2, 1) = H13(1, 2);
    H13(2, 2) = -c2 * s3 * xi[0] + c3 * xi[1];
    Eigen::Matrix3d H23 = Eigen::Matrix3d::Zero();
    H23(1, 1) = -c2 * c3 * xi[0];
    H23(1, 2) = s2 * s3 * xi[0];
    H23(2, 1) = H23(1, 2);
    H23(2, 2) = -c2 * c3 * xi[0] - s3 * xi[1];

    d.duu = consts.c12 * (gu12 * gu12.transpose() + A12 * H12) +
            consts.c13 * (gu13 * gu13.transpose() + A13 * H13) +
            consts.c23 * (gu23 * gu23.transpose() + A23 * H23);
    d.duu(1, 1) += f * c2 * c3;
    d.duu(1, 2) += -f * s2 * s3;
    d.duu(2, 1) += -f * s2 * s3;
    d.duu(2, 2) += f * c2 * c3;

    return d;
}

double energy_cardan(const CardanPath& path, double f, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    double energy = 0.0;
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        const Eigen::Vector3d xi = (b - a) / h;
        for (double z : kGaussPts) {
            const Eigen::Vector3d u = (1.0 - z) * a + z * b;
            energy += 0.5 * h * integrand(u, xi, f, consts);
        }
    }
    return energy;
}

Eigen::Matrix3d so3_log(const Eigen::Matrix3d& R) {
    const double tr = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
    const double theta = std::acos(tr);
    const Eigen::Matrix3d S = 0.5 * (R - R.transpose());
    if (theta < 1e-4) {
        // theta/sin(theta) = 1 + theta^2/6 + 7 theta^4/360 + ...
        const double t2 = theta * theta;
        return S * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
    }
    return S * (theta / std::sin(theta));
}

double energy_rotation(const RotationPath& path, double f, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    double energy = 0.0;
    for (int e = 0; e < n; ++e) {
        const Eigen::Matrix3d& R0 = path.frames[e];
        const Eigen::Matrix3d& R1 = path.frames[e + 1];
        const Eigen::Matrix3d A = so3_log(R0.transpose() * R1) / h;
        const double a12 = A(0, 1), a13 = A(0, 2), a23 = A(1, 2);
        const double bend = 0.5 * (consts.c12 * a12 * a12 +
                                   consts.c13 * (a13 - consts.k) * (a13 - consts.k) +
                                   consts.c23 * a23 * a23);
        const double load = -f * 0.5 * (R0(0, 0) + R1(0, 0));
        energy += h * (bend + load);
    }
    return energy;
}

Eigen::Matrix3Xd centerline(const RotationPath& path, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    Eigen::Matrix3Xd pts(3, n + 1);
    pts.col(0).setZero();
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d d1 = path.frames[i].col(0);
        const Eigen::Vector3d d2 = path.frames[i + 1].col(0);
        pts.col(i + 1) = pts.col(i) + 0.5 * h * (d1 + d2);
    }
    return pts;
}

Eigen::Matrix3Xd centerline(const CardanPath& path, const ElasticConstants& consts) {
    return centerline(cardan_path_to_rotation(path), consts);
}

}  // namespace rodbif
