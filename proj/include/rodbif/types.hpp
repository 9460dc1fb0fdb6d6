#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodbif {

/// Input failed basic validation (bad constants, malformed path, non-orthogonal frame).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument left the Cardan chart domain (gimbal margin or chart box).
struct ChartError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The model assumption (c13*k)^2/c23 - 4*pi^2*c12/L^2 > 0 is violated;
/// bifurcation quantities are meaningless without it.
struct AssumptionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A numerical procedure failed (solver divergence, eigensolver breakdown, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Branch continuation failed; carries the last amplitude that still converged.
struct ContinuationError : NumericalError {
    ContinuationError(const std::string& what, double last_good)
        : NumericalError(what), last_good_s(last_good) {}
    double last_good_s;
};

/// Gimbal margin: nodal angles must satisfy |phi2| < pi/2 - kChartMargin.
inline constexpr double kChartMargin = 1e-3;

/// Neighborhood of I (max-abs entry norm of R - I) on which the chart inverse is taken.
inline constexpr double kChartDelta = 0.5;

/// Elastic parameters of the rod: stiffnesses c12, c13, c23, intrinsic
/// curvature k and length L. The stiffness diagonal is C = diag(c23, c13, c12).
struct ElasticConstants {
    double c12;
    double c13;
    double c23;
    double k;
    double L;

    ElasticConstants(double c12_, double c13_, double c23_, double k_, double L_)
        : c12(c12_), c13(c13_), c23(c23_), k(k_), L(L_) {
        validate();
    }

    void validate() const {
        if (!(c12 > 0.0) || !std::isfinite(c12)) throw ValidationError("c12 must be positive");
        if (!(c13 > 0.0) || !std::isfinite(c13)) throw ValidationError("c13 must be positive");
        if (!(c23 > 0.0) || !std::isfinite(c23)) throw ValidationError("c23 must be positive");
        if (!std::isfinite(k)) throw ValidationError("k must be finite");
        if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("L must be positive");
    }

    Eigen::Vector3d stiffness_diag() const { return {c23, c13, c12}; }

    /// True iff (c13*k)^2/c23 - 4*pi^2*c12/L^2 > 0 (positive critical force).
    bool ass0_holds() const {
        const double ck = c13 * k;
        return ck * ck / c23 - 4.0 * M_PI * M_PI * c12 / (L * L) > 0.0;
    }

    void require_ass0() const {
        if (!ass0_holds())
            throw AssumptionError(
                "(c13*k)^2/c23 - 4*pi^2*c12/L^2 must be positive for bifurcation analysis");
    }
};

/// Clamped, uniformly discretized curve of Cardan angles. Column i holds the
/// angle triple at node t_i = i*L/N; both end columns are identically zero.
struct CardanPath {
    Eigen::Matrix3Xd values;  // 3 x (N+1)

    CardanPath() = default;
    explicit CardanPath(Eigen::Matrix3Xd vals) : values(std::move(vals)) { validate(); }

    static CardanPath zero(int n_elems) {
        CardanPath p;
        p.values = Eigen::Matrix3Xd::Zero(3, n_elems + 1);
        return p;
    }

    int n_elems() const { return static_cast<int>(values.cols()) - 1; }
    int n_interior() const { return n_elems() - 1; }

    /// Clamped ends, N >= 4, and every node inside the gimbal margin.
    void validate() const {
        if (values.cols() < 5) throw ValidationError("CardanPath needs at least 4 elements");
        if (values.col(0).cwiseAbs().maxCoeff() != 0.0 ||
            values.col(values.cols() - 1).cwiseAbs().maxCoeff() != 0.0)
            throw ValidationError("CardanPath must be clamped: phi(0) = phi(L) = 0");
        if (!values.allFinite()) throw ValidationError("CardanPath has non-finite entries");
        for (Eigen::Index i = 0; i < values.cols(); ++i)
            if (std::abs(values(1, i)) >= M_PI / 2.0 - kChartMargin)
                throw ChartError("CardanPath node outside the gimbal margin |phi2| < pi/2 - 1e-3");
    }

    /// Interior nodal values flattened node-major, size 3*(N-1).
    Eigen::VectorXd interior() const {
        const int m = n_interior();
        Eigen::VectorXd v(3 * m);
        for (int i = 0; i < m; ++i) v.segment<3>(3 * i) = values.col(i + 1);
        return v;
    }

    /// Rebuild a clamped path from flattened interior values.
    static CardanPath from_interior(const Eigen::VectorXd& v, int n_elems) {
        if (v.size() != 3 * (n_elems - 1))
            throw ValidationError("interior vector size does not match n_elems");
        CardanPath p = zero(n_elems);
        for (int i = 0; i + 1 < n_elems; ++i) p.values.col(i + 1) = v.segment<3>(3 * i);
        return p;
    }
};

/// Discretized SO(3)-valued curve with clamped ends R(0) = R(L) = I.
struct RotationPath {
    std::vector<Eigen::Matrix3d> frames;

    RotationPath() = default;
    explicit RotationPath(std::vector<Eigen::Matrix3d> f) : frames(std::move(f)) { validate(); }

    int n_elems() const { return static_cast<int>(frames.size()) - 1; }

    void validate() const {
        if (frames.size() < 5) throw ValidationError("RotationPath needs at least 4 elements");
        const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
        for (const auto& R : frames) {
            if ((R.transpose() * R - I).cwiseAbs().maxCoeff() > 1e-10)
                throw ValidationError("RotationPath frame is not orthogonal to 1e-10");
            if (R.determinant() <= 0.0)
                throw ValidationError("RotationPath frame has non-positive determinant");
        }
        if ((frames.front() - I).cwiseAbs().maxCoeff() > 1e-10 ||
            (frames.back() - I).cwiseAbs().maxCoeff() > 1e-10)
            throw ValidationError("RotationPath must be clamped: R(0) = R(L) = I");
    }
};

/// Angular strain components of the frame A = R^T R' at one quadrature point.
struct AngularStrain {
    double a12;
    double a13;
    double a23;
};

/// Reflection (phi1, phi2, phi3) -> (-phi1, phi2, -phi3); leaves the energy invariant.
inline CardanPath sigma_reflect(const CardanPath& path) {
    CardanPath out = path;
    out.values.row(0) = -out.values.row(0);
    out.values.row(2) = -out.values.row(2);
    return out;
}

}  // namespace rodbif
