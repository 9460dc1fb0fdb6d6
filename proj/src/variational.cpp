#include "rodbif/variational.hpp"

#include <vector>

namespace rodbif {

namespace {

constexpr double kGaussA = 0.5 - 0.28867513459481287;
constexpr double kGaussB = 0.5 + 0.28867513459481287;
constexpr double kGaussPts[2] = {kGaussA, kGaussB};

// DOF index of node i (1..N-1), component c; -1 for clamped end nodes.
inline int dof(int node, int comp, int n_elems) {
    if (node <= 0 || node >= n_elems) return -1;
    return 3 * (node - 1) + comp;
}

}  // namespace

GradientVector gradient(const CardanPath& path, double f, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    GradientVector g = GradientVector::Zero(3 * (n - 1));
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        const Eigen::Vector3d xi = (b - a) / h;
        for (double z : kGaussPts) {
            const Eigen::Vector3d u = (1.0 - z) * a + z * b;
            const IntegrandDerivs d = integrand_derivs(u, xi, f, consts);
            const double w = 0.5 * h;
            const double shape[2] = {1.0 - z, z};
            const double dshape[2] = {-1.0 / h, 1.0 / h};
            for (int loc = 0; loc < 2; ++loc) {
                const Eigen::Vector3d contrib = w * (shape[loc] * d.du + dshape[loc] * d.dxi);
                for (int c = 0; c < 3; ++c) {
                    const int j = dof(e + loc, c, n);
                    if (j >= 0) g[j] += contrib[c];
                }
            }
        }
    }
    return g;
}

GradientVector force_gradient(const CardanPath& path, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    GradientVector g = GradientVector::Zero(3 * (n - 1));
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        for (double z : kGaussPts) {
            const Eigen::Vector3d u = (1.0 - z) * a + z * b;
            // d/df of grad_u g; the xi part of the integrand is force-free.
            const Eigen::Vector3d du_f(0.0, std::sin(u[1]) * std::cos(u[2]),
                                       std::cos(u[1]) * std::sin(u[2]));
            const double w = 0.5 * h;
            const double shape[2] = {1.0 - z, z};
            for (int loc = 0; loc < 2; ++loc)
                for (int c = 0; c < 3; ++c) {
                    const int j = dof(e + loc, c, n);
                    if (j >= 0) g[j] += w * shape[loc] * du_f[c];
                }
        }
    }
    return g;
}

HessianMatrix hessian(const CardanPath& path, double f, const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    const double h = consts.L / n;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(36 * n));
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        const Eigen::Vector3d xi = (b - a) / h;
        for (double z : kGaussPts) {
            const Eigen::Vector3d u = (1.0 - z) * a + z * b;
            const IntegrandDerivs d = integrand_derivs(u, xi, f, consts);
            const double w = 0.5 * h;
            const double shape[2] = {1.0 - z, z};
            const double dshape[2] = {-1.0 / h, 1.0 / h};
            for (int la = 0; la < 2; ++la)
                for (int lb = 0; lb < 2; ++lb) {
                    const Eigen::Matrix3d block =
                        w * (shape[la] * shape[lb] * d.duu +
                             shape[la] * dshape[lb] * d.duxi +
                             dshape[la] * shape[lb] * d.duxi.transpose() +
                             dshape[la] * dshape[lb] * d.dxixi);
                    for (int ca = 0; ca < 3; ++ca)
                        for (int cb = 0; cb < 3; ++cb) {
                            const int i = dof(e + la, ca, n);
                            const int j = dof(e + lb, cb, n);
                            if (i >= 0 && j >= 0) trips.emplace_back(i, j, block(ca, cb));
                        }
                }
        }
    }
    HessianMatrix H(3 * (n - 1), 3 * (n - 1));
    H.setFromTriplets(trips.begin(), trips.end());
    HessianMatrix Ht = H.transpose();
    H = 0.5 * (H + Ht);
    return H;
}

MassMatrix mass_matrix(int n_elems, const ElasticConstants& consts) {
    const double h = consts.L / n_elems;
    const double diag = 2.0 * h / 3.0, off = h / 6.0;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 1; i < n_elems; ++i)
        for (int c = 0; c < 3; ++c) {
            trips.emplace_back(dof(i, c, n_elems), dof(i, c, n_elems), diag);
            if (i + 1 < n_elems) {
                trips.emplace_back(dof(i, c, n_elems), dof(i + 1, c, n_elems), off);
                trips.emplace_back(dof(i + 1, c, n_elems), dof(i, c, n_elems), off);
            }
        }
    MassMatrix M(3 * (n_elems - 1), 3 * (n_elems - 1));
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

Eigen::SparseMatrix<double> stiffness_matrix(int n_elems, const ElasticConstants& consts) {
    const double h = consts.L / n_elems;
    const double diag = 2.0 / h, off = -1.0 / h;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 1; i < n_elems; ++i)
        for (int c = 0; c < 3; ++c) {
            trips.emplace_back(dof(i, c, n_elems), dof(i, c, n_elems), diag);
            if (i + 1 < n_elems) {
                trips.emplace_back(dof(i, c, n_elems), dof(i + 1, c, n_elems), off);
                trips.emplace_back(dof(i + 1, c, n_elems), dof(i, c, n_elems), off);
            }
        }
    Eigen::SparseMatrix<double> K(3 * (n_elems - 1), 3 * (n_elems - 1));
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

double w12_norm(const CardanPath& path, const ElasticConstants& consts) {
    const int n = path.n_elems();
    const double h = consts.L / n;
    double l2 = 0.0, grad = 0.0;
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d a = path.values.col(e);
        const Eigen::Vector3d b = path.values.col(e + 1);
        l2 += 0.5 * h * (a.squaredNorm() + b.squaredNorm());
        grad += ((b - a) / h).squaredNorm() * h;
    }
    return std::sqrt(l2 + grad);
}

double w12_distance(const CardanPath& a, const CardanPath& b, const ElasticConstants& consts) {
    if (a.values.cols() != b.values.cols())
        throw ValidationError("w12_distance: paths have different grids");
    CardanPath diff = a;
    diff.values -= b.values;
    const int n = diff.n_elems();
    const double h = consts.L / n;
    double l2 = 0.0, grad = 0.0;
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d u = diff.values.col(e);
        const Eigen::Vector3d v = diff.values.col(e + 1);
        l2 += 0.5 * h * (u.squaredNorm() + v.squaredNorm());
        grad += ((v - u) / h).squaredNorm() * h;
    }
    return std::sqrt(l2 + grad);
}

Eigen::Matrix3Xd el_residual_strong(const CardanPath& path, double f,
                                    const ElasticConstants& consts) {
    path.validate();
    const int n = path.n_elems();
    if (n < 8) throw ValidationError("el_residual_strong needs N >= 8");
    const double h = consts.L / n;

    // grad_xi g at element midpoints (midpoint angles, difference-quotient rates);
    // every element uses the same stencil, so the error field stays smooth and the
    // node-centered difference below is second order up to the boundary.
    Eigen::Matrix3Xd q(3, n);
    for (int e = 0; e < n; ++e) {
        const Eigen::Vector3d u = 0.5 * (path.values.col(e) + path.values.col(e + 1));
        const Eigen::Vector3d xi = (path.values.col(e + 1) - path.values.col(e)) / h;
        q.col(e) = integrand_derivs(u, xi, f, consts).dxi;
    }

    Eigen::Matrix3Xd res(3, n - 1);
    for (int i = 1; i < n; ++i) {
        const Eigen::Vector3d xi_node =
            (path.values.col(i + 1) - path.values.col(i - 1)) / (2.0 * h);
        const IntegrandDerivs d = integrand_derivs(path.values.col(i), xi_node, f, consts);
        res.col(i - 1) = (q.col(i) - q.col(i - 1)) / h - d.du;
    }
    return res;
}

HessianMatrix linearized_identity(double f, int n_elems, const ElasticConstants& consts) {
    if (n_elems < 8) throw ValidationError("linearized_identity needs N >= 8");
    const double h = consts.L / n_elems;
    const Eigen::Vector3d C = consts.stiffness_diag();
    const double ck = consts.c13 * consts.k;

    // Exact element matrices for P1 hats: stiffness, mass, and int N_a N_b' dt.
    const double Ke[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    const double Me[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    const double De[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(20 * n_elems));
    for (int e = 0; e < n_elems; ++e)
        for (int la = 0; la < 2; ++la)
            for (int lb = 0; lb < 2; ++lb) {
                const int na = e + la, nb = e + lb;
                for (int c = 0; c < 3; ++c) {
                    const int i = dof(na, c, n_elems);
                    const int j = dof(nb, c, n_elems);
                    if (i < 0 || j < 0) continue;
                    double v = C[c] * Ke[la][lb];
                    if (c != 0) v += f * Me[la][lb];
                    trips.emplace_back(i, j, v);
                }
                // c13*k*(w1' v3 - w3' v1): rows are the test function v.
                const int i3 = dof(na, 2, n_elems), j1 = dof(nb, 0, n_elems);
                if (i3 >= 0 && j1 >= 0) trips.emplace_back(i3, j1, ck * De[la][lb]);
                const int i1 = dof(na, 0, n_elems), j3 = dof(nb, 2, n_elems);
                if (i1 >= 0 && j3 >= 0) trips.emplace_back(i1, j3, -ck * De[la][lb]);
            }

    HessianMatrix H(3 * (n_elems - 1), 3 * (n_elems - 1));
    H.setFromTriplets(trips.begin(), trips.end());
    HessianMatrix Ht = H.transpose();
    H = 0.5 * (H + Ht);
    return H;
}

}  // namespace rodbif
