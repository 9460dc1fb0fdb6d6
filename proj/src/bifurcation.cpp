#include "rodbif/bifurcation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <map>
#include <random>

#include "rodbif/solver.hpp"

namespace rodbif {

namespace {

constexpr double kGaussA = 0.5 - 0.28867513459481287;
constexpr double kGaussB = 0.5 + 0.28867513459481287;
constexpr double kGaussPts[2] = {kGaussA, kGaussB};

bool is_positive_definite(const Eigen::SparseMatrix<double>& A) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
    return llt.info() == Eigen::Success;
}

}  // namespace

double critical_force(const ElasticConstants& consts) {
    consts.require_ass0();
    const double ck = consts.c13 * consts.k;
    return ck * ck / consts.c23 - 4.0 * M_PI * M_PI * consts.c12 / (consts.L * consts.L);
}

BifurcationData bifurcation_data(const ElasticConstants& consts) {
    BifurcationData d;
    d.lambda0 = critical_force(consts);
    d.kernel_amp = consts.c13 * consts.k * consts.L / (2.0 * consts.c23 * M_PI);
    const Coefficients co = coefficients_closed(consts);
    d.a = co.a;
    d.b = co.b;
    d.c = co.c;
    return d;
}

Eigen::Vector3d kernel_value(const ElasticConstants& consts, double t) {
    const double amp = consts.c13 * consts.k * consts.L / (2.0 * consts.c23 * M_PI);
    const double w = 2.0 * M_PI / consts.L;
    return {amp * (1.0 - std::cos(w * t)), 0.0, -std::sin(w * t)};
}

Eigen::Vector3d kernel_derivative(const ElasticConstants& consts, double t) {
    const double amp = consts.c13 * consts.k * consts.L / (2.0 * consts.c23 * M_PI);
    const double w = 2.0 * M_PI / consts.L;
    return {amp * w * std::sin(w * t), 0.0, -w * std::cos(w * t)};
}

CardanPath kernel_mode(const ElasticConstants& consts, int n_elems) {
    consts.require_ass0();
    CardanPath p = CardanPath::zero(n_elems);
    const double h = consts.L / n_elems;
    for (int i = 1; i < n_elems; ++i) p.values.col(i) = kernel_value(consts, i * h);
    // Ends are exactly zero by clamping; sin(2*pi) would leave roundoff otherwise.
    return p;
}

Coefficients coefficients_closed(const ElasticConstants& consts) {
    consts.require_ass0();
    const double ck2 = consts.c13 * consts.k * consts.c13 * consts.k;
    Coefficients co;
    co.a = -consts.L / 2.0;
    co.b = 0.0;
    co.c = -((3.0 * consts.c13 + 1.25 * consts.c23) * ck2 / (consts.c23 * consts.c23) +
             M_PI * M_PI * consts.c12 / (consts.L * consts.L));
    return co;
}

std::pair<double, double> coefficient_c_forms(const ElasticConstants& consts) {
    const double lambda0 = critical_force(consts);
    const double ck2 = consts.c13 * consts.k * consts.c13 * consts.k;
    const double form1 = -(3.0 * (consts.c13 - consts.c23) * ck2 / (consts.c23 * consts.c23) +
                           9.0 * ck2 / (2.0 * consts.c23) - lambda0 / 4.0);
    const double form2 = coefficients_closed(consts).c;
    return {form1, form2};
}

namespace {

// Weak pairing <w*, F(s w*, lambda)> = -int grad_u g . w* + grad_xi g . w*' dt,
// composite 2-point Gauss with the analytic kernel mode at the quadrature points.
double kernel_pairing(const ElasticConstants& consts, int n_elems, double s, double lambda) {
    const double h = consts.L / n_elems;
    double acc = 0.0;
    for (int e = 0; e < n_elems; ++e)
        for (double z : kGaussPts) {
            const double t = (e + z) * h;
            const Eigen::Vector3d w = kernel_value(consts, t);
            const Eigen::Vector3d wd = kernel_derivative(consts, t);
            const IntegrandDerivs d = integrand_derivs(s * w, s * wd, lambda, consts);
            acc += 0.5 * h * (d.du.dot(w) + d.dxi.dot(wd));
        }
    return -acc;
}

}  // namespace

Coefficients coefficients_numeric(const ElasticConstants& consts, int n_elems, double fd_step) {
    consts.require_ass0();
    if (n_elems < 64) throw ValidationError("coefficients_numeric needs N >= 64");
    if (!(fd_step > 0.0)) throw ValidationError("coefficients_numeric needs a positive step");
    const double lambda0 = critical_force(consts);
    const double eps = fd_step;
    const double dl = std::max(1.0, 0.1 * std::abs(lambda0));

    const auto A = [&](double s, double lambda) {
        return kernel_pairing(consts, n_elems, s, lambda);
    };

    Coefficients co;
    // a = d/dlambda d/ds <w*, F(s w*, lambda)> at (0, lambda0); exact in lambda.
    co.a = (A(eps, lambda0 + dl) - A(-eps, lambda0 + dl) - A(eps, lambda0 - dl) +
            A(-eps, lambda0 - dl)) /
           (2.0 * eps * 2.0 * dl);
    // b = (1/2) G''(0) with G(s) = <w*, F(s w*, lambda0)>, G(0) = 0.
    co.b = (A(eps, lambda0) + A(-eps, lambda0)) / (2.0 * eps * eps);
    // c = -G'''(0) / (3 a).
    const double g3 = (A(2.0 * eps, lambda0) - 2.0 * A(eps, lambda0) + 2.0 * A(-eps, lambda0) -
                       A(-2.0 * eps, lambda0)) /
                      (2.0 * eps * eps * eps);
    co.c = -g3 / (3.0 * co.a);
    return co;
}

SpectralResult constrained_spectrum(const CardanPath& path, double f,
                                    const ElasticConstants& consts, int n_eigs) {
    path.validate();
    const int m = 3 * path.n_interior();
    if (n_eigs < 1 || n_eigs > m)
        throw ValidationError("constrained_spectrum: n_eigs out of range");
    const HessianMatrix H = hessian(path, f, consts);
    const MassMatrix M = mass_matrix(path.n_elems(), consts);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        Eigen::MatrixXd(H), Eigen::MatrixXd(M),
        Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw NumericalError("constrained_spectrum: generalized eigensolver failed (info=" +
                             std::to_string(solver.info()) + ")");

    SpectralResult res;
    res.eigenvalues = solver.eigenvalues().head(n_eigs);
    res.modes = solver.eigenvectors().leftCols(n_eigs);
    // Eigen returns B-normalized vectors; these are exactly the L2-normalized modes.
    for (int j = 0; j < n_eigs; ++j) {
        const Eigen::VectorXd x = res.modes.col(j);
        const double resid = (H * x - res.eigenvalues[j] * (M * x)).norm();
        if (resid > 1e-8 * x.norm())
            throw NumericalError("constrained_spectrum: eigenpair residual " +
                                 std::to_string(resid) + " exceeds tolerance");
    }
    return res;
}

double smallest_constrained_eigenvalue(const HessianMatrix& H, const MassMatrix& M) {
    // H - mu M is positive definite exactly for mu below the smallest eigenvalue;
    // bisect on Cholesky success. Gershgorin bound on the pencil sets the bracket.
    double habs = 0.0;
    for (int k = 0; k < H.outerSize(); ++k) {
        double row = 0.0;
        for (HessianMatrix::InnerIterator it(H, k); it; ++it) row += std::abs(it.value());
        habs = std::max(habs, row);
    }
    double mdiag_min = std::numeric_limits<double>::max();
    for (int i = 0; i < M.rows(); ++i) mdiag_min = std::min(mdiag_min, M.coeff(i, i));
    double bound = 3.0 * habs / mdiag_min + 1.0;  // lambda_min(M) >= diag/2 for P1 mass

    double lo = -bound, hi = bound;
    if (!is_positive_definite(Eigen::SparseMatrix<double>(H - lo * M)))
        throw NumericalError("smallest_constrained_eigenvalue: bracket failure");
    if (is_positive_definite(Eigen::SparseMatrix<double>(H - hi * M)))
        throw NumericalError("smallest_constrained_eigenvalue: upper bracket failure");
    for (int it = 0; it < 100 && hi - lo > 1e-14 * bound; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (is_positive_definite(Eigen::SparseMatrix<double>(H - mid * M)))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double critical_force_numeric(const ElasticConstants& consts, int n_elems, double bracket_lo,
                              double bracket_hi) {
    consts.require_ass0();
    if (!(bracket_lo < bracket_hi))
        throw ValidationError("critical_force_numeric: empty bracket");
    const CardanPath zero = CardanPath::zero(n_elems);
    const auto stable = [&](double f) {
        return is_positive_definite(Eigen::SparseMatrix<double>(hessian(zero, f, consts)));
    };
    const bool lo_stable = stable(bracket_lo);
    const bool hi_stable = stable(bracket_hi);
    if (lo_stable == hi_stable)
        throw NumericalError(
            "critical_force_numeric: no stability change inside the bracket");
    double lo = bracket_lo, hi = bracket_hi;
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    while (hi - lo > 1e-11 * scale) {
        const double mid = 0.5 * (lo + hi);
        if (stable(mid) == hi_stable)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double energy_gap(const CardanPath& path, double f, const ElasticConstants& consts) {
    const double straight =
        consts.L * (consts.c13 * consts.k * consts.k / 2.0 - f);
    return energy_cardan(path, f, consts) - straight;
}

namespace {

struct BorderedSolve {
    CardanPath path;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Newton on { gradient(phi, f) = 0, <phi - s w*, w*>_L2 = 0 } for (phi, f).
BorderedSolve solve_branch_point(const ElasticConstants& consts, int n_elems, double s,
                                 const CardanPath& predictor_path, double predictor_f,
                                 const Eigen::VectorXd& w_int, const MassMatrix& M,
                                 const ContinuationOptions& opts) {
    const int m = 3 * (n_elems - 1);
    const Eigen::VectorXd Mw = M * w_int;

    BorderedSolve out;
    out.path = predictor_path;
    out.f = predictor_f;

    // One full bordered Newton step from (path, f); false on a singular system.
    const auto step = [&](CardanPath& path, double& f, const GradientVector& g,
                          double constraint) {
        const HessianMatrix H = hessian(path, f, consts);
        const GradientVector gf = force_gradient(path, consts);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<size_t>(H.nonZeros()) + 2 * m);
        for (int k = 0; k < H.outerSize(); ++k)
            for (HessianMatrix::InnerIterator itH(H, k); itH; ++itH)
                trips.emplace_back(itH.row(), itH.col(), itH.value());
        for (int i = 0; i < m; ++i) {
            trips.emplace_back(i, m, gf[i]);
            trips.emplace_back(m, i, Mw[i]);
        }
        Eigen::SparseMatrix<double> J(m + 1, m + 1);
        J.setFromTriplets(trips.begin(), trips.end());

        Eigen::VectorXd rhs(m + 1);
        rhs.head(m) = -g;
        rhs[m] = -constraint;

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
        if (lu.info() != Eigen::Success) return false;
        const Eigen::VectorXd delta = lu.solve(rhs);
        if (!delta.allFinite()) return false;

        CardanPath next = CardanPath::from_interior(path.interior() + delta.head(m),
                                                    n_elems);
        // Gimbal margin acts as the chart-exit guard during continuation.
        next.validate();
        path = std::move(next);
        f += delta[m];
        return true;
    };

    const double ctol = opts.tol * (1.0 + std::abs(Mw.dot(w_int)));
    for (int it = 0; it < opts.max_iterations; ++it) {
        const GradientVector g = gradient(out.path, out.f, consts);
        const double constraint = Mw.dot(out.path.interior()) - s * Mw.dot(w_int);
        const double gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        if (gnorm < opts.tol && std::abs(constraint) < ctol) {
            out.converged = true;
            out.iterations = it;
            break;
        }
        if (!step(out.path, out.f, g, constraint)) return out;
    }
    if (out.converged) {
        // Extra steps to the roundoff floor; the Jacobian is nearly singular along
        // the branch direction, so the tolerance alone leaves visible slack.
        for (int extra = 0; extra < 2; ++extra) {
            CardanPath trial = out.path;
            double trial_f = out.f;
            const GradientVector g = gradient(trial, trial_f, consts);
            const double gnorm = g.cwiseAbs().maxCoeff();
            if (gnorm == 0.0) break;
            const double constraint = Mw.dot(trial.interior()) - s * Mw.dot(w_int);
            bool ok = true;
            try {
                ok = step(trial, trial_f, g, constraint);
            } catch (const ChartError&) {
                break;
            }
            if (!ok) break;
            if (gradient(trial, trial_f, consts).cwiseAbs().maxCoeff() >= gnorm) break;
            out.path = std::move(trial);
            out.f = trial_f;
        }
    }
    return out;
}

}  // namespace

std::vector<BranchPoint> continue_branch(const ElasticConstants& consts, int n_elems,
                                         std::vector<double> s_values,
                                         const ContinuationOptions& opts) {
    consts.require_ass0();
    const BifurcationData data = bifurcation_data(consts);
    const CardanPath wstar = kernel_mode(consts, n_elems);
    const Eigen::VectorXd w_int = wstar.interior();
    const MassMatrix M = mass_matrix(n_elems, consts);

    std::sort(s_values.begin(), s_values.end());
    std::map<double, BranchPoint> points;

    const auto trivial_point = [&]() {
        BranchPoint p;
        p.s = 0.0;
        p.f = data.lambda0;
        p.path = CardanPath::zero(n_elems);
        p.mu_min = smallest_constrained_eigenvalue(hessian(p.path, p.f, consts), M);
        p.energy_gap = 0.0;
        return p;
    };

    // Walk outward from zero on each side so every solve has a nearby predictor.
    for (int sign = -1; sign <= 1; sign += 2) {
        std::vector<double> side;
        for (double s : s_values)
            if ((sign > 0 && s > 0.0) || (sign < 0 && s < 0.0)) side.push_back(s);
        std::sort(side.begin(), side.end(),
                  [](double x, double y) { return std::abs(x) < std::abs(y); });

        double s_prev = 0.0;
        CardanPath path_prev = CardanPath::zero(n_elems);
        for (double s_target : side) {
            // Sub-step toward s_target if Newton rejects the full step.
            double s_from = s_prev;
            CardanPath path_from = path_prev;
            int bisections = 0;
            double s_try = s_target;
            while (true) {
                CardanPath pred = path_from;
                pred.values += (s_try - s_from) * wstar.values;
                const double f_pred = data.lambda0 + 0.5 * data.c * s_try * s_try;
                BorderedSolve sol;
                bool chart_ok = true;
                try {
                    sol = solve_branch_point(consts, n_elems, s_try, pred, f_pred, w_int, M,
                                             opts);
                } catch (const ChartError&) {
                    chart_ok = false;
                }
                if (chart_ok && sol.converged) {
                    s_from = s_try;
                    path_from = sol.path;
                    bisections = 0;
                    if (s_try == s_target) {
                        BranchPoint p;
                        p.s = s_target;
                        p.f = sol.f;
                        p.path = sol.path;
                        p.mu_min = smallest_constrained_eigenvalue(
                            hessian(sol.path, sol.f, consts), M);
                        p.energy_gap = energy_gap(sol.path, sol.f, consts);
                        points.emplace(s_target, std::move(p));
                        break;
                    }
                    s_try = s_target;
                } else {
                    if (++bisections > opts.max_bisections)
                        throw ContinuationError(
                            "continue_branch: Newton failed near s = " + std::to_string(s_try),
                            s_from);
                    s_try = 0.5 * (s_from + s_try);
                }
            }
            s_prev = s_from;
            path_prev = path_from;
        }
    }

    if (std::any_of(s_values.begin(), s_values.end(), [](double s) { return s == 0.0; }))
        points.emplace(0.0, trivial_point());

    std::vector<BranchPoint> out;
    out.reserve(points.size());
    for (auto& kv : points) out.push_back(std::move(kv.second));
    return out;
}

int sign_changes_third_angle(const CardanPath& path) {
    int changes = 0;
    int last_sign = 0;
    for (int i = 1; i < path.n_elems(); ++i) {
        const double v = path.values(2, i);
        if (v == 0.0) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    return changes;
}

Eigen::Vector3d fit_quadratic(const std::vector<double>& s, const std::vector<double>& y) {
    if (s.size() != y.size() || s.size() < 3)
        throw ValidationError("fit_quadratic needs at least 3 samples");
    Eigen::MatrixXd A(s.size(), 3);
    Eigen::VectorXd rhs(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = s[i];
        A(i, 2) = s[i] * s[i];
        rhs[i] = y[i];
    }
    return A.colPivHouseholderQr().solve(rhs);
}

std::vector<CardanPath> count_stationary(const ElasticConstants& consts, double f,
                                         double radius, int n_seeds,
                                         const CountOptions& opts) {
    consts.require_ass0();
    if (!(radius > 0.0)) throw ValidationError("count_stationary needs a positive radius");
    const int n = opts.n_elems;
    const BifurcationData data = bifurcation_data(consts);
    const CardanPath wstar = kernel_mode(consts, n);

    std::vector<CardanPath> seeds;
    seeds.push_back(CardanPath::zero(n));
    if (f < data.lambda0) {
        const double s_hat = std::sqrt(2.0 * (f - data.lambda0) / data.c);
        for (double sgn : {1.0, -1.0}) {
            CardanPath seed = wstar;
            seed.values *= sgn * s_hat;
            seeds.push_back(std::move(seed));
        }
    }

    std::mt19937 rng(opts.rng_seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> frac(0.1, 0.9);
    const int n_modes = 6;
    const double h = consts.L / n;
    for (int sdx = 0; sdx < n_seeds; ++sdx) {
        CardanPath p = CardanPath::zero(n);
        Eigen::Matrix<double, 3, Eigen::Dynamic> amp(3, n_modes);
        for (int c = 0; c < 3; ++c)
            for (int m = 0; m < n_modes; ++m) amp(c, m) = coeff(rng);
        for (int i = 1; i < n; ++i) {
            const double t = i * h;
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (int m = 0; m < n_modes; ++m)
                    v += amp(c, m) * std::sin((m + 1) * M_PI * t / consts.L);
                p.values(c, i) = v;
            }
        }
        const double nrm = w12_norm(p, consts);
        if (nrm > 0.0) p.values *= frac(rng) * radius / nrm;
        seeds.push_back(std::move(p));
    }

    std::vector<CardanPath> found;
    const double dedup = 10.0 * opts.tol;
    for (const auto& seed : seeds) {
        CardanPath sol;
        try {
            auto [converged_path, report] = newton_solve(seed, f, consts, opts.tol, 50, false);
            if (!report.converged) continue;
            sol = polish_stationary(converged_path, f, consts);
        } catch (const ChartError&) {
            continue;
        } catch (const NumericalError&) {
            continue;
        }
        if (w12_norm(sol, consts) > radius) continue;
        bool duplicate = false;
        for (const auto& other : found)
            if (w12_distance(sol, other, consts) <= dedup) {
                duplicate = true;
                break;
            }
        if (!duplicate) found.push_back(std::move(sol));
    }
    return found;
}

}  // namespace rodbif
