#include "rodbif/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "rodbif/bifurcation.hpp"

namespace rodbif {

namespace {

double inf_norm(const Eigen::SparseMatrix<double>& A) {
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            rowsum[it.row()] += std::abs(it.value());
    return rowsum.size() ? rowsum.maxCoeff() : 0.0;
}

Eigen::VectorXd solve_newton_system(const HessianMatrix& H, const GradientVector& g) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(H);
    if (lu.info() == Eigen::Success) {
        Eigen::VectorXd d = lu.solve(-g);
        if (d.allFinite()) return d;
    }
    // Regularized retry once, then give up.
    Eigen::SparseMatrix<double> I(H.rows(), H.cols());
    I.setIdentity();
    const double delta = 1e-8 * inf_norm(H) + 1e-14;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu2(
        Eigen::SparseMatrix<double>(H + delta * I));
    if (lu2.info() != Eigen::Success)
        throw NumericalError("newton_solve: singular system after regularized retry");
    Eigen::VectorXd d = lu2.solve(-g);
    if (!d.allFinite())
        throw NumericalError("newton_solve: singular system after regularized retry");
    return d;
}

}  // namespace

const char* to_string(Classification c) {
    switch (c) {
        case Classification::StrictMin: return "strict-min";
        case Classification::Saddle: return "saddle";
        case Classification::Degenerate: return "degenerate";
        default: return "unclassified";
    }
}

std::pair<double, Classification> classify_stationary(const CardanPath& path, double f,
                                                      const ElasticConstants& consts) {
    const HessianMatrix H = hessian(path, f, consts);
    const MassMatrix M = mass_matrix(path.n_elems(), consts);
    const double mu = smallest_constrained_eigenvalue(H, M);
    const double tol = 1e-8 * inf_norm(H);
    Classification c = Classification::Degenerate;
    if (mu > tol)
        c = Classification::StrictMin;
    else if (mu < -tol)
        c = Classification::Saddle;
    return {mu, c};
}

std::pair<CardanPath, SolveReport> newton_solve(const CardanPath& seed, double f,
                                                const ElasticConstants& consts, double tol,
                                                int max_iterations, bool classify) {
    seed.validate();
    const int n = seed.n_elems();
    CardanPath path = seed;
    SolveReport report;
    for (int it = 0; it <= max_iterations; ++it) {
        const GradientVector g = gradient(path, f, consts);
        report.final_gradient_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        report.iterations = it;
        if (report.final_gradient_norm < tol) {
            report.converged = true;
            break;
        }
        if (it == max_iterations) break;
        const HessianMatrix H = hessian(path, f, consts);
        const Eigen::VectorXd step = solve_newton_system(H, g);
        CardanPath next = CardanPath::from_interior(path.interior() + step, n);
        next.validate();  // chart exit throws here
        path = next;
    }
    if (report.converged && report.final_gradient_norm > 0.0) {
        // Near-singular Hessians leave ~tol/sigma_min of slack in the kernel
        // direction; a couple of extra steps push the iterate to the roundoff floor.
        path = polish_stationary(path, f, consts);
        report.final_gradient_norm = gradient(path, f, consts).cwiseAbs().maxCoeff();
    }
    if (report.converged && classify)
        std::tie(report.mu_min, report.classification) = classify_stationary(path, f, consts);
    return {std::move(path), report};
}

CardanPath polish_stationary(const CardanPath& path, double f, const ElasticConstants& consts) {
    CardanPath best = path;
    double best_norm = gradient(best, f, consts).cwiseAbs().maxCoeff();
    for (int it = 0; it < 3; ++it) {
        const GradientVector g = gradient(best, f, consts);
        const HessianMatrix H = hessian(best, f, consts);
        Eigen::VectorXd step;
        try {
            step = solve_newton_system(H, g);
        } catch (const NumericalError&) {
            break;
        }
        CardanPath next = CardanPath::from_interior(best.interior() + step, best.n_elems());
        try {
            next.validate();
        } catch (const ChartError&) {
            break;
        }
        const double nn = gradient(next, f, consts).cwiseAbs().maxCoeff();
        if (nn >= best_norm) break;
        best = std::move(next);
        best_norm = nn;
    }
    return best;
}

std::pair<CardanPath, SolveReport> minimize(const CardanPath& seed, double f,
                                            const ElasticConstants& consts, double tol,
                                            int max_iterations) {
    seed.validate();
    const int n = seed.n_elems();
    const MassMatrix M = mass_matrix(n, consts);
    CardanPath path = seed;
    double energy = energy_cardan(path, f, consts);
    SolveReport report;

    for (int it = 0; it <= max_iterations; ++it) {
        const GradientVector g = gradient(path, f, consts);
        report.final_gradient_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        report.iterations = it;
        if (report.final_gradient_norm < tol) {
            report.converged = true;
            break;
        }
        if (it == max_iterations) break;

        HessianMatrix H = hessian(path, f, consts);
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(H);
        if (llt.info() != Eigen::Success) {
            // Indefinite: shift the smallest constrained eigenvalue up to ~|mu_min|/2.
            const double mu = smallest_constrained_eigenvalue(H, M);
            const double delta = std::max(1e-8, -1.5 * mu);
            H = H + delta * M;
            llt.compute(H);
            if (llt.info() != Eigen::Success)
                throw NumericalError("minimize: shifted Hessian factorization failed");
        }
        const Eigen::VectorXd d = llt.solve(-g);
        const double slope = g.dot(d);

        // Armijo backtracking, factor 0.5, constant 1e-4; chart exits fail the step.
        // Near the roundoff floor the predicted decrease drops below the energy's
        // numerical resolution, so the test carries a resolution-sized slack.
        const double energy_resolution = 1e-14 * (1.0 + std::abs(energy));
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= 1e-12) {
            CardanPath trial = CardanPath::from_interior(path.interior() + alpha * d, n);
            double trial_energy;
            try {
                trial.validate();
                trial_energy = energy_cardan(trial, f, consts);
            } catch (const ChartError&) {
                alpha *= 0.5;
                continue;
            }
            if (trial_energy <= energy + 1e-4 * alpha * slope + energy_resolution) {
                path = std::move(trial);
                energy = trial_energy;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw NumericalError("minimize: line search failed");
    }
    if (report.converged && report.final_gradient_norm > 0.0) {
        path = polish_stationary(path, f, consts);
        report.final_gradient_norm = gradient(path, f, consts).cwiseAbs().maxCoeff();
    }
    if (report.converged)
        std::tie(report.mu_min, report.classification) = classify_stationary(path, f, consts);
    return {std::move(path), report};
}

}  // namespace rodbif
