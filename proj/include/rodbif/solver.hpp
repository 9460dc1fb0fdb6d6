#pragma once

#include <utility>

#include "rodbif/variational.hpp"

namespace rodbif {

enum class Classification { StrictMin, Saddle, Degenerate, Unclassified };

const char* to_string(Classification c);

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;
    Classification classification = Classification::Unclassified;
    double mu_min = 0.0;
};

/// Newton iteration on the discrete Euler-Lagrange system gradient(phi, f) = 0.
/// Non-convergence after max_iterations is reported through the converged flag;
/// a chart exit or a singular system (after one regularized retry) throws.
std::pair<CardanPath, SolveReport> newton_solve(const CardanPath& seed, double f,
                                                const ElasticConstants& consts,
                                                double tol = 1e-10, int max_iterations = 50,
                                                bool classify = true);

/// Energy minimization: Newton with an eigenvalue shift when the Hessian is
/// indefinite and Armijo backtracking; accepted steps never increase the energy.
std::pair<CardanPath, SolveReport> minimize(const CardanPath& seed, double f,
                                            const ElasticConstants& consts, double tol = 1e-10,
                                            int max_iterations = 100);

/// Extra full Newton steps from an already converged point, accepted while the
/// gradient norm still decreases; drives the iterate to the roundoff floor.
CardanPath polish_stationary(const CardanPath& path, double f, const ElasticConstants& consts);

/// Smallest constrained eigenvalue plus its classification against 1e-8*||H||_inf.
std::pair<double, Classification> classify_stationary(const CardanPath& path, double f,
                                                      const ElasticConstants& consts);

}  // namespace rodbif
