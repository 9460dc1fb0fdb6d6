#pragma once

#include <Eigen/Sparse>

#include "rodbif/energy.hpp"
#include "rodbif/types.hpp"

namespace rodbif {

/// Discrete first variation w.r.t. interior nodal angles, node-major, size 3(N-1).
using GradientVector = Eigen::VectorXd;

/// Symmetric block-tridiagonal matrix on interior nodal angles (3x3 blocks).
using HessianMatrix = Eigen::SparseMatrix<double>;

/// Consistent P1 mass matrix per component; symmetric positive definite.
using MassMatrix = Eigen::SparseMatrix<double>;

/// Exact derivative of the discrete energy_cardan w.r.t. interior nodal values.
GradientVector gradient(const CardanPath& path, double f, const ElasticConstants& consts);

/// Exact second derivative of the discrete energy; symmetrized after assembly.
HessianMatrix hessian(const CardanPath& path, double f, const ElasticConstants& consts);

/// d gradient / d f; the energy is affine in the force.
GradientVector force_gradient(const CardanPath& path, const ElasticConstants& consts);

/// L2 pairing of interior P1 hat functions (consistent, not lumped).
MassMatrix mass_matrix(int n_elems, const ElasticConstants& consts);

/// P1 stiffness (H1 seminorm pairing) of interior hats; used for W^{1,2} distances.
Eigen::SparseMatrix<double> stiffness_matrix(int n_elems, const ElasticConstants& consts);

/// Discrete W^{1,2} norm of a clamped path (consistent L2 part + FD gradient part).
double w12_norm(const CardanPath& path, const ElasticConstants& consts);
double w12_distance(const CardanPath& a, const CardanPath& b, const ElasticConstants& consts);

/// Strong Euler-Lagrange residual (d/dt grad_xi g) - grad_u g at interior nodes via
/// second-order finite differences; columns are per-node residual triples.
/// Equals minus the mass-lumped gradient up to O(N^-2) for smooth paths.
Eigen::Matrix3Xd el_residual_strong(const CardanPath& path, double f,
                                    const ElasticConstants& consts);

/// Discretization of the constant-coefficient linearized operator at the straight
/// state in Hessian sign convention: the bilinear form
///   int <C w', v'> + c13*k*(w1' v3 - w3' v1) + f*(w2 v2 + w3 v3) dt
/// assembled from closed-form element matrices with Dirichlet conditions.
HessianMatrix linearized_identity(double f, int n_elems, const ElasticConstants& consts);

}  // namespace rodbif
