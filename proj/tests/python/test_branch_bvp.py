"""Independent verification of the branch force curve.

Solves the strong Euler-Lagrange system with scipy's collocation BVP solver,
deriving the equations symbolically from the energy density, and compares the
resulting force f(s) with the library's finite-element continuation. This is a
fully independent route: different discretization, different solver, different
derivative computation.
"""

import math

import numpy as np
import pytest

sp = pytest.importorskip("sympy")
scipy_integrate = pytest.importorskip("scipy.integrate")

import rodbif


@pytest.fixture(scope="module")
def strong_form():
    u1, u2, u3, x1, x2, x3 = sp.symbols("u1 u2 u3 x1 x2 x3")
    c12, c13, c23, k, f = sp.symbols("c12 c13 c23 k f")
    g = (
        c12 / 2 * (x1 * sp.sin(u2) + x3) ** 2
        + c13 / 2 * (x1 * sp.cos(u2) * sp.sin(u3) - x2 * sp.cos(u3) + k) ** 2
        + c23 / 2 * (x1 * sp.cos(u2) * sp.cos(u3) + x2 * sp.sin(u3)) ** 2
        - f * sp.cos(u2) * sp.cos(u3)
    )
    U, X = [u1, u2, u3], [x1, x2, x3]
    args = (*U, *X, c12, c13, c23, k, f)
    grad_u = sp.lambdify(args, sp.Matrix([sp.diff(g, v) for v in U]), "numpy")
    hess_xx = sp.lambdify(args, sp.Matrix([[sp.diff(g, a, b) for b in X] for a in X]),
                          "numpy")
    hess_xu = sp.lambdify(
        args, sp.Matrix([[sp.diff(sp.diff(g, X[i]), U[j]) for j in range(3)]
                         for i in range(3)]), "numpy")
    return grad_u, hess_xx, hess_xu


def bvp_branch_force(consts, s, strong_form, n_nodes=320):
    grad_u, hess_xx, hess_xu = strong_form
    cc = (consts.c12, consts.c13, consts.c23, consts.k)
    L = consts.L
    lam0 = rodbif.critical_force(consts)
    amp = consts.c13 * consts.k * L / (2 * consts.c23 * math.pi)

    def wstar(t):
        return np.array([amp * (1 - np.cos(2 * np.pi * t / L)), 0 * t,
                         -np.sin(2 * np.pi * t / L)])

    def rhs(t, y, p):
        force = p[0]
        phi, dphi = y[0:3], y[3:6]
        out = np.zeros_like(y)
        out[0:3] = dphi
        w = wstar(t)
        for i in range(t.size):
            a = (*phi[:, i], *dphi[:, i], *cc, force)
            A = np.asarray(hess_xx(*a), dtype=float)
            B = np.asarray(hess_xu(*a), dtype=float)
            b = np.asarray(grad_u(*a), dtype=float).ravel()
            # (grad_xi g)' = hess_xx phi'' + hess_xu phi' must equal grad_u g
            out[3:6, i] = np.linalg.solve(A, b - B @ dphi[:, i])
        out[6] = np.sum((phi - s * w) * w, axis=0)  # amplitude constraint density
        return out

    def bc(ya, yb, p):
        return np.array([*ya[0:3], *yb[0:3], ya[6], yb[6]])

    t = np.linspace(0.0, L, n_nodes)
    y0 = np.zeros((7, t.size))
    y0[0:3] = s * wstar(t)
    y0[3:6] = np.gradient(y0[0:3], t, axis=1)
    a_closed, b_closed, c_closed = rodbif.coefficients_closed(consts)
    sol = scipy_integrate.solve_bvp(rhs, bc, t, y0, p=[lam0 + 0.5 * c_closed * s * s],
                                    tol=1e-8, max_nodes=40000)
    assert sol.status == 0, sol.message
    return sol.p[0]


def test_supercritical_branch_force_matches_independent_bvp(strong_form):
    c = rodbif.ElasticConstants(1.0, 1.0, 1.0, 2.0, 2.0 * math.pi)
    s = 0.03
    f_bvp = bvp_branch_force(c, s, strong_form)
    branch = rodbif.continue_branch(c, 256, [s])
    f_fem = branch[-1]["f"]
    lam0 = rodbif.critical_force(c)
    # The FEM branch bifurcates from the discrete critical force, which sits
    # O(h^2) below the exact one; compare each deviation against its own origin.
    lam_h = rodbif.critical_force_numeric(c, 256, 1.0, 5.0)
    assert f_fem - lam_h == pytest.approx(f_bvp - lam0, rel=2e-2)
    assert f_fem < lam0


def test_figure_constants_branch_is_subcritical_by_independent_bvp(strong_form):
    c = rodbif.ElasticConstants(4.0848, 0.0065, 0.0087, 375.0, 1.0)
    s = 0.004
    f_bvp = bvp_branch_force(c, s, strong_form)
    branch = rodbif.continue_branch(c, 256, [s])
    lam0 = rodbif.critical_force(c)
    lam_h = rodbif.critical_force_numeric(c, 256, 400.0, 650.0)
    assert f_bvp > lam0  # the independent solver also puts the branch above f_crit
    assert branch[-1]["f"] - lam_h == pytest.approx(f_bvp - lam0, rel=2e-2)
