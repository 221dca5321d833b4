"""Reeb-vector solver for horospherical cone data.

Minimizes the strictly convex functional
``xi |-> int_Delta (<xi, x> + 1)^(-m-1) P(x) dx``
over the interior of the dual body of the section polytope by a damped
Newton iteration with a fraction-to-boundary line search.  At the minimizer
the first moment ``int (<xi, x> + 1)^(-m-2) x P dx`` vanishes, which is the
combinatorial certificate that the punctured canonical cone carries a
Ricci-flat Kaehler cone structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import DualPolytope, VPolytope, dual_polytope
from .quad import DHDensity, integrate_numeric
from .spherical import SphericalInput


class SolitonError(Exception):
    pass


class NotHorosphericalError(SolitonError):
    pass


class InfeasiblePointError(SolitonError):
    pass


class NonConvexDetectedError(SolitonError):
    pass


class MaxIterationsError(SolitonError):
    def __init__(self, message, solution):
        super().__init__(message)
        self.solution = solution


MAX_NEWTON_ITERATIONS = 200
BOUNDARY_FRACTION = 0.05
QUAD_TOL_CAP = 1e-8


@dataclass(frozen=True)
class ReebProblem:
    """Section polytope, density, and complex dimension of the variety."""

    delta: VPolytope
    dh: DHDensity
    m: int
    dual: DualPolytope

    @classmethod
    def from_polytope(cls, delta: VPolytope, dh: DHDensity, m: int) -> "ReebProblem":
        if delta.affine_dim < delta.dim:
            raise SolitonError("section polytope must be full-dimensional")
        dual = dual_polytope(delta)
        dh.check_positive_on(delta.vertices)
        return cls(delta=delta, dh=dh, m=m, dual=dual)

    @classmethod
    def from_spherical(cls, si: SphericalInput) -> "ReebProblem":
        if not si.is_horospherical:
            raise NotHorosphericalError(
                "Reeb solver requires the valuation cone to be the whole space")
        return cls.from_polytope(si.section_polytope_v, si.dh, si.dim_x)

    @property
    def dim(self) -> int:
        return self.delta.dim


@dataclass(frozen=True)
class ReebSolution:
    xi: np.ndarray
    functional_value: float
    gradient_norm: float
    hessian_min_eigval: float
    iterations: int
    converged: bool
    trace: tuple[tuple[float, float, float], ...] = ()  # (value, |grad|, step)


def _dual_form_values(prob: ReebProblem, xi: np.ndarray) -> np.ndarray:
    normals = np.array([[float(c) for c in f.normal] for f in prob.dual.forms])
    offsets = np.array([float(f.offset) for f in prob.dual.forms])
    return normals @ xi + offsets


def reeb_functional(prob: ReebProblem, xi, quad_tol: float = 1e-10):
    """(value, gradient, hessian, quadrature error bound) at a strictly
    interior point of the dual body."""
    xi = np.asarray(xi, dtype=float)
    n = prob.dim
    if np.min(_dual_form_values(prob, xi)) <= 0:
        raise InfeasiblePointError(f"xi={xi} is not interior to the dual body")
    m = prob.m
    dh_eval = prob.dh.eval_float
    pairs = [(i, j) for i in range(n) for j in range(i, n)]

    def f(pts: np.ndarray) -> np.ndarray:
        base = pts @ xi + 1.0
        w = dh_eval(pts)
        cols = [w * base ** (-m - 1)]
        g = w * base ** (-m - 2)
        for i in range(n):
            cols.append(-(m + 1) * g * pts[:, i])
        h = w * base ** (-m - 3)
        for i, j in pairs:
            cols.append((m + 1) * (m + 2) * h * pts[:, i] * pts[:, j])
        return np.column_stack(cols)

    quad = integrate_numeric(prob.delta, f, tol=quad_tol)
    values = np.atleast_1d(quad.value)
    value = float(values[0])
    grad = np.array(values[1:1 + n], dtype=float)
    hess = np.zeros((n, n))
    for (i, j), v in zip(pairs, values[1 + n:]):
        hess[i, j] = hess[j, i] = float(v)
    return value, grad, hess, quad.error_bound


def solve_reeb(prob: ReebProblem, tol: float = 1e-10) -> ReebSolution:
    """Damped Newton minimization from xi = 0 (always strictly feasible).

    The inner quadrature tolerance follows the square of the current
    gradient norm so late iterations are certified; steps are shrunk until
    every dual form keeps at least `BOUNDARY_FRACTION` of its pre-step value
    and the functional strictly decreases.
    """
    n = prob.dim
    xi = np.zeros(n)
    # the endgame only needs the gradient certified somewhat below the
    # Newton tolerance; tightening further would waste the cubature budget
    quad_floor = max(1e-13, 0.1 * tol)
    quad_tol = QUAD_TOL_CAP
    value, grad, hess, _err = reeb_functional(prob, xi, quad_tol)
    trace: list[tuple[float, float, float]] = [(value, float(np.linalg.norm(grad)), 0.0)]
    min_eig = float(np.min(np.linalg.eigvalsh(hess)))
    if min_eig <= 0:
        raise NonConvexDetectedError(
            f"Hessian not positive definite (min eigenvalue {min_eig}); "
            "integration tolerance too loose")
    for iteration in range(MAX_NEWTON_ITERATIONS):
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol:
            return ReebSolution(xi=xi, functional_value=value, gradient_norm=gnorm,
                                hessian_min_eigval=min_eig, iterations=iteration,
                                converged=True, trace=tuple(trace))
        step = np.linalg.solve(hess, -grad)
        forms_before = _dual_form_values(prob, xi)
        t = 1.0
        for _ in range(80):
            candidate = xi + t * step
            forms_after = _dual_form_values(prob, candidate)
            if np.all(forms_after >= BOUNDARY_FRACTION * forms_before):
                break
            t *= 0.5
        else:
            raise SolitonError("line search failed to stay interior")
        quad_tol = min(QUAD_TOL_CAP, max(0.01 * gnorm * gnorm, quad_floor))
        accepted = None
        for _ in range(60):
            candidate = xi + t * step
            cand_value, cand_grad, cand_hess, _err = reeb_functional(
                prob, candidate, quad_tol)
            # strict descent; once value differences drop below float
            # resolution the gradient norm is the meaningful progress measure
            at_noise_floor = abs(cand_value - value) <= 8e-16 * abs(value)
            if cand_value < value or (
                    at_noise_floor and float(np.linalg.norm(cand_grad)) < gnorm):
                accepted = (candidate, cand_value, cand_grad, cand_hess)
                break
            t *= 0.5
        if accepted is None:
            # stagnation at quadrature noise: report the current iterate
            gnorm = float(np.linalg.norm(grad))
            return ReebSolution(xi=xi, functional_value=value, gradient_norm=gnorm,
                                hessian_min_eigval=min_eig,
                                iterations=iteration, converged=gnorm <= tol,
                                trace=tuple(trace))
        xi, value, grad, hess = accepted
        min_eig = float(np.min(np.linalg.eigvalsh(hess)))
        if min_eig <= 0:
            raise NonConvexDetectedError(
                f"Hessian not positive definite (min eigenvalue {min_eig})")
        trace.append((value, float(np.linalg.norm(grad)), t))
    gnorm = float(np.linalg.norm(grad))
    solution = ReebSolution(xi=xi, functional_value=value, gradient_norm=gnorm,
                            hessian_min_eigval=min_eig,
                            iterations=MAX_NEWTON_ITERATIONS, converged=False,
                            trace=tuple(trace))
    raise MaxIterationsError(
        f"no convergence after {MAX_NEWTON_ITERATIONS} Newton steps", solution)


def stationarity_residual(prob: ReebProblem, xi, quad_tol: float = 1e-12) -> float:
    """Norm of int (<xi,x>+1)^(-m-2) x P dx at xi (zero at the minimizer)."""
    xi = np.asarray(xi, dtype=float)
    _value, grad, _hess, _err = reeb_functional(prob, xi, quad_tol)
    return float(np.linalg.norm(grad / (prob.m + 1)))


def pgl2_wonderful_check():
    """Ding verdict of the builtin rank-one wonderful-compactification
    fixture (expected polystable: the variety carries a canonical metric)."""
    from .fixtures import builtin_spherical_input
    from .invariants import ding_check
    si, _g = builtin_spherical_input("pgl2")
    return ding_check(si)
