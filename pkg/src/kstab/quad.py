"""Integration engines over rational polytopes.

Two routes share one triangulation substrate:

* an exact engine for polynomials, by affine substitution onto the standard
  simplex and the factorial formula
  ``int_{std} prod t_i^{a_i} dt = prod a_i! / (d + sum a_i)!``;
* a certified numeric engine for smooth integrands, by adaptive simplicial
  cubature with embedded Grundmann-Moller rules of degrees 7 and 9.

Lower-dimensional polytopes are integrated in lattice coordinates on their
affine hull (see `geom.lattice_chart`), which is the normalization under
which level-k lattice sums converge to these integrals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Callable, Sequence

import numpy as np

from .geom import (
    AffineForm,
    Chart,
    HPolytope,
    Simplex,
    VPolytope,
    Vec,
    dot,
    lattice_chart,
    triangulate,
    vertex_enum,
    zero_vec,
)


class IntegrationError(Exception):
    pass


class SingularIntegrandError(IntegrationError):
    pass


class ZeroFactorError(IntegrationError):
    pass


# ---------------------------------------------------------------------------
# polynomials with exact rational coefficients


class Polynomial:
    """Multivariate polynomial as {exponent multi-index: Fraction}."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.dim = dim
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, dim: int, c) -> "Polynomial":
        return cls(dim, {(0,) * dim: Fraction(c)})

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "Polynomial":
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): Fraction(1)})

    @classmethod
    def from_affine(cls, form: AffineForm) -> "Polynomial":
        dim = len(form.normal)
        terms: dict[tuple[int, ...], Fraction] = {}
        if form.offset != 0:
            terms[(0,) * dim] = Fraction(form.offset)
        for i, c in enumerate(form.normal):
            if c != 0:
                e = [0] * dim
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        return cls(dim, terms)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.dim, out)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            out: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return Polynomial(self.dim, out)
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.dim, {e: c * v for e, v in self.terms.items()})

    def pow_int(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.dim == other.dim \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.terms.items()))))

    # -- evaluation and substitution -----------------------------------------

    def __call__(self, x: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for xi, ei in zip(x, e):
                if ei:
                    t *= Fraction(xi) ** ei
            total += t
        return total

    def eval_float(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (k, dim) float array."""
        pts = np.atleast_2d(pts)
        out = np.zeros(len(pts))
        for e, c in self.terms.items():
            t = np.full(len(pts), float(c))
            for i, ei in enumerate(e):
                if ei:
                    t = t * pts[:, i] ** ei
            out += t
        return out

    def compose_affine(self, origin: Vec, columns: Sequence[Vec]) -> "Polynomial":
        """Substitute x = origin + sum_j y_j columns[j]; result in y."""
        r = len(columns)
        subs = []
        for i in range(self.dim):
            terms: dict[tuple[int, ...], Fraction] = {}
            if origin[i] != 0:
                terms[(0,) * r] = origin[i]
            for j in range(r):
                if columns[j][i] != 0:
                    e = [0] * r
                    e[j] = 1
                    terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + columns[j][i]
            subs.append(Polynomial(r, terms))
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            if k == 0:
                return Polynomial.constant(r, 1)
            key = (i, k)
            if key not in powers:
                powers[key] = power(i, k - 1) * subs[i]
            return powers[key]

        out = Polynomial(r, {})
        for e, c in self.terms.items():
            term = Polynomial.constant(r, c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * power(i, ei)
            out = out + term
        return out

    def substitute_linear(self, rows: Sequence[Vec], target_dim: int) -> "Polynomial":
        """Polynomial q(x) = p(rows . x): precompose with a linear map given
        by its rows (each row has length target_dim)."""
        origin = zero_vec(self.dim)
        columns = [tuple(rows[i][j] for i in range(self.dim)) for j in range(target_dim)]
        return self.compose_affine(origin, columns)

    def __repr__(self):
        return f"Polynomial(dim={self.dim}, terms={len(self.terms)})"


# ---------------------------------------------------------------------------
# Duistermaat-Heckman densities and weight functions


@dataclass(frozen=True)
class DHFactor:
    """One affine factor of a DH density with its multiplicity.

    ``rho_pair`` is the pairing of the Weyl vector with the factor's coroot;
    it makes discrete dimension counts computable (see spherical.level_sum)
    and is None for raw user-supplied densities.
    """

    form: AffineForm
    multiplicity: int = 1
    rho_pair: Fraction | None = None


@dataclass(frozen=True)
class DHDensity:
    """Product of positive affine forms over the section polytope."""

    dim: int
    factors: tuple[DHFactor, ...] = ()
    normalization: Fraction = Fraction(1)

    def __post_init__(self):
        for f in self.factors:
            if f.multiplicity < 1:
                raise ValueError("factor multiplicities must be positive")

    @cached_property
    def polynomial(self) -> Polynomial:
        p = Polynomial.constant(self.dim, Fraction(1, 1) / self.normalization)
        for f in self.factors:
            p = p * Polynomial.from_affine(f.form).pow_int(f.multiplicity)
        return p

    @property
    def degree(self) -> int:
        return sum(f.multiplicity for f in self.factors)

    @property
    def supports_dimension_counts(self) -> bool:
        return all(f.rho_pair is not None for f in self.factors)

    def __call__(self, x: Vec) -> Fraction:
        total = Fraction(1) / self.normalization
        for f in self.factors:
            total *= f.form(x) ** f.multiplicity
        return total

    def eval_float(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        out = np.full(len(pts), 1.0 / float(self.normalization))
        for f in self.factors:
            base = pts @ np.array([float(c) for c in f.form.normal]) + float(f.form.offset)
            out = out * base ** f.multiplicity
        return out

    def translated(self, t: Vec) -> "DHDensity":
        """Density for the polytope translated by +t (same values pointwise:
        new(x) = old(x - t))."""
        return DHDensity(
            self.dim,
            tuple(DHFactor(f.form.translated(t), f.multiplicity, f.rho_pair)
                  for f in self.factors),
            self.normalization,
        )

    def check_positive_on(self, vertices: Sequence[Vec]):
        """Nonnegative at every vertex and not identically zero per factor."""
        for f in self.factors:
            values = [f.form(v) for v in vertices]
            if any(v < 0 for v in values):
                raise ValueError("density factor negative at a polytope vertex")
            if all(v == 0 for v in values):
                raise ZeroFactorError("density factor vanishes on the polytope")


class WeightFn:
    """Weight function g on the projected polytope coordinates."""


@dataclass(frozen=True)
class ConstantWeight(WeightFn):
    value: Fraction | float = Fraction(1)


@dataclass(frozen=True)
class PolynomialWeight(WeightFn):
    poly: Polynomial


@dataclass(frozen=True)
class AffinePowerWeight(WeightFn):
    """g(xbar) = (<xi, xbar> + a) ** exponent."""

    xi: Vec
    a: Fraction
    exponent: float | int | Fraction


def weight_constant_value(g: WeightFn) -> Fraction | float | None:
    """The constant value of g if it is constant, else None."""
    if isinstance(g, ConstantWeight):
        return g.value
    if isinstance(g, PolynomialWeight):
        if g.poly.degree == 0:
            return g.poly.terms.get((0,) * g.poly.dim, Fraction(0))
        return None
    if isinstance(g, AffinePowerWeight):
        if all(c == 0 for c in g.xi):
            e = g.exponent
            if e == 0:
                return Fraction(1)
            if isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1):
                return Fraction(g.a) ** int(e)
            return float(g.a) ** float(e)
        if g.exponent == 0:
            return Fraction(1)
        return None
    raise TypeError(f"unknown weight type {type(g)!r}")


def weight_as_polynomial(g: WeightFn, projection: Sequence[Vec], ambient_dim: int) -> Polynomial | None:
    """g(proj . x) as an exact Polynomial in ambient x, or None if the weight
    is genuinely non-polynomial.  ``projection`` is given by rows."""
    const = weight_constant_value(g)
    if const is not None:
        if isinstance(const, float):
            return None
        return Polynomial.constant(ambient_dim, const)
    if isinstance(g, PolynomialWeight):
        return g.poly.substitute_linear(projection, ambient_dim)
    if isinstance(g, AffinePowerWeight):
        e = g.exponent
        is_int = isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1)
        if is_int and int(e) >= 0:
            base = _projected_affine(g, projection, ambient_dim)
            return Polynomial.from_affine(base).pow_int(int(e))
        return None
    raise TypeError(f"unknown weight type {type(g)!r}")


def _projected_affine(g: AffinePowerWeight, projection: Sequence[Vec], ambient_dim: int) -> AffineForm:
    normal = tuple(
        sum((g.xi[i] * projection[i][j] for i in range(len(projection))), Fraction(0))
        for j in range(ambient_dim))
    return AffineForm(normal, Fraction(g.a))


def weight_evaluator(g: WeightFn, projection: Sequence[Vec], ambient_dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized float evaluator of g(proj . x) on (k, ambient_dim) arrays."""
    const = weight_constant_value(g)
    if const is not None:
        c = float(const)
        return lambda pts: np.full(len(np.atleast_2d(pts)), c)
    if isinstance(g, PolynomialWeight):
        p = g.poly.substitute_linear(projection, ambient_dim)
        return p.eval_float
    if isinstance(g, AffinePowerWeight):
        base = _projected_affine(g, projection, ambient_dim)
        nrm = np.array([float(c) for c in base.normal])
        off = float(base.offset)
        e = float(g.exponent)
        return lambda pts: (np.atleast_2d(pts) @ nrm + off) ** e
    raise TypeError(f"unknown weight type {type(g)!r}")


def check_weight_positive(g: WeightFn, projected_vertices: Sequence[Vec]):
    """Positivity checks at the projected vertices (affine bases strictly
    positive; constants strictly positive)."""
    const = weight_constant_value(g)
    if const is not None:
        if not const > 0:
            raise ValueError("weight function must be strictly positive")
        return
    if isinstance(g, AffinePowerWeight):
        for v in projected_vertices:
            if not dot(g.xi, v) + g.a > 0:
                raise ValueError("affine-power weight base not positive on polytope")
    if isinstance(g, PolynomialWeight):
        for v in projected_vertices:
            if not g.poly(v) > 0:
                raise ValueError("polynomial weight not positive at a vertex")


# ---------------------------------------------------------------------------
# exact integration


def _std_simplex_integral(poly: Polynomial) -> Fraction:
    r = poly.dim
    total = Fraction(0)
    for e, c in poly.terms.items():
        num = 1
        for a in e:
            num *= factorial(a)
        total += c * Fraction(num, factorial(r + sum(e)))
    return total


def integrate_poly_simplex(s: Simplex, f: Polynomial) -> Fraction:
    """Exact integral of f over a full-dimensional simplex."""
    composed = f.compose_affine(s.vertices[0], s.edge_columns)
    return s.volume_factor * _std_simplex_integral(composed)


def integrate_monomial_simplex(s: Simplex, exponent: Sequence[int]) -> Fraction:
    mono = Polynomial(s.dim, {tuple(exponent): Fraction(1)})
    return integrate_poly_simplex(s, mono)


def _as_vpolytope(p) -> VPolytope:
    if isinstance(p, VPolytope):
        return p
    if isinstance(p, HPolytope):
        return vertex_enum(p)
    raise TypeError("expected HPolytope or VPolytope")


def _chart_setup(p) -> tuple[Chart, VPolytope]:
    """Lattice chart of the affine hull and the polytope in chart coords."""
    v = _as_vpolytope(p)
    chart = lattice_chart(list(v.vertices))
    if chart.is_identity:
        return chart, v
    mapped = [chart.to_chart(x) for x in v.vertices]
    return chart, VPolytope._trusted(chart.dim, sorted(mapped))


def integrate_poly(p, f: Polynomial) -> Fraction:
    """Exact integral of a polynomial over a rational polytope.

    Lower-dimensional polytopes are integrated against the lattice measure of
    their affine hull; a 0-dimensional polytope integrates to f(point).
    """
    chart, vp = _chart_setup(p)
    if chart.dim == 0:
        return f(chart.origin)
    if chart.is_identity:
        f_chart = f
    else:
        f_chart = f.compose_affine(chart.origin, chart.basis)
    total = Fraction(0)
    for s in triangulate(vp):
        total += integrate_poly_simplex(s, f_chart)
    return total


# ---------------------------------------------------------------------------
# Grundmann-Moller adaptive cubature


@dataclass(frozen=True)
class Quadrature:
    value: float | np.ndarray
    error_bound: float
    subdivisions: int
    converged: bool = True


def _gm_rule(n: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric nodes and weights of the degree-(2s+1) rule on the
    standard n-simplex; weights sum to 1/n!."""
    d = 2 * s + 1
    pts: list[tuple[Fraction, ...]] = []
    wts: list[Fraction] = []
    for i in range(s + 1):
        w = (Fraction(-1) ** i) * Fraction((d + n - 2 * i) ** d,
                                           4 ** s * factorial(i) * factorial(d + n - i))
        for beta in _compositions(s - i, n + 1):
            pts.append(tuple(Fraction(2 * b + 1, d + n - 2 * i) for b in beta))
            wts.append(w)
    nodes = np.array([[float(c) for c in p] for p in pts])
    weights = np.array([float(w) for w in wts])
    return nodes, weights


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


_GM_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}


def _gm_rules(n: int) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    lo = _GM_CACHE.setdefault((n, 3), _gm_rule(n, 3))
    hi = _GM_CACHE.setdefault((n, 4), _gm_rule(n, 4))
    return lo, hi


@dataclass
class _NumSimplex:
    verts: np.ndarray        # (n+1, n) chart coordinates
    detabs: float
    index: int
    value: np.ndarray = field(default=None)  # high-order estimate
    error: float = 0.0


MAX_SUBDIVISIONS = 100_000


def integrate_numeric(p, f: Callable[[np.ndarray], np.ndarray], tol: float,
                      max_subdivisions: int = MAX_SUBDIVISIONS) -> Quadrature:
    """Adaptive cubature of a smooth integrand over a rational polytope.

    ``f`` maps an (k, ambient_dim) float array to shape (k,) or (k, m);
    the result value follows that shape.  The reported error bound is the
    summed embedded-rule discrepancy, held at or below ``tol`` unless the
    subdivision budget runs out (then ``converged`` is False and the best
    estimate is returned).
    """
    chart, vp = _chart_setup(p)
    n = chart.dim
    if n == 0:
        val = np.asarray(f(np.array([[float(c) for c in chart.origin]])))[0]
        return Quadrature(value=val if val.shape else float(val),
                          error_bound=0.0, subdivisions=0)
    origin = np.array([float(c) for c in chart.origin])
    basis = np.array([[float(chart.basis[j][i]) for j in range(n)]
                      for i in range(len(chart.origin))])  # ambient x chart

    (nodes_lo, w_lo), (nodes_hi, w_hi) = _gm_rules(n)

    def evaluate(sx: _NumSimplex):
        pts_hi = nodes_hi @ sx.verts
        pts_lo = nodes_lo @ sx.verts
        amb_hi = pts_hi @ basis.T + origin
        amb_lo = pts_lo @ basis.T + origin
        vals_hi = np.asarray(f(amb_hi), dtype=float)
        vals_lo = np.asarray(f(amb_lo), dtype=float)
        if not (np.all(np.isfinite(vals_hi)) and np.all(np.isfinite(vals_lo))):
            raise SingularIntegrandError("integrand not finite at a quadrature node")
        i_hi = sx.detabs * (w_hi @ vals_hi)
        i_lo = sx.detabs * (w_lo @ vals_lo)
        sx.value = np.atleast_1d(i_hi)
        sx.error = float(np.max(np.abs(np.atleast_1d(i_hi - i_lo))))

    leaves: dict[int, _NumSimplex] = {}
    heap: list[tuple[float, int]] = []
    counter = 0
    total_error = 0.0
    for s in triangulate(vp):
        verts = np.array([[float(c) for c in v] for v in s.vertices])
        sx = _NumSimplex(verts, float(s.volume_factor), counter)
        counter += 1
        evaluate(sx)
        leaves[sx.index] = sx
        total_error += sx.error
        heapq.heappush(heap, (-sx.error, sx.index))

    subdivisions = 0
    while True:
        if total_error <= tol:
            break
        if subdivisions >= max_subdivisions:
            break
        err, idx = heapq.heappop(heap)
        if idx not in leaves or -err != leaves[idx].error:
            continue
        worst = leaves.pop(idx)
        total_error -= worst.error
        # bisect the longest edge
        best = (0, 1)
        bestlen = -1.0
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                l = float(np.sum((worst.verts[i] - worst.verts[j]) ** 2))
                if l > bestlen:
                    bestlen = l
                    best = (i, j)
        i, j = best
        mid = (worst.verts[i] + worst.verts[j]) / 2.0
        for replaced in (i, j):
            child_verts = worst.verts.copy()
            child_verts[replaced] = mid
            child = _NumSimplex(child_verts, worst.detabs / 2.0, counter)
            counter += 1
            evaluate(child)
            leaves[child.index] = child
            total_error += child.error
            heapq.heappush(heap, (-child.error, child.index))
        subdivisions += 1

    ordered = [leaves[k] for k in sorted(leaves)]
    value = np.sum([sx.value for sx in ordered], axis=0)
    error_bound = float(sum(sx.error for sx in ordered))
    converged = error_bound <= tol
    if value.shape == (1,):
        value = float(value[0])
    return Quadrature(value=value, error_bound=error_bound,
                      subdivisions=subdivisions, converged=converged)


# ---------------------------------------------------------------------------
# weighted Duistermaat-Heckman moments


@dataclass(frozen=True)
class DHMoments:
    """mass = int g(xbar) P(x) dx and first_moment = int g(xbar) P(x) x dx."""

    mass: Fraction | float
    first_moment: tuple
    exact: bool
    error_bound: float = 0.0

    @property
    def barycenter(self) -> tuple:
        return tuple(m / self.mass for m in self.first_moment)


def dh_moments(p, dh: DHDensity, g: WeightFn, projection: Sequence[Vec]) -> DHMoments:
    """Weighted mass and first moment over a polytope; exact whenever the
    weight expands to a polynomial, certified numeric otherwise."""
    vp = _as_vpolytope(p)
    n = vp.dim
    dh.check_positive_on(vp.vertices)
    projected = [tuple(dot(row, v) for row in projection) for v in vp.vertices]
    check_weight_positive(g, projected)

    # constant weights cancel in every downstream ratio; drop them for
    # exactness even when the constant itself is irrational
    const = weight_constant_value(g)
    if const is not None:
        g = ConstantWeight(Fraction(1))

    g_poly = weight_as_polynomial(g, projection, n)
    if g_poly is not None:
        integrand = g_poly * dh.polynomial
        mass = integrate_poly(vp, integrand)
        if mass <= 0:
            raise ValueError("nonpositive mass: density/weight not positive on polytope")
        moment = tuple(integrate_poly(vp, integrand * Polynomial.coordinate(n, i))
                       for i in range(n))
        return DHMoments(mass=mass, first_moment=moment, exact=True)

    g_eval = weight_evaluator(g, projection, n)

    def f(pts: np.ndarray) -> np.ndarray:
        w = g_eval(pts) * dh.eval_float(pts)
        return np.column_stack([w] + [w * pts[:, i] for i in range(n)])

    quad = integrate_numeric(vp, f, tol=1e-12)
    values = np.atleast_1d(quad.value)
    mass = float(values[0])
    if mass <= 0:
        raise ValueError("nonpositive mass: density/weight not positive on polytope")
    moment = tuple(float(v) for v in values[1:])
    return DHMoments(mass=mass, first_moment=moment, exact=False,
                     error_bound=quad.error_bound)
