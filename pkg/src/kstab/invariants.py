"""Stability thresholds from polytope data.

Every invariant here is a minimum over the finite candidate ray set of the
valuation cone: the p-th-moment threshold delta^(p), the tangency threshold
alpha, their weighted variants, and the Ding-type verdicts obtained by
testing the weighted barycenter against the dual of the negated valuation
cone.  Rational inputs give exact rational answers; numeric paths carry
certified error bounds and never decide a boundary question by float
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geom import Cone, Vec, dot, vec
from .quad import (
    ConstantWeight,
    DHMoments,
    Polynomial,
    WeightFn,
    dh_moments,
    integrate_numeric,
    integrate_poly,
    weight_constant_value,
)
from .spherical import PLFunction, SphericalInput


class InvariantError(Exception):
    pass


class KltViolationError(InvariantError):
    pass


class NegativeValuesError(InvariantError):
    pass


class InternalInconsistencyError(InvariantError):
    pass


# ---------------------------------------------------------------------------
# numbers that remember whether they are exact


@dataclass(frozen=True)
class Num:
    """A real number, either exact rational or a float with an error bound."""

    value: float
    exact: Fraction | None = None
    error: float = 0.0

    @classmethod
    def from_fraction(cls, f: Fraction) -> "Num":
        return cls(value=float(f), exact=Fraction(f), error=0.0)

    @classmethod
    def from_float(cls, v: float, error: float) -> "Num":
        return cls(value=float(v), exact=None, error=float(error))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


def _is_integer(p) -> bool:
    if isinstance(p, int):
        return True
    if isinstance(p, Fraction):
        return p.denominator == 1
    if isinstance(p, float):
        return p.is_integer()
    return False


# ---------------------------------------------------------------------------
# S^(p) and T


def _value_form(si: SphericalInput, v: Vec, pl: PLFunction):
    """Affine form x |-> <x, v> + l(v) on the section polytope, validated
    to be nonnegative there."""
    lv = pl(v)
    verts = si.section_polytope_v.vertices
    values = [dot(x, v) + lv for x in verts]
    if any(val < 0 for val in values):
        raise NegativeValuesError(
            f"<x, v> + l(v) negative on the section polytope for v={v}")
    return lv, max(values)


def T_max(si: SphericalInput, v, pl: PLFunction | None = None) -> Fraction:
    """max over the section polytope of <x, v> + l(v), exact."""
    v = vec(v)
    pl = pl or si.section_support
    _lv, tmax = _value_form(si, v, pl)
    return tmax


def S_p(si: SphericalInput, v, p, pl: PLFunction | None = None,
        g: WeightFn | None = None) -> Num:
    """p-th moment of the expected vanishing order along v:
    int g(xbar) P (.)^p / int g(xbar) P.  Exact for integer p and exact
    weights; certified numeric otherwise."""
    v = vec(v)
    pl = pl or si.section_support
    lv, _ = _value_form(si, v, pl)
    g = g or ConstantWeight(Fraction(1))
    poly = si.section_polytope_v
    n = si.rank

    from .quad import weight_as_polynomial, weight_evaluator
    const = weight_constant_value(g)
    if const is not None:
        g = ConstantWeight(Fraction(1))
    g_poly = weight_as_polynomial(g, si.projection, n)

    base_form_poly = Polynomial(n, {(0,) * n: lv})
    for i, c in enumerate(v):
        if c != 0:
            e = [0] * n
            e[i] = 1
            base_form_poly = base_form_poly + Polynomial(n, {tuple(e): c})

    if _is_integer(p) and g_poly is not None:
        pint = int(p)
        weight = g_poly * si.dh.polynomial
        numerator = integrate_poly(poly, weight * base_form_poly.pow_int(pint))
        denominator = integrate_poly(poly, weight)
        if denominator <= 0:
            raise InvariantError("nonpositive density mass")
        return Num.from_fraction(numerator / denominator)

    pf = float(p)
    dh_eval = si.dh.eval_float
    g_eval = weight_evaluator(g, si.projection, n)
    vf = np.array([float(c) for c in v])
    lvf = float(lv)

    def f(pts: np.ndarray) -> np.ndarray:
        w = g_eval(pts) * dh_eval(pts)
        base = np.maximum(pts @ vf + lvf, 0.0)
        return np.column_stack([w * base ** pf, w])

    quad = integrate_numeric(poly, f, tol=1e-12)
    num, den = (float(x) for x in np.atleast_1d(quad.value))
    if den <= 0:
        raise InvariantError("nonpositive density mass")
    ratio = num / den
    err = quad.error_bound * (1.0 + abs(ratio)) / max(den, 1e-300)
    return Num.from_float(ratio, err)


# ---------------------------------------------------------------------------
# report structures


@dataclass(frozen=True)
class RayEvaluation:
    ray: Vec
    log_discrepancy: Fraction      # A = h(v)
    s_p: Num
    t_max: Fraction
    ratio_delta: Num               # A / S^(1/p)
    ratio_alpha: Fraction          # A / T
    anomalies: tuple[str, ...] = ()


@dataclass(frozen=True)
class InvariantReport:
    kind: str                      # "delta" | "alpha" | "delta_g"
    p: float | int | Fraction
    value: Num
    minimizing_rays: tuple[Vec, ...]
    table: tuple[RayEvaluation, ...]
    barycenter: tuple[Num, ...] | None = None
    notes: tuple[str, ...] = ()


def _ray_log_discrepancy(si: SphericalInput, v: Vec) -> Fraction:
    a = si.log_discrepancy(v)
    if a <= 0:
        raise KltViolationError(f"log discrepancy {a} <= 0 at ray {v}")
    return a


def _root_ratio(a: Fraction, s: Num, p) -> Num:
    """A / S^(1/p) with the exactness that p permits."""
    if s.is_exact:
        if s.exact == 0:
            return Num.from_float(float("inf"), 0.0)
        if _is_integer(p) and int(p) == 1:
            return Num.from_fraction(a / s.exact)
        val = float(a) / float(s.exact) ** (1.0 / float(p))
        return Num.from_float(val, 1e-14 * (1.0 + abs(val)))
    if s.value <= 0:
        return Num.from_float(float("inf"), 0.0)
    val = float(a) / s.value ** (1.0 / float(p))
    lo = float(a) / (s.value + s.error) ** (1.0 / float(p))
    hi = float(a) / max(s.value - s.error, 1e-300) ** (1.0 / float(p))
    return Num.from_float(val, max(hi - val, val - lo))


def _argmin_ratios(ratios: Sequence[tuple[Vec, Num, Fraction | None]]):
    """Minimum of per-ray ratios; uses p-th-power exact comparison keys when
    available (third component), float values otherwise."""
    finite = [(ray, num, key) for ray, num, key in ratios
              if not (num.value == float("inf"))]
    if not finite:
        raise InvariantError("no finite candidate ratios")
    if all(key is not None for _, _, key in finite):
        best = min(key for _, _, key in finite)
        mins = [ray for ray, _, key in finite if key == best]
        val = min((num for _, num, key in finite if key == best),
                  key=lambda n: n.value)
        return val, tuple(mins)
    best = min(num.value for _, num, _ in finite)
    mins = [ray for ray, num, _ in finite if num.value == best]
    val = min((num for _, num, _ in finite if num.value == best),
              key=lambda n: n.error)
    return val, tuple(mins)


def delta_p(si: SphericalInput, p, g: WeightFn | None = None) -> InvariantReport:
    """min over candidate rays of A(v) / S^(p)(v)^(1/p), with the per-ray
    evaluation table."""
    rows = []
    keys = []
    for ray in si.candidates:
        a = _ray_log_discrepancy(si, ray)
        s = S_p(si, ray, p, pl=si.section_support, g=g)
        t = T_max(si, ray, si.section_support)
        ratio = _root_ratio(a, s, p)
        ratio_alpha = a / t if t > 0 else Fraction(0)
        anomalies = ()
        if t <= 0:
            anomalies = ("vanishing-maximum",)
            ratio = Num.from_float(float("inf"), 0.0)
            ratio_alpha = None
        rows.append(RayEvaluation(ray, a, s, t, ratio,
                                  ratio_alpha if ratio_alpha is not None else Fraction(0),
                                  anomalies))
        # exact comparison key: A^p / S when S exact and p integral
        if s.is_exact and _is_integer(p) and s.exact > 0:
            keys.append((ray, ratio, a ** int(p) / s.exact))
        elif s.is_exact and s.exact == 0:
            keys.append((ray, ratio, None))
        else:
            keys.append((ray, ratio, None))
    value, mins = _argmin_ratios(keys)
    return InvariantReport(kind="delta", p=p, value=value,
                           minimizing_rays=mins, table=tuple(rows))


def alpha(si: SphericalInput) -> InvariantReport:
    """min over candidate rays and over the polytope of A(v)/(<m,v>+l(v)),
    exact rational."""
    rows = []
    ratios = []
    for ray in si.candidates:
        a = _ray_log_discrepancy(si, ray)
        t = T_max(si, ray, si.section_support)
        s = S_p(si, ray, 1, pl=si.section_support)
        if t <= 0:
            rows.append(RayEvaluation(ray, a, s, t, Num.from_float(float("inf"), 0.0),
                                      Fraction(0), ("vanishing-maximum",)))
            continue
        ratio = a / t
        rows.append(RayEvaluation(ray, a, s, t, _root_ratio(a, s, 1), ratio))
        ratios.append((ray, Num.from_fraction(ratio), ratio))
    value, mins = _argmin_ratios(ratios)
    return InvariantReport(kind="alpha", p=1, value=value,
                           minimizing_rays=mins, table=tuple(rows))


# ---------------------------------------------------------------------------
# weighted barycenters, delta^g, beta^g


def moments_g(si: SphericalInput, g: WeightFn | None = None) -> DHMoments:
    g = g or ConstantWeight(Fraction(1))
    return dh_moments(si.section_polytope_v, si.dh, g, si.projection)


def barycenter_g(si: SphericalInput, g: WeightFn | None = None) -> tuple[Num, ...]:
    """Weighted barycenter int g(xbar) P x / int g(xbar) P of the section
    polytope."""
    m = moments_g(si, g)
    if m.exact:
        return tuple(Num.from_fraction(c) for c in m.barycenter)
    scale = m.error_bound / abs(m.mass)
    return tuple(Num.from_float(float(c), scale * (1.0 + abs(float(c))))
                 for c in m.barycenter)


def delta_g(si: SphericalInput, g: WeightFn | None = None) -> InvariantReport:
    """Weighted threshold min over rays of A / (A + <bar, v>), for the
    anticanonical polarization."""
    bary = barycenter_g(si, g)
    exact_bary = all(b.is_exact for b in bary)
    rows = []
    ratios = []
    notes: list[str] = []
    for ray in si.candidates:
        a = _ray_log_discrepancy(si, ray)
        t = T_max(si, ray, si.log_discrepancy)
        if exact_bary:
            denom = a + dot(tuple(b.exact for b in bary), ray)
            if denom <= 0:
                notes.append(f"ray {ray}: nonpositive weighted mean {denom}")
                rows.append(RayEvaluation(ray, a, Num.from_fraction(max(denom, Fraction(0))),
                                          t, Num.from_float(float("inf"), 0.0),
                                          a / t if t > 0 else Fraction(0),
                                          ("nonpositive-denominator",)))
                continue
            ratio = a / denom
            rows.append(RayEvaluation(ray, a, Num.from_fraction(denom), t,
                                      Num.from_fraction(ratio),
                                      a / t if t > 0 else Fraction(0)))
            ratios.append((ray, Num.from_fraction(ratio), ratio))
        else:
            vals = np.array([b.value for b in bary])
            errs = np.array([b.error for b in bary])
            rayf = np.array([float(c) for c in ray])
            denom = float(a) + float(vals @ rayf)
            derr = float(errs @ np.abs(rayf))
            if denom - derr <= 0:
                notes.append(f"ray {ray}: weighted mean not certifiably positive")
                rows.append(RayEvaluation(ray, a, Num.from_float(denom, derr), t,
                                          Num.from_float(float("inf"), 0.0),
                                          a / t if t > 0 else Fraction(0),
                                          ("nonpositive-denominator",)))
                continue
            ratio = float(a) / denom
            err = float(a) * derr / (denom * (denom - derr))
            rows.append(RayEvaluation(ray, a, Num.from_float(denom, derr), t,
                                      Num.from_float(ratio, err),
                                      a / t if t > 0 else Fraction(0)))
            ratios.append((ray, Num.from_float(ratio, err), None))
    value, mins = _argmin_ratios(ratios)
    return InvariantReport(kind="delta_g", p=1, value=value, minimizing_rays=mins,
                           table=tuple(rows), barycenter=bary, notes=tuple(notes))


@dataclass(frozen=True)
class BetaResult:
    ray: Vec
    from_integral: Num     # A - S^g(v) by direct integration
    from_barycenter: Num   # -<bar^g, v>


BETA_CONSISTENCY_TOL = 1e-8


def beta_g(si: SphericalInput, v, g: WeightFn | None = None) -> BetaResult:
    """Ding slope A(v) - S^g(v) computed along two independent routes which
    must agree: direct integration, and pairing the weighted barycenter."""
    v = vec(v)
    a = si.log_discrepancy(v)
    s = S_p(si, v, 1, pl=si.log_discrepancy, g=g)
    if s.is_exact:
        direct = Num.from_fraction(a - s.exact)
    else:
        direct = Num.from_float(float(a) - s.value, s.error)
    bary = barycenter_g(si, g)
    if all(b.is_exact for b in bary):
        pairing = Num.from_fraction(-dot(tuple(b.exact for b in bary), v))
    else:
        vals = np.array([b.value for b in bary])
        errs = np.array([b.error for b in bary])
        vf = np.array([float(c) for c in v])
        pairing = Num.from_float(-float(vals @ vf), float(errs @ np.abs(vf)))
    if direct.is_exact and pairing.is_exact:
        if direct.exact != pairing.exact:
            raise InternalInconsistencyError(
                f"beta routes disagree exactly: {direct.exact} vs {pairing.exact}")
    else:
        tol = BETA_CONSISTENCY_TOL + direct.error + pairing.error
        if abs(direct.value - pairing.value) > tol:
            raise InternalInconsistencyError(
                f"beta routes disagree: {direct.value} vs {pairing.value}")
    return BetaResult(ray=v, from_integral=direct, from_barycenter=pairing)


# ---------------------------------------------------------------------------
# Ding verdicts


@dataclass(frozen=True)
class DingVerdict:
    barycenter: tuple[Num, ...]
    dual_cone: Cone
    semistable: bool | None
    polystable: bool | None
    witness: dict | None = None
    exact: bool = True

    @property
    def verdict(self) -> str:
        if self.semistable is None or self.polystable is None:
            return "indeterminate"
        if self.polystable:
            return "polystable"
        if self.semistable:
            return "semistable"
        return "unstable"


def ding_check(si: SphericalInput, g: WeightFn | None = None,
               quad_tol: float = 1e-12) -> DingVerdict:
    """Stability verdict from the membership of the weighted barycenter in
    the dual cone of the negated valuation cone.

    With exact barycenters the verdict is exact.  Numeric barycenters are
    only judged through certified enclosures; if the enclosure touches a
    facet the verdict is indeterminate rather than guessed.
    """
    g = g or ConstantWeight(Fraction(1))
    const = weight_constant_value(g)
    if const is not None:
        g = ConstantWeight(Fraction(1))
    m = dh_moments_with_tol(si, g, quad_tol)
    if m.exact:
        bary = tuple(Num.from_fraction(c) for c in m.barycenter)
    else:
        scale = m.error_bound / abs(m.mass)
        bary = tuple(Num.from_float(float(c), scale * (1.0 + abs(float(c))))
                     for c in m.barycenter)

    neg_v = si.valuation_cone.negated()
    facets = neg_v.rays          # facet functionals of the dual cone
    equalities = neg_v.lineality  # must-vanish functionals of the dual cone
    dual = neg_v.dual()

    if all(b.is_exact for b in bary):
        b = tuple(x.exact for x in bary)
        semistable = True
        polystable = True
        witness = None
        for l in equalities:
            val = dot(l, b)
            if val != 0:
                semistable = polystable = False
                witness = {"kind": "equality", "functional": l, "value": val}
                break
        if semistable:
            for r in facets:
                val = dot(r, b)
                if val < 0:
                    semistable = polystable = False
                    witness = {"kind": "facet", "functional": r, "value": val}
                    break
                if val == 0:
                    polystable = False
                    if witness is None:
                        witness = {"kind": "boundary-facet", "functional": r,
                                   "value": val}
        return DingVerdict(bary, dual, semistable, polystable, witness, exact=True)

    vals = np.array([x.value for x in bary])
    errs = np.array([x.error for x in bary])

    def enclosure(functional: Vec) -> tuple[float, float]:
        f = np.array([float(c) for c in functional])
        center = float(f @ vals)
        radius = float(np.abs(f) @ errs)
        return center - radius, center + radius

    # certified violations decide "unstable" regardless of other ambiguity;
    # otherwise any enclosure touching a boundary leaves the verdict open
    ambiguous = None
    for l in equalities:
        lo, hi = enclosure(l)
        if lo > 0 or hi < 0:
            witness = {"kind": "equality", "functional": l, "value": (lo + hi) / 2}
            return DingVerdict(bary, dual, False, False, witness, exact=False)
        if not (lo == 0 and hi == 0) and ambiguous is None:
            ambiguous = {"kind": "equality", "functional": l, "enclosure": (lo, hi)}
    for r in facets:
        lo, hi = enclosure(r)
        if hi < 0:
            witness = {"kind": "facet", "functional": r, "value": (lo + hi) / 2}
            return DingVerdict(bary, dual, False, False, witness, exact=False)
        if lo <= 0 and ambiguous is None:
            ambiguous = {"kind": "facet", "functional": r, "enclosure": (lo, hi)}
    if ambiguous is not None:
        return DingVerdict(bary, dual, None, None, ambiguous, exact=False)
    # no equality functionals and every facet certified strictly positive
    return DingVerdict(bary, dual, True, True, None, exact=False)


def dh_moments_with_tol(si: SphericalInput, g: WeightFn, quad_tol: float) -> DHMoments:
    from .quad import weight_as_polynomial, weight_evaluator
    vp = si.section_polytope_v
    n = si.rank
    g_poly = weight_as_polynomial(g, si.projection, n)
    if g_poly is not None or weight_constant_value(g) is not None:
        return dh_moments(vp, si.dh, g, si.projection)
    g_eval = weight_evaluator(g, si.projection, n)
    dh_eval = si.dh.eval_float

    def f(pts: np.ndarray) -> np.ndarray:
        w = g_eval(pts) * dh_eval(pts)
        return np.column_stack([w] + [w * pts[:, i] for i in range(n)])

    quad = integrate_numeric(vp, f, tol=quad_tol)
    values = np.atleast_1d(quad.value)
    mass = float(values[0])
    if mass <= 0:
        raise InvariantError("nonpositive weighted mass")
    return DHMoments(mass=mass, first_moment=tuple(float(v) for v in values[1:]),
                     exact=False, error_bound=quad.error_bound)
