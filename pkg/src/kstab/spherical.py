"""Combinatorial model of a polarized spherical variety.

The input is the boundary-divisor data of a chosen eigensection, a colored
fan, and the valuation cone.  From it we build the section polytope, the
piecewise-linear support functions attached to the section and to the
anticanonical section (the latter restricting to the log discrepancy on the
valuation cone), the finite candidate ray set over which the stability
thresholds are minimized, and the level-k truncations of the expected
vanishing order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .geom import (
    Cone,
    EmptyPolytopeError,
    HPolytope,
    UnboundedPolytopeError,
    Vec,
    dot,
    lex_sorted,
    primitive,
    rowspace_solution,
    vadd,
    vec,
    vertex_enum,
    vneg,
    vscale,
    zero_vec,
)
from .quad import (
    ConstantWeight,
    DHDensity,
    WeightFn,
    weight_constant_value,
    weight_evaluator,
    weight_as_polynomial,
)


class SphericalDataError(Exception):
    pass


class NotQCartierError(SphericalDataError):
    pass


class EmptyCandidateSetError(SphericalDataError):
    pass


class TooManyPointsError(SphericalDataError):
    pass


class OutsideFanSupportError(SphericalDataError):
    pass


LATTICE_POINT_LIMIT = 10 ** 7


@dataclass(frozen=True)
class DivisorRecord:
    """A B-stable prime divisor: its image rho(D) in N and its coefficient
    in the divisor of the chosen section."""

    name: str
    rho: Vec
    coeff: Fraction
    is_color: bool = False


@dataclass(frozen=True)
class ColoredConeData:
    """One cone of the colored fan.

    ``generators`` are the valuation-cone generators; color images are added
    from the referenced records.  ``divisor_names`` lists exactly the
    B-stable divisors containing the orbit (incidence is input data, not
    inferred).
    """

    generators: tuple[Vec, ...]
    divisor_names: tuple[str, ...]


@dataclass(frozen=True)
class PLPiece:
    cone: Cone
    linear: Vec  # element of M tensor Q defining the function on the cone


@dataclass(frozen=True)
class PLFunction:
    """Piecewise-linear function on the support of the colored fan."""

    pieces: tuple[PLPiece, ...]

    def __call__(self, v: Vec) -> Fraction:
        v = vec(v)
        for piece in self.pieces:
            if piece.cone.contains(v):
                return dot(piece.linear, v)
        raise OutsideFanSupportError(f"{v} lies outside the fan support")

    def check_continuity(self):
        """Exact agreement of adjacent pieces on their shared face."""
        for a, b in itertools.combinations(self.pieces, 2):
            face = a.cone.intersect(b.cone)
            diff = vsub_vec(a.linear, b.linear)
            for g in list(face.rays) + list(face.lineality):
                if dot(diff, g) != 0:
                    raise SphericalDataError(
                        "piecewise-linear pieces disagree on a shared face")


def vsub_vec(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def section_polytope(divisors: Sequence[DivisorRecord]) -> HPolytope:
    """{m : <rho(D), m> + n_D >= 0 for every B-stable divisor D}."""
    if not divisors:
        raise SphericalDataError("no divisor records")
    dim = len(divisors[0].rho)
    from .geom import AffineForm
    forms = [AffineForm(d.rho, d.coeff) for d in divisors]
    try:
        return HPolytope(dim, forms)
    except EmptyPolytopeError as e:
        raise SphericalDataError(f"section polytope is empty: {e}") from e
    except UnboundedPolytopeError as e:
        raise SphericalDataError(
            f"section polytope is unbounded (bundle not ample?): {e}") from e


def build_pl_function(divisors: Sequence[DivisorRecord],
                      fan: Sequence[ColoredConeData]) -> PLFunction:
    """Per-cone linear forms m_Y with <rho(D), m_Y> = n_D for every incident
    divisor; underdetermined directions are set to zero (row-space solution).
    """
    by_name = {d.name: d for d in divisors}
    pieces = []
    for cone_data in fan:
        incident = []
        for name in cone_data.divisor_names:
            if name not in by_name:
                raise SphericalDataError(f"fan references unknown divisor {name!r}")
            incident.append(by_name[name])
        if not incident:
            raise SphericalDataError("colored cone with no incident divisors")
        rows = [d.rho for d in incident]
        rhs = [d.coeff for d in incident]
        sol = rowspace_solution(rows, rhs)
        if sol is None:
            raise NotQCartierError(
                "inconsistent per-cone system: no piecewise-linear function "
                "interpolates the divisor coefficients")
        gens = list(cone_data.generators)
        gens += [by_name[n].rho for n in cone_data.divisor_names
                 if by_name[n].is_color]
        dim = len(sol)
        pieces.append(PLPiece(Cone(dim, gens), sol))
    pl = PLFunction(tuple(pieces))
    pl.check_continuity()
    return pl


def candidate_set_E(fan: Sequence[ColoredConeData], divisors: Sequence[DivisorRecord],
                    valuation_cone: Cone) -> list[Vec]:
    """Primitive generators of the extreme rays of every (fan cone meet
    valuation cone); when an intersection carries lineality its basis is
    appended with both signs."""
    by_name = {d.name: d for d in divisors}
    rays: set[Vec] = set()
    for cone_data in fan:
        gens = list(cone_data.generators)
        gens += [by_name[n].rho for n in cone_data.divisor_names
                 if n in by_name and by_name[n].is_color]
        piece = Cone(valuation_cone.dim, gens).intersect(valuation_cone)
        rays.update(piece.rays)
        for l in piece.lineality:
            rays.add(primitive(l))
            rays.add(primitive(vneg(l)))
    if not rays:
        raise EmptyCandidateSetError(
            "all fan/valuation intersections are trivial")
    return lex_sorted(rays)


def lattice_points(p: HPolytope, k: int) -> list[Vec]:
    """Integer points of the dilate k*p, in lexicographic order."""
    if k < 1:
        raise ValueError("dilation level must be >= 1")
    dilated = p.scaled(k)
    verts = dilated.vertex_list
    n = p.dim
    lo = [min(v[i] for v in verts) for i in range(n)]
    hi = [max(v[i] for v in verts) for i in range(n)]
    import math
    ranges = []
    count = 1
    for i in range(n):
        a = math.ceil(lo[i])
        b = math.floor(hi[i])
        if b < a:
            return []
        count *= (b - a + 1)
        if count > LATTICE_POINT_LIMIT:
            raise TooManyPointsError(f"more than {LATTICE_POINT_LIMIT} candidates")
        ranges.append(range(a, b + 1))
    out = []
    for tup in itertools.product(*ranges):
        x = vec(tup)
        if dilated.contains(x):
            out.append(x)
    return out


@dataclass
class SphericalInput:
    """Validated combinatorial description of a polarized spherical variety."""

    rank: int
    dim_x: int
    divisors: tuple[DivisorRecord, ...]
    anticanonical_divisors: tuple[DivisorRecord, ...]
    fan: tuple[ColoredConeData, ...]
    valuation_cone: Cone
    dh: DHDensity
    projection: tuple[Vec, ...] = ()
    complete: bool = True

    def __post_init__(self):
        if self.dh.dim != self.rank:
            raise SphericalDataError("density dimension does not match rank")
        self._validate_fan()
        self.dh.check_positive_on(self.section_polytope_v.vertices)
        if self.complete:
            self._check_completeness()

    # -- derived geometry ----------------------------------------------------

    @cached_property
    def section_polytope(self) -> HPolytope:
        return section_polytope(self.divisors)

    @cached_property
    def section_polytope_v(self):
        return vertex_enum(self.section_polytope)

    @cached_property
    def anticanonical_polytope(self) -> HPolytope:
        return section_polytope(self.anticanonical_divisors)

    @cached_property
    def section_support(self) -> PLFunction:
        """PL function of the chosen section of the polarization."""
        return build_pl_function(self.divisors, self.fan)

    @cached_property
    def log_discrepancy(self) -> PLFunction:
        """PL function of the anticanonical section; equals the log
        discrepancy on the valuation cone."""
        return build_pl_function(self.anticanonical_divisors, self.fan)

    @cached_property
    def candidates(self) -> list[Vec]:
        return candidate_set_E(self.fan, self.divisors, self.valuation_cone)

    @property
    def is_horospherical(self) -> bool:
        return self.valuation_cone.is_full_space

    def full_cone(self, cone_data: ColoredConeData) -> Cone:
        by_name = {d.name: d for d in self.divisors}
        gens = list(cone_data.generators)
        gens += [by_name[n].rho for n in cone_data.divisor_names
                 if n in by_name and by_name[n].is_color]
        return Cone(self.rank, gens)

    # -- validation ----------------------------------------------------------

    def _validate_fan(self):
        by_name = {d.name: d for d in self.divisors}
        for cone_data in self.fan:
            cone = self.full_cone(cone_data)
            if not cone.is_strictly_convex:
                raise SphericalDataError("colored cone is not strictly convex")
            for name in cone_data.divisor_names:
                rec = by_name.get(name)
                if rec is not None and rec.is_color and all(c == 0 for c in rec.rho):
                    raise SphericalDataError(
                        f"color {name!r} has rho = 0 inside a colored cone")
            meet = cone.intersect(self.valuation_cone)
            probe = meet.relative_interior_point()
            if not cone.in_relative_interior(probe):
                raise SphericalDataError(
                    "relative interior of a colored cone misses the valuation cone")

    def _check_completeness(self):
        """Necessary (ray-wise plus seeded random sampling) check that the
        valuation cone is covered by the fan support."""
        cones = [self.full_cone(c) for c in self.fan]

        def covered(x: Vec) -> bool:
            return any(c.contains(x) for c in cones)

        vrays = list(self.valuation_cone.rays)
        vlin = list(self.valuation_cone.lineality)
        for r in vrays:
            if not covered(r):
                raise SphericalDataError(
                    f"valuation cone ray {r} is not covered by the fan")
        for l in vlin:
            for s in (l, vneg(l)):
                if not covered(s):
                    raise SphericalDataError(
                        f"valuation cone direction {s} is not covered by the fan")
        rng = random.Random(7)
        gens = vrays + vlin + [vneg(l) for l in vlin]
        for _ in range(64):
            x = zero_vec(self.rank)
            for g in gens:
                x = vadd(x, vscale(g, Fraction(rng.randint(0, 9), 1)))
            if not covered(x):
                raise SphericalDataError(
                    f"sampled valuation {x} is not covered by the fan")

    # -- level-k sums ----------------------------------------------------------

    def module_dimension(self, m: Vec, k: int) -> Fraction:
        """dim of the level-k module attached to lattice point m, from the
        density factors: prod ((k*f(m/k) + rho_pair) / rho_pair)^mult."""
        if not self.dh.supports_dimension_counts:
            raise SphericalDataError(
                "density lacks root data; dimension counts unavailable")
        total = Fraction(1)
        for f in self.dh.factors:
            val = dot(f.form.normal, m) + k * f.form.offset
            total *= ((val + f.rho_pair) / f.rho_pair) ** f.multiplicity
        return total

    def level_sum(self, v: Vec, k: int, p, g: WeightFn | None = None,
                  use_log_discrepancy: bool = True) -> tuple[Fraction, Fraction, Fraction]:
        """Finite level-k truncation (S_k, d_k, T_k) of the expected
        vanishing order along v.

        S_k is the (g-weighted) mean of ((<m, v> + k l(v)) / k)^p over the
        lattice points of the dilated polytope, each weighted by its module
        dimension; d_k is the total (unweighted) dimension; T_k the maximum
        value.
        """
        v = vec(v)
        k = int(k)
        pl = self.log_discrepancy if use_log_discrepancy else self.section_support
        lv = pl(v)
        pts = lattice_points(self.section_polytope, k)
        if g is None:
            g = ConstantWeight(Fraction(1))
        const = weight_constant_value(g)
        g_exact_poly = None
        g_eval = None
        if const is not None:
            pass
        else:
            g_exact_poly = weight_as_polynomial(g, self.projection, self.rank)
            if g_exact_poly is None:
                g_eval = weight_evaluator(g, self.projection, self.rank)
        s_num = Fraction(0) if g_eval is None else 0.0
        s_den = Fraction(0) if g_eval is None else 0.0
        d_k = Fraction(0)
        t_k = None
        for m in pts:
            dim_m = self.module_dimension(m, k)
            d_k += dim_m
            value = (dot(m, v) + k * lv) / k
            if t_k is None or value > t_k:
                t_k = value
            if const is not None:
                w = dim_m
            elif g_exact_poly is not None:
                w = g_exact_poly(tuple(c / k for c in m)) * dim_m
            else:
                import numpy as np
                w = float(g_eval(np.array([[float(c) / k for c in m]]))[0]) * float(dim_m)
            if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
                term = w * value ** int(p)
            else:
                term = float(w) * float(value) ** float(p)
                s_num = float(s_num)
                s_den = float(s_den)
            s_num += term
            s_den += w
        if s_den == 0:
            raise SphericalDataError("empty lattice point set at this level")
        return s_num / s_den, d_k, t_k if t_k is not None else Fraction(0)
