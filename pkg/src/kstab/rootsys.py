"""Root-system combinatorics for Duistermaat-Heckman densities.

Supported Cartan types: A1..A8, B2..B8, C2..C8, D2..D8, G2.  Roots are
realized internally in exact Euclidean coordinates; user-facing weights are
written in the fundamental-weight basis, where pairing a weight with the
i-th simple coroot reads off coordinate i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .geom import (
    HPolytope,
    VPolytope,
    Vec,
    affine_form,
    dot,
    invert_matrix,
    solve_linear,
    unit_vec,
    vadd,
    vec,
    vertex_enum,
    vneg,
    vscale,
    vsub,
)
from .quad import AffineForm, DHDensity, DHFactor, ZeroFactorError


class RootSystemError(Exception):
    pass


class OrbitTooLargeError(RootSystemError):
    pass


ORBIT_LIMIT = 10 ** 6

_SUPPORTED = {"A": range(1, 9), "B": range(2, 9), "C": range(2, 9),
              "D": range(2, 9), "G": (2,)}


def _simple_roots_euclidean(letter: str, n: int) -> list[Vec]:
    F = Fraction
    if letter == "A":
        # in R^{n+1}
        return [tuple(F(1 if j == i else (-1 if j == i + 1 else 0))
                      for j in range(n + 1)) for i in range(n)]
    if letter == "B":
        roots = [tuple(F(1 if j == i else (-1 if j == i + 1 else 0))
                       for j in range(n)) for i in range(n - 1)]
        roots.append(unit_vec(n - 1, n))
        return roots
    if letter == "C":
        roots = [tuple(F(1 if j == i else (-1 if j == i + 1 else 0))
                       for j in range(n)) for i in range(n - 1)]
        roots.append(vscale(unit_vec(n - 1, n), 2))
        return roots
    if letter == "D":
        roots = [tuple(F(1 if j == i else (-1 if j == i + 1 else 0))
                       for j in range(n)) for i in range(n - 1)]
        roots.append(tuple(F(1 if j >= n - 2 else 0) for j in range(n)))
        return roots
    if letter == "G":
        # realized in the plane x+y+z = 0 of R^3
        return [vec([1, -1, 0]), vec([-2, 1, 1])]
    raise RootSystemError(f"unsupported Cartan type {letter}{n}")


_POSITIVE_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "G": lambda n: 6,
}

_WEYL_ORDER = {
    "A": lambda n: _fact(n + 1),
    "B": lambda n: _fact(n) * 2 ** n,
    "C": lambda n: _fact(n) * 2 ** n,
    "D": lambda n: _fact(n) * 2 ** (n - 1),
    "G": lambda n: 12,
}


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _pair(x: Vec, root: Vec) -> Fraction:
    """<x, root^vee> = 2 (x, root) / (root, root) in Euclidean coordinates."""
    return 2 * dot(x, root) / dot(root, root)


@dataclass(frozen=True)
class RootSystem:
    letter: str
    rank: int

    def __post_init__(self):
        if self.letter not in _SUPPORTED or self.rank not in _SUPPORTED[self.letter]:
            raise RootSystemError(
                f"unsupported Cartan type {self.letter}{self.rank}")

    @property
    def cartan_type(self) -> str:
        return f"{self.letter}{self.rank}"

    @cached_property
    def simple_roots_euclidean(self) -> tuple[Vec, ...]:
        return tuple(_simple_roots_euclidean(self.letter, self.rank))

    @cached_property
    def positive_roots_euclidean(self) -> tuple[Vec, ...]:
        simple = self.simple_roots_euclidean
        roots: set[Vec] = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for r in frontier:
                for s in simple:
                    refl = vsub(r, vscale(s, _pair(r, s)))
                    if refl not in roots and vneg(refl) not in roots:
                        roots.add(refl)
                        nxt.append(refl)
            frontier = nxt
        positive = []
        for r in sorted(roots):
            coeffs = solve_linear(
                [tuple(s[i] for s in simple) for i in range(len(r))], r)
            assert coeffs is not None
            if all(c >= 0 for c in coeffs):
                positive.append(r)
        expected = _POSITIVE_COUNT[self.letter](self.rank)
        if len(positive) != expected:
            raise AssertionError(
                f"{self.cartan_type}: found {len(positive)} positive roots, "
                f"expected {expected}")
        return tuple(positive)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Entry (i, j) is the pairing of alpha_j with the i-th simple coroot."""
        simple = self.simple_roots_euclidean
        return tuple(tuple(int(_pair(aj, ai)) for aj in simple) for ai in simple)

    @cached_property
    def coroot_covectors(self) -> tuple[Vec, ...]:
        """Per positive root alpha, the covector c with <lam, alpha^vee> =
        sum_i c_i lam_i for lam in fundamental-weight coordinates."""
        simple = self.simple_roots_euclidean
        out = []
        for alpha in self.positive_roots_euclidean:
            corr = vscale(alpha, Fraction(2) / dot(alpha, alpha))
            # expand over simple coroots
            simple_coroots = [vscale(s, Fraction(2) / dot(s, s)) for s in simple]
            coeffs = solve_linear(
                [tuple(sc[i] for sc in simple_coroots) for i in range(len(corr))],
                corr)
            assert coeffs is not None
            out.append(tuple(coeffs))
        return tuple(out)

    @cached_property
    def rho_pairings(self) -> tuple[Fraction, ...]:
        """<rho, alpha^vee> per positive root (rho = all-ones in fw coords)."""
        return tuple(sum(c, Fraction(0)) for c in self.coroot_covectors)

    @property
    def rho_fw(self) -> Vec:
        return (Fraction(1),) * self.rank

    @cached_property
    def two_rho_alpha_coords(self) -> Vec:
        """2*rho written over the simple roots (root-lattice coordinates)."""
        inv = invert_matrix([vec(row) for row in self.cartan_matrix])
        two = (Fraction(2),) * self.rank
        return tuple(dot(inv[i], two) for i in range(self.rank))

    def fw_from_alpha_coords(self, x: Vec) -> Vec:
        cm = self.cartan_matrix
        return tuple(
            sum((Fraction(cm[i][j]) * x[j] for j in range(self.rank)), Fraction(0))
            for i in range(self.rank))

    def alpha_from_fw_coords(self, x: Vec) -> Vec:
        inv = invert_matrix([vec(row) for row in self.cartan_matrix])
        return tuple(dot(inv[i], x) for i in range(self.rank))

    @property
    def weyl_order(self) -> int:
        return _WEYL_ORDER[self.letter](self.rank)

    def pairing_fw(self, lam_fw: Vec, root_index: int) -> Fraction:
        return dot(self.coroot_covectors[root_index], lam_fw)

    def __repr__(self):
        return f"RootSystem({self.cartan_type})"


def weyl_dim(rs: RootSystem, lam_fw) -> Fraction:
    """Product formula for the dimension of the module with highest weight
    ``lam_fw`` (fundamental-weight coordinates); a positive integer for
    dominant integral weights, the rational product value in general."""
    lam = vec(lam_fw)
    shifted = vadd(lam, rs.rho_fw)
    total = Fraction(1)
    for cov, rp in zip(rs.coroot_covectors, rs.rho_pairings):
        total *= dot(cov, shifted) / rp
    return total


def weyl_orbit(rs: RootSystem, lam_fw) -> list[Vec]:
    """Orbit of a weight under all simple reflections, lexicographic order."""
    lam = vec(lam_fw)
    cm = rs.cartan_matrix
    columns = [tuple(Fraction(cm[i][j]) for i in range(rs.rank))
               for j in range(rs.rank)]
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for i in range(rs.rank):
                refl = vsub(mu, vscale(columns[i], mu[i]))
                if refl not in seen:
                    if len(seen) >= ORBIT_LIMIT:
                        raise OrbitTooLargeError(f"orbit exceeds {ORBIT_LIMIT}")
                    seen.add(refl)
                    nxt.append(refl)
        frontier = nxt
    return sorted(seen)


def dh_density(rs: RootSystem, active_roots: Sequence[int] | None, chi_fw,
               embed: Sequence[Sequence], squared: bool) -> DHDensity:
    """DH density factors <embed.x + chi, alpha^vee> over the active positive
    roots, with multiplicity 2 when ``squared``.

    ``embed`` maps lattice coordinates of the section polytope into
    fundamental-weight coordinates (rows indexed by fw coordinate).
    """
    chi = vec(chi_fw)
    rows = [vec(r) for r in embed]
    if len(rows) != rs.rank:
        raise ValueError("embed must have one row per fundamental weight")
    m_rank = len(rows[0]) if rows else 0
    indices = list(range(len(rs.positive_roots_euclidean))) \
        if active_roots is None else list(active_roots)
    mult = 2 if squared else 1
    factors = []
    normalization = Fraction(1)
    for idx in indices:
        cov = rs.coroot_covectors[idx]
        normal = tuple(
            sum((cov[i] * rows[i][j] for i in range(rs.rank)), Fraction(0))
            for j in range(m_rank))
        offset = dot(cov, chi)
        if all(c == 0 for c in normal) and offset == 0:
            raise ZeroFactorError(
                f"active root {idx} is orthogonal to the translated polytope")
        rho_pair = rs.rho_pairings[idx]
        factors.append(DHFactor(AffineForm(normal, offset), mult, rho_pair))
        normalization *= rho_pair ** mult
    return DHDensity(m_rank, tuple(factors), normalization)


def wonderful_moment_polytope(rs: RootSystem, method: str = "hrep") -> VPolytope:
    """Moment polytope of the canonical compactification of the adjoint
    group, in root-lattice coordinates.

    Two constructions are available and must agree: the H-description
    {x dominant : x_i <= (2 rho)_i + 1} and the Weyl-orbit hull of
    2 rho + sum(alpha_i) intersected with the dominant chamber.
    """
    n = rs.rank
    two_rho = rs.two_rho_alpha_coords
    cm = rs.cartan_matrix
    dominance = [affine_form([cm[i][j] for j in range(n)], 0) for i in range(n)]
    if method == "hrep":
        forms = list(dominance)
        for i in range(n):
            normal = [Fraction(0)] * n
            normal[i] = Fraction(-1)
            forms.append(AffineForm(tuple(normal), two_rho[i] + 1))
        return vertex_enum(HPolytope(n, forms))
    if method == "orbit":
        seed_fw = vadd(vscale(rs.rho_fw, 2),
                       rs.fw_from_alpha_coords((Fraction(1),) * n))
        orbit_alpha = [rs.alpha_from_fw_coords(w) for w in weyl_orbit(rs, seed_fw)]
        hull = VPolytope(n, orbit_alpha)
        forms = list(hull.hrep[0]) + list(dominance)
        for e in hull.hrep[1]:
            forms.append(e)
            forms.append(AffineForm(vneg(e.normal), -e.offset))
        return vertex_enum(HPolytope(n, forms))
    raise ValueError("method must be 'hrep' or 'orbit'")
