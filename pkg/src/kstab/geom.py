"""Exact rational convex geometry.

Vertex/facet conversion by the double description method, polyhedral cone
duality, triangulation, and integer lattice charts for lower-dimensional
polytopes.  Coordinates are `fractions.Fraction` throughout and nothing in
this module rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


class GeometryError(Exception):
    """Base class for geometric failures."""


class EmptyPolytopeError(GeometryError):
    pass


class UnboundedPolytopeError(GeometryError):
    pass


class DegenerateInputError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# vector helpers


def vec(coords: Iterable) -> Vec:
    return tuple(Fraction(c) for c in coords)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def unit_vec(i: int, n: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def dot(a: Vec, b: Vec) -> Fraction:
    s = Fraction(0)
    for x, y in zip(a, b, strict=True):
        s += x * y
    return s


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(a: Vec, c) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def primitive(v: Vec) -> Vec:
    """Scale a nonzero rational vector by a positive factor to a primitive
    integer vector (coprime integer entries, same direction)."""
    if is_zero_vec(v):
        raise ValueError("zero vector has no primitive representative")
    denom_lcm = 1
    for x in v:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, abs(k))
    return tuple(Fraction(k, g) for k in ints)


def lex_sorted(vectors: Iterable[Vec]) -> list[Vec]:
    return sorted(vectors)


# ---------------------------------------------------------------------------
# exact linear algebra


def solve_linear(rows: Sequence[Vec], rhs: Sequence[Fraction]) -> Vec | None:
    """One solution of ``rows . x = rhs`` or None if inconsistent."""
    m = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs, strict=True)]
    n = len(rows[0]) if rows else 0
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pivval = m[row][col]
        m[row] = [x / pivval for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append((row, col))
        row += 1
        if row == len(m):
            break
    for i in range(row, len(m)):
        if m[i][n] != 0 and all(x == 0 for x in m[i][:n]):
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = m[r][n]
    # rows below pivots must be consistent (all-zero coefficient rows checked)
    for i in range(len(m)):
        if all(x_ == 0 for x_ in m[i][:n]) and m[i][n] != 0:
            return None
    return tuple(x)


def kernel_basis(rows: Sequence[Vec], n: int) -> list[Vec]:
    """Rational basis of {x : rows . x = 0}."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pivval = m[row][col]
        m[row] = [x / pivval for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v[pcol] = -m[r][fcol]
        basis.append(tuple(v))
    return basis


def rowspace_solution(rows: Sequence[Vec], rhs: Sequence[Fraction]) -> Vec | None:
    """The unique solution of ``rows . x = rhs`` lying in the row space of
    ``rows`` (components along the kernel set to zero)."""
    x0 = solve_linear(rows, rhs)
    if x0 is None:
        return None
    n = len(x0)
    ker = kernel_basis(rows, n)
    if not ker:
        return x0
    gram = [tuple(dot(ki, kj) for kj in ker) for ki in ker]
    rhs2 = [dot(ki, x0) for ki in ker]
    c = solve_linear(gram, rhs2)
    assert c is not None
    out = list(x0)
    for ci, k in zip(c, ker):
        for j in range(n):
            out[j] -= ci * k[j]
    return tuple(out)


def matrix_rank(rows: Sequence[Vec]) -> int:
    if not rows:
        return 0
    n = len(rows[0])
    return n - len(kernel_basis(rows, n))


def invert_matrix(rows: Sequence[Vec]) -> list[Vec]:
    """Exact inverse of a square matrix given as rows."""
    n = len(rows)
    cols = []
    for i in range(n):
        sol = solve_linear(rows, [Fraction(1 if j == i else 0) for j in range(n)])
        if sol is None:
            raise DegenerateInputError("singular matrix")
        cols.append(sol)
    return [tuple(cols[j][i] for j in range(n)) for i in range(n)]


# ---------------------------------------------------------------------------
# integer lattice utilities (Hermite-style elimination)


def _int_rows(rows: Sequence[Vec]) -> list[list[int]]:
    out = []
    for r in rows:
        l = 1
        for x in r:
            l = l * x.denominator // gcd(l, x.denominator)
        out.append([int(x * l) for x in r])
    return out


def hnf_rows(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Hermite-reduced basis of the lattice generated by integer rows."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    n = len(m[0])
    r = 0
    for col in range(n):
        # make a single nonzero entry in this column among rows r..
        while True:
            nz = [i for i in range(r, len(m)) if m[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(m[i][col]))
            i0, i1 = nz[0], nz[1]
            q = m[i1][col] // m[i0][col]
            m[i1] = [a - q * b for a, b in zip(m[i1], m[i0])]
        nz = [i for i in range(r, len(m)) if m[i][col] != 0]
        if not nz:
            continue
        m[r], m[nz[0]] = m[nz[0]], m[r]
        if m[r][col] < 0:
            m[r] = [-a for a in m[r]]
        for i in range(r):
            q = m[i][col] // m[r][col]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r] if any(row)]


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice {x in Z^n : rows . x = 0}."""
    rows = [list(r) for r in rows]
    k = len(rows)
    # augmented rows: [ <row_j, e_i> for j ] + identity part
    aug = [[rows[j][i] for j in range(k)] + [1 if t == i else 0 for t in range(n)]
           for i in range(n)]
    r = 0
    for col in range(k):
        while True:
            nz = [i for i in range(r, len(aug)) if aug[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(aug[i][col]))
            i0, i1 = nz[0], nz[1]
            q = aug[i1][col] // aug[i0][col]
            aug[i1] = [a - q * b for a, b in zip(aug[i1], aug[i0])]
        nz = [i for i in range(r, len(aug)) if aug[i][col] != 0]
        if not nz:
            continue
        aug[r], aug[nz[0]] = aug[nz[0]], aug[r]
        r += 1
        if r == len(aug):
            break
    kernel = [row[k:] for row in aug[r:]]
    return hnf_rows(kernel)


def lattice_span_basis(directions: Sequence[Vec], n: int) -> list[Vec]:
    """Basis of Z^n intersected with the rational span of ``directions``."""
    ints = _int_rows([d for d in directions if not is_zero_vec(d)])
    if not ints:
        return []
    ortho = integer_kernel(ints, n)
    span = integer_kernel(ortho, n) if ortho else hnf_rows(
        [[1 if j == i else 0 for j in range(n)] for i in range(n)])
    return [vec(b) for b in span]


@dataclass(frozen=True)
class Chart:
    """Affine chart x = origin + B y identifying the affine hull of a point
    set with Q^r, where the columns of B are a basis of the direction
    lattice.  Lebesgue measure in chart coordinates is the lattice-normalized
    measure on the affine hull."""

    origin: Vec
    basis: tuple[Vec, ...]  # r column vectors of length n

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _left_inverse(self) -> tuple[Vec, ...]:
        # rows of (B^T B)^{-1} B^T
        r = self.dim
        gram = [tuple(dot(self.basis[i], self.basis[j]) for j in range(r))
                for i in range(r)]
        ginv = invert_matrix(gram)
        rows = []
        for i in range(r):
            rows.append(tuple(
                sum((ginv[i][k] * self.basis[k][t] for k in range(r)), Fraction(0))
                for t in range(self.ambient_dim)))
        return tuple(rows)

    def to_chart(self, x: Vec) -> Vec:
        d = vsub(x, self.origin)
        return tuple(dot(row, d) for row in self._left_inverse)

    def from_chart(self, y: Vec) -> Vec:
        out = list(self.origin)
        for c, b in zip(y, self.basis, strict=True):
            for i in range(len(out)):
                out[i] += c * b[i]
        return tuple(out)

    @property
    def is_identity(self) -> bool:
        n = self.ambient_dim
        return (self.dim == n and is_zero_vec(self.origin)
                and all(self.basis[i] == unit_vec(i, n) for i in range(n)))


def identity_chart(n: int) -> Chart:
    return Chart(zero_vec(n), tuple(unit_vec(i, n) for i in range(n)))


def lattice_chart(points: Sequence[Vec]) -> Chart:
    """Chart onto the affine hull of ``points`` with an integer lattice basis."""
    if not points:
        raise DegenerateInputError("no points")
    n = len(points[0])
    origin = points[0]
    dirs = [vsub(p, origin) for p in points[1:]]
    dirs = [d for d in dirs if not is_zero_vec(d)]
    if not dirs:
        return Chart(origin, ())
    if matrix_rank(dirs) == n:
        return identity_chart(n)
    basis = lattice_span_basis(dirs, n)
    return Chart(origin, tuple(basis))


# ---------------------------------------------------------------------------
# double description


def _canonical_lineality(vectors: Sequence[Vec], n: int) -> tuple[Vec, ...]:
    if not vectors:
        return ()
    basis = hnf_rows(_int_rows(vectors))
    return tuple(sorted(vec(b) for b in basis))


def double_description(halfspaces: Sequence[Vec], dim: int) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Minimal generators of the cone {y : <h, y> >= 0 for all h}.

    Returns (rays, lineality): primitive extreme rays modulo the lineality
    space, and a lattice basis of the lineality space.  Both are sorted
    lexicographically.
    """
    lineality: list[Vec] = [unit_vec(i, dim) for i in range(dim)]
    rays: list[Vec] = []
    processed: list[Vec] = []

    def zeroset(r: Vec) -> frozenset[int]:
        return frozenset(i for i, h in enumerate(processed) if dot(h, r) == 0)

    for h in halfspaces:
        if is_zero_vec(h):
            continue
        pivot_idx = next((i for i, l in enumerate(lineality) if dot(h, l) != 0), None)
        if pivot_idx is not None:
            piv = lineality[pivot_idx]
            c = dot(h, piv)
            l0 = vscale(piv, Fraction(1) / c)  # <h, l0> = 1
            lineality = [vsub(l, vscale(l0, dot(h, l)))
                         for i, l in enumerate(lineality) if i != pivot_idx]
            rays = [vsub(r, vscale(l0, dot(h, r))) for r in rays]
            rays.append(l0)
            rays = [primitive(r) for r in rays if not is_zero_vec(r)]
        else:
            vals = [(r, dot(h, r)) for r in rays]
            plus = [(r, s) for r, s in vals if s > 0]
            zero = [r for r, s in vals if s == 0]
            minus = [(r, s) for r, s in vals if s < 0]
            if minus:
                zsets = {r: zeroset(r) for r in rays}
                new: list[Vec] = []
                for rp, sp in plus:
                    for rm, sm in minus:
                        common = zsets[rp] & zsets[rm]
                        adjacent = True
                        for other in rays:
                            if other is rp or other is rm:
                                continue
                            if common <= zsets[other]:
                                adjacent = False
                                break
                        if adjacent:
                            comb = vsub(vscale(rm, sp), vscale(rp, sm))
                            if not is_zero_vec(comb):
                                new.append(primitive(comb))
                kept = [r for r, _ in plus] + zero
                seen: set[Vec] = set(primitive(r) for r in kept)
                merged = [primitive(r) for r in kept]
                for r in new:
                    if r not in seen:
                        seen.add(r)
                        merged.append(r)
                rays = merged
        processed.append(h)

    rays = lex_sorted(set(primitive(r) for r in rays if not is_zero_vec(r)))
    return tuple(rays), _canonical_lineality(lineality, dim)


# ---------------------------------------------------------------------------
# affine forms and polytopes


@dataclass(frozen=True)
class AffineForm:
    """x |-> <normal, x> + offset, used as the inequality form >= 0."""

    normal: Vec
    offset: Fraction

    def __call__(self, x: Vec) -> Fraction:
        return dot(self.normal, x) + self.offset

    def translated(self, t: Vec) -> "AffineForm":
        """Form cutting the same halfspace translated by +t."""
        return AffineForm(self.normal, self.offset - dot(self.normal, t))

    def substituted(self, chart: Chart) -> "AffineForm":
        """Form in chart coordinates: value at y equals value at x(y)."""
        normal = tuple(dot(self.normal, b) for b in chart.basis)
        return AffineForm(normal, self(chart.origin))


def affine_form(normal, offset) -> AffineForm:
    return AffineForm(vec(normal), Fraction(offset))


def _raw_vertex_enum(forms: Sequence[AffineForm], dim: int) -> list[Vec]:
    halfspaces = [(Fraction(1),) + zero_vec(dim)]
    halfspaces += [(f.offset,) + f.normal for f in forms]
    rays, lineality = double_description(halfspaces, dim + 1)
    verts = [tuple(x / r[0] for x in r[1:]) for r in rays if r[0] > 0]
    if not verts:
        raise EmptyPolytopeError("no feasible point")
    if lineality or any(r[0] == 0 for r in rays):
        raise UnboundedPolytopeError("nontrivial recession cone")
    return lex_sorted(verts)


def _raw_extreme_points(points: Sequence[Vec], dim: int) -> list[Vec]:
    pts = lex_sorted(set(points))
    if not pts:
        raise DegenerateInputError("no points")
    gens = [(Fraction(1),) + p for p in pts]
    frays, flin = double_description(gens, dim + 1)
    half = list(frays) + [l for l in flin] + [vneg(l) for l in flin]
    rrays, rlin = double_description(half, dim + 1)
    assert not rlin
    out = []
    for r in rrays:
        assert r[0] > 0
        out.append(tuple(x / r[0] for x in r[1:]))
    return lex_sorted(out)


def _raw_facets(points: Sequence[Vec], dim: int) -> tuple[list[AffineForm], list[AffineForm]]:
    """(inequality forms, equality forms) describing conv(points) exactly,
    with irredundant inequalities."""
    gens = [(Fraction(1),) + p for p in points]
    frays, flin = double_description(gens, dim + 1)
    forms = [AffineForm(r[1:], r[0]) for r in frays if not is_zero_vec(r[1:])]
    eqs = [AffineForm(l[1:], l[0]) for l in flin if not is_zero_vec(l[1:])]
    return forms, eqs


class HPolytope:
    """Bounded nonempty intersection of halfspaces {x : form(x) >= 0}."""

    def __init__(self, dim: int, forms: Sequence[AffineForm]):
        self.dim = dim
        self.forms = tuple(forms)
        self._vertices = tuple(_raw_vertex_enum(self.forms, dim))

    @property
    def vertex_list(self) -> tuple[Vec, ...]:
        return self._vertices

    def contains(self, x: Vec) -> bool:
        return all(f(x) >= 0 for f in self.forms)

    def scaled(self, k) -> "HPolytope":
        k = Fraction(k)
        if k <= 0:
            raise ValueError("positive dilation factor required")
        return HPolytope(self.dim, [AffineForm(f.normal, k * f.offset) for f in self.forms])

    def translated(self, t: Vec) -> "HPolytope":
        return HPolytope(self.dim, [f.translated(t) for f in self.forms])

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, forms={len(self.forms)})"


class VPolytope:
    """Convex hull of finitely many points; stores exactly the extreme points."""

    def __init__(self, dim: int, points: Sequence[Vec]):
        self.dim = dim
        self.vertices = tuple(_raw_extreme_points([vec(p) for p in points], dim))

    @classmethod
    def _trusted(cls, dim: int, vertices: Sequence[Vec]) -> "VPolytope":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.vertices = tuple(lex_sorted(vertices))
        return obj

    @cached_property
    def hrep(self) -> tuple[tuple[AffineForm, ...], tuple[AffineForm, ...]]:
        forms, eqs = _raw_facets(self.vertices, self.dim)
        return tuple(forms), tuple(eqs)

    def contains(self, x: Vec) -> bool:
        forms, eqs = self.hrep
        return all(f(x) >= 0 for f in forms) and all(e(x) == 0 for e in eqs)

    def translated(self, t: Vec) -> "VPolytope":
        return VPolytope._trusted(self.dim, [vadd(v, t) for v in self.vertices])

    @cached_property
    def affine_dim(self) -> int:
        if len(self.vertices) <= 1:
            return 0
        dirs = [vsub(v, self.vertices[0]) for v in self.vertices[1:]]
        return matrix_rank(dirs)

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, vertices={len(self.vertices)})"


def vertex_enum(p: HPolytope) -> VPolytope:
    """Extreme points of an H-polytope in lexicographic order."""
    return VPolytope._trusted(p.dim, p.vertex_list)


def hrep_of(v: VPolytope) -> HPolytope:
    forms, eqs = v.hrep
    allforms = list(forms)
    for e in eqs:
        allforms.append(e)
        allforms.append(AffineForm(vneg(e.normal), -e.offset))
    return HPolytope(v.dim, allforms)


@dataclass(frozen=True)
class DualPolytope:
    """H-description {xi : <v_i, xi> + 1 >= 0} of the dual body of a
    V-polytope; unbounded when 0 is not interior to the primal."""

    dim: int
    forms: tuple[AffineForm, ...]
    bounded: bool

    @cached_property
    def polytope(self) -> HPolytope:
        if not self.bounded:
            raise UnboundedPolytopeError("dual body is unbounded")
        return HPolytope(self.dim, self.forms)

    def contains(self, x: Vec) -> bool:
        return all(f(x) >= 0 for f in self.forms)


def dual_polytope(v: VPolytope) -> DualPolytope:
    """Dual body {xi : <xi, x> + 1 >= 0 on v}, irredundant forms only."""
    pts = list(v.vertices) + [zero_vec(v.dim)]
    keep = [p for p in _raw_extreme_points(pts, v.dim) if not is_zero_vec(p)]
    forms = tuple(AffineForm(p, Fraction(1)) for p in keep)
    try:
        _raw_vertex_enum(forms, v.dim)
        bounded = True
    except UnboundedPolytopeError:
        bounded = False
    except EmptyPolytopeError:  # cannot happen: 0 is always feasible
        raise AssertionError("dual body must contain the origin")
    return DualPolytope(v.dim, forms, bounded)


# ---------------------------------------------------------------------------
# simplices and triangulation


@dataclass(frozen=True)
class Simplex:
    """d+1 affinely independent vertices in ambient dimension d."""

    vertices: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @cached_property
    def edge_columns(self) -> tuple[Vec, ...]:
        v0 = self.vertices[0]
        return tuple(vsub(v, v0) for v in self.vertices[1:])

    @cached_property
    def volume_factor(self) -> Fraction:
        """Absolute determinant of the edge matrix."""
        cols = [list(c) for c in self.edge_columns]
        n = len(cols)
        if n == 0:
            return Fraction(1)
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if mat[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                det = -det
            det *= mat[c][c]
            inv = Fraction(1) / mat[c][c]
            for r in range(c + 1, n):
                f = mat[r][c] * inv
                if f:
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
        return abs(det)

    @cached_property
    def volume(self) -> Fraction:
        from math import factorial
        return self.volume_factor / factorial(self.dim)


def _triangulate_points(vertices: list[Vec], dim: int) -> list[tuple[Vec, ...]]:
    """Triangulation (as vertex tuples) of a full-dimensional polytope by
    pulling from its lexicographically smallest vertex."""
    if dim == 0:
        return [tuple(vertices[:1])]
    if len(vertices) == dim + 1:
        return [tuple(vertices)]
    apex = vertices[0]
    forms, _eqs = _raw_facets(vertices, dim)
    out: list[tuple[Vec, ...]] = []
    for f in forms:
        if f(apex) == 0:
            continue
        face_verts = [v for v in vertices if f(v) == 0]
        # project the facet onto coordinates where it is full-dimensional
        drop = next(i for i, c in enumerate(f.normal) if c != 0)
        proj = [tuple(x for i, x in enumerate(v) if i != drop) for v in face_verts]
        back = {p: v for p, v in zip(proj, face_verts)}
        for sub in _triangulate_points(lex_sorted(back.keys()), dim - 1):
            out.append((apex,) + tuple(back[p] for p in sub))
    return out


def triangulate(v: VPolytope) -> list[Simplex]:
    """Simplices with disjoint interiors covering a full-dimensional polytope."""
    if v.affine_dim < v.dim:
        raise DegenerateInputError(
            f"polytope has affine dimension {v.affine_dim} < {v.dim}; "
            "project to its affine hull first")
    return [Simplex(t) for t in _triangulate_points(list(v.vertices), v.dim)]


# ---------------------------------------------------------------------------
# polyhedral cones


class Cone:
    """Finitely generated convex cone, canonicalized through duality."""

    def __init__(self, dim: int, generators: Sequence[Vec] = ()):
        self.dim = dim
        gens = [vec(g) for g in generators]
        self.generators = tuple(g for g in gens if not is_zero_vec(g))

    @classmethod
    def full_space(cls, dim: int) -> "Cone":
        gens = [unit_vec(i, dim) for i in range(dim)]
        gens += [vneg(g) for g in gens]
        return cls(dim, gens)

    @cached_property
    def _dual_pair(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
        """(rays, lineality) of the dual cone {m : <m, g> >= 0}."""
        return double_description(self.generators, self.dim)

    @property
    def facet_normals(self) -> tuple[Vec, ...]:
        """Inequalities <r, x> >= 0 cutting the cone inside its span."""
        return self._dual_pair[0]

    @property
    def span_equations(self) -> tuple[Vec, ...]:
        """Equalities <l, x> = 0 cutting the linear span of the cone."""
        return self._dual_pair[1]

    @cached_property
    def _canonical(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
        half = list(self.facet_normals)
        for l in self.span_equations:
            half.append(l)
            half.append(vneg(l))
        return double_description(half, self.dim)

    @property
    def rays(self) -> tuple[Vec, ...]:
        """Primitive extreme rays modulo the lineality space."""
        return self._canonical[0]

    @property
    def lineality(self) -> tuple[Vec, ...]:
        return self._canonical[1]

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def is_strictly_convex(self) -> bool:
        return self.lineality_dim == 0

    @property
    def is_full_space(self) -> bool:
        return not self.facet_normals and not self.span_equations

    def dual(self) -> "Cone":
        rays, lin = self._dual_pair
        gens = list(rays)
        for l in lin:
            gens.append(l)
            gens.append(vneg(l))
        return Cone(self.dim, gens)

    def negated(self) -> "Cone":
        return Cone(self.dim, [vneg(g) for g in self.generators])

    def contains(self, x: Vec) -> bool:
        return (all(dot(r, x) >= 0 for r in self.facet_normals)
                and all(dot(l, x) == 0 for l in self.span_equations))

    def in_relative_interior(self, x: Vec) -> bool:
        return (all(dot(r, x) > 0 for r in self.facet_normals)
                and all(dot(l, x) == 0 for l in self.span_equations))

    def intersect(self, other: "Cone") -> "Cone":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        half: list[Vec] = []
        for c in (self, other):
            half.extend(c.facet_normals)
            for l in c.span_equations:
                half.append(l)
                half.append(vneg(l))
        rays, lin = double_description(half, self.dim)
        gens = list(rays)
        for l in lin:
            gens.append(l)
            gens.append(vneg(l))
        return Cone(self.dim, gens)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators) if other.generators \
            else True

    def set_equal(self, other: "Cone") -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    def relative_interior_point(self) -> Vec:
        """Some point in the relative interior (0 for the zero cone)."""
        x = zero_vec(self.dim)
        for r in self.rays:
            x = vadd(x, r)
        return x

    def __repr__(self):
        return f"Cone(dim={self.dim}, rays={len(self.rays)}, lin={self.lineality_dim})"


def extremal_rays(c: Cone) -> list[Vec]:
    """Primitive extreme rays of a cone modulo its lineality space."""
    return list(c.rays)


def cone_dual(c: Cone) -> Cone:
    return c.dual()


def intersect_cones(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def in_relative_interior(x: Vec, c: Cone) -> bool:
    return c.in_relative_interior(vec(x))
