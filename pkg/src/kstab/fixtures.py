"""Builtin input documents used by the CLI and the test suite.

Each fixture is a plain JSON-ready dict in the schema of `kstab.schema`;
rational entries are strings so round trips are exact.
"""

from __future__ import annotations

from fractions import Fraction

from .rootsys import RootSystem


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _vec(v) -> list[str]:
    return [_frac(c) for c in v]


def pgl2_fixture() -> dict:
    """Rank-one wonderful group compactification, anticanonically polarized.

    Section polytope [-1, 1]; valuation cone spanned by -1; density factor
    pairing 2x + 2 with multiplicity two, so level-k module dimensions are
    the odd squares (1, 9, 25, ... at level 1)."""
    return {
        "schema_version": "1",
        "variety": {
            "rank": 1,
            "dim_x": 3,
            "divisors": [
                {"name": "X1", "rho": ["-1"], "coeff": "1", "is_color": False},
                {"name": "D1", "rho": ["2"], "coeff": "2", "is_color": True},
            ],
            "anticanonical_divisors": [
                {"name": "X1", "rho": ["-1"], "coeff": "1", "is_color": False},
                {"name": "D1", "rho": ["2"], "coeff": "2", "is_color": True},
            ],
            "fan": [
                {"generators": [["-1"]], "divisors": ["X1"]},
            ],
            "valuation_cone": {"generators": [["-1"]]},
            "projection": [],
        },
        "root_system": {
            "type": "A",
            "rank": 1,
            "active_roots": "all",
            "chi": ["2"],
            "embed": [["2"]],
            "squared": True,
        },
    }


def wonderful_fixture(letter: str, rank: int) -> dict:
    """Wonderful compactification of the adjoint group of the given type,
    anticanonically polarized, in root-lattice coordinates."""
    rs = RootSystem(letter, rank)
    cm = rs.cartan_matrix
    n = rank
    divisors = []
    for i in range(n):
        rho = ["0"] * n
        rho[i] = "-1"
        divisors.append({"name": f"X{i + 1}", "rho": rho, "coeff": "1",
                         "is_color": False})
    for i in range(n):
        divisors.append({"name": f"D{i + 1}",
                         "rho": [str(cm[i][j]) for j in range(n)],
                         "coeff": "2", "is_color": True})
    gens = []
    for i in range(n):
        g = ["0"] * n
        g[i] = "-1"
        gens.append(g)
    dim_x = rank + 2 * len(rs.positive_roots_euclidean)
    return {
        "schema_version": "1",
        "variety": {
            "rank": n,
            "dim_x": dim_x,
            "divisors": divisors,
            "anticanonical_divisors": [dict(d) for d in divisors],
            "fan": [
                {"generators": gens,
                 "divisors": [f"X{i + 1}" for i in range(n)]},
            ],
            "valuation_cone": {"generators": gens},
            "projection": [],
        },
        "root_system": {
            "type": letter,
            "rank": rank,
            "active_roots": "all",
            "chi": ["2"] * n,
            "embed": [[str(cm[i][j]) for j in range(n)] for i in range(n)],
            "squared": True,
        },
    }


def toric_p1_fixture() -> dict:
    """The projective line with its torus action, anticanonically polarized."""
    return {
        "schema_version": "1",
        "variety": {
            "rank": 1,
            "dim_x": 1,
            "divisors": [
                {"name": "D0", "rho": ["1"], "coeff": "1", "is_color": False},
                {"name": "Dinf", "rho": ["-1"], "coeff": "1", "is_color": False},
            ],
            "anticanonical_divisors": [
                {"name": "D0", "rho": ["1"], "coeff": "1", "is_color": False},
                {"name": "Dinf", "rho": ["-1"], "coeff": "1", "is_color": False},
            ],
            "fan": [
                {"generators": [["1"]], "divisors": ["D0"]},
                {"generators": [["-1"]], "divisors": ["Dinf"]},
            ],
            "valuation_cone": "all",
            "projection": [["1"]],
        },
    }


def toric_bl1p2_fixture() -> dict:
    """The projective plane blown up in one torus-fixed point,
    anticanonically polarized."""
    rays = {"D1": ["1", "0"], "D2": ["0", "1"], "E": ["1", "1"],
            "D3": ["-1", "-1"]}
    divisors = [{"name": name, "rho": rho, "coeff": "1", "is_color": False}
                for name, rho in rays.items()]
    cones = [
        {"generators": [rays["D1"], rays["E"]], "divisors": ["D1", "E"]},
        {"generators": [rays["E"], rays["D2"]], "divisors": ["E", "D2"]},
        {"generators": [rays["D2"], rays["D3"]], "divisors": ["D2", "D3"]},
        {"generators": [rays["D3"], rays["D1"]], "divisors": ["D3", "D1"]},
    ]
    return {
        "schema_version": "1",
        "variety": {
            "rank": 2,
            "dim_x": 2,
            "divisors": divisors,
            "anticanonical_divisors": [dict(d) for d in divisors],
            "fan": cones,
            "valuation_cone": "all",
            "projection": [["1", "0"], ["0", "1"]],
        },
    }


BUILTIN_NAMES = ("pgl2", "wonderful-a1", "wonderful-a2", "toric-p1", "toric-bl1p2")


def builtin_document(name: str) -> dict:
    if name == "pgl2":
        return pgl2_fixture()
    if name == "wonderful-a1":
        return wonderful_fixture("A", 1)
    if name == "wonderful-a2":
        return wonderful_fixture("A", 2)
    if name == "toric-p1":
        return toric_p1_fixture()
    if name == "toric-bl1p2":
        return toric_bl1p2_fixture()
    raise KeyError(f"unknown builtin fixture {name!r}")


def builtin_spherical_input(name: str):
    """(SphericalInput, WeightFn | None) for a builtin fixture."""
    from .schema import parse_input_document
    return parse_input_document(builtin_document(name))
