"""Spherical data model: polytopes, support functions, candidates, level sums."""

import random
from fractions import Fraction as F

import pytest

from kstab.geom import Cone, vec
from kstab.quad import AffineForm, DHDensity, DHFactor
from kstab.spherical import (
    ColoredConeData,
    DivisorRecord,
    NotQCartierError,
    OutsideFanSupportError,
    SphericalDataError,
    SphericalInput,
    build_pl_function,
    candidate_set_E,
    lattice_points,
    section_polytope,
)


# ---------------------------------------------------------------------------
# section polytope


def test_section_polytope_pgl2(pgl2):
    assert pgl2.section_polytope.vertex_list == ((F(-1),), (F(1),))


def test_section_polytope_unbounded_rejected():
    with pytest.raises(SphericalDataError):
        section_polytope([DivisorRecord("D", vec([1]), F(0), False)])


def test_section_polytope_translation_covariance():
    recs = [DivisorRecord("A", vec([1]), F(1), False),
            DivisorRecord("B", vec([-1]), F(1), False)]
    base = section_polytope(recs)
    t = F(3, 2)
    shifted = [DivisorRecord(r.name, r.rho, r.coeff - r.rho[0] * t, r.is_color)
               for r in recs]
    moved = section_polytope(shifted)
    assert moved.vertex_list == tuple((v[0] + t,) for v in base.vertex_list)


# ---------------------------------------------------------------------------
# piecewise-linear support functions


def test_pl_function_pgl2(pgl2):
    h = pgl2.log_discrepancy
    assert h(vec([-1])) == 1
    assert h(vec([F(-7, 2)])) == F(7, 2)


def test_pl_function_toric_tent(toric_p1):
    h = toric_p1.log_discrepancy
    for v in (-3, -1, 0, 2, 5):
        assert h(vec([v])) == abs(v)


def test_pl_function_not_q_cartier():
    recs = [DivisorRecord("A", vec([1]), F(0), False),
            DivisorRecord("B", vec([2]), F(1), False)]
    with pytest.raises(NotQCartierError):
        build_pl_function(recs, [ColoredConeData((vec([1]),), ("A", "B"))])


def test_pl_function_outside_support():
    recs = [DivisorRecord("A", vec([1]), F(1), False)]
    pl = build_pl_function(recs, [ColoredConeData((vec([1]),), ("A",))])
    with pytest.raises(OutsideFanSupportError):
        pl(vec([-1]))


def test_pl_continuity_across_shared_faces(toric_bl1p2):
    pl = toric_bl1p2.log_discrepancy
    rng = random.Random(2)
    pieces = pl.pieces
    for a in pieces:
        for b in pieces:
            if a is b:
                continue
            face = a.cone.intersect(b.cone)
            rays = list(face.rays)
            if not rays:
                continue
            for _ in range(100):
                x = vec([0, 0])
                for r in rays:
                    c = F(rng.randint(0, 7))
                    x = tuple(xi + c * ri for xi, ri in zip(x, r))
                assert sum(ai * xi for ai, xi in zip(a.linear, x)) == \
                    sum(bi * xi for bi, xi in zip(b.linear, x))


def test_log_discrepancy_positive_on_candidates(all_builtins):
    for si in all_builtins.values():
        for ray in si.candidates:
            assert si.log_discrepancy(ray) > 0


# ---------------------------------------------------------------------------
# candidate rays


def test_candidates_pgl2(pgl2):
    assert pgl2.candidates == [(F(-1),)]


def test_candidates_wonderful_a2(wonderful_a2):
    assert wonderful_a2.candidates == [(F(-1), F(0)), (F(0), F(-1))]


def test_candidates_toric_p1(toric_p1):
    assert toric_p1.candidates == [(F(-1),), (F(1),)]


def test_candidates_toric_bl1p2(toric_bl1p2):
    assert toric_bl1p2.candidates == [
        (F(-1), F(-1)), (F(0), F(1)), (F(1), F(0)), (F(1), F(1))]


def test_candidates_subset_of_valuation_cone(all_builtins):
    for si in all_builtins.values():
        for ray in si.candidates:
            assert si.valuation_cone.contains(ray)


def test_candidates_with_lineality_appends_both_signs():
    # valuation cone = full line, fan = single ray cone: the intersection
    # with each fan cone is pointed, but a halfspace valuation cone meeting
    # a containing cone keeps its lineality
    recs = (DivisorRecord("A", vec([1, 0]), F(1), False),
            DivisorRecord("B", vec([-1, 0]), F(1), False),
            DivisorRecord("C", vec([0, 1]), F(1), False))
    fan = (ColoredConeData((vec([1, 0]), vec([-1, 0]), vec([0, 1])), ("A", "B", "C")),)
    # the fan cone is the upper halfplane: not strictly convex, so this is
    # exercised through candidate_set_E directly rather than SphericalInput
    vcone = Cone(2, [vec([1, 0]), vec([-1, 0]), vec([0, 1])])
    rays = candidate_set_E(fan, recs, vcone)
    assert (F(0), F(1)) in rays
    assert (F(1), F(0)) in rays and (F(-1), F(0)) in rays


# ---------------------------------------------------------------------------
# lattice points and level sums


def test_lattice_points_interval(pgl2):
    assert lattice_points(pgl2.section_polytope, 1) == [(F(-1),), (F(0),), (F(1),)]
    assert len(lattice_points(pgl2.section_polytope, 3)) == 7


def test_lattice_points_origin_polytope():
    from kstab.geom import HPolytope, affine_form
    pt = HPolytope(1, [affine_form([1], 0), affine_form([-1], 0)])
    for k in (1, 2, 5):
        assert lattice_points(pt, k) == [(F(0),)]


def test_level_sum_pgl2_level_one(pgl2):
    s, d, t = pgl2.level_sum(vec([-1]), 1, 1)
    assert (s, d, t) == (F(11, 35), 35, 2)


def test_level_sum_trivial_valuation(pgl2):
    s, _d, t = pgl2.level_sum(vec([0]), 4, 1)
    assert s == 0 and t == 0


def test_level_sum_dimension_growth(pgl2):
    dims = [pgl2.level_sum(vec([-1]), k, 1)[1] for k in (1, 2, 4, 8)]
    assert all(b > a for a, b in zip(dims, dims[1:]))


def test_level_sum_converges_to_continuum(pgl2):
    # S^(1)(-1) = 1/2; empirical O(1/k) approach
    errors = []
    for k in (4, 8, 16, 32):
        s, _, _ = pgl2.level_sum(vec([-1]), k, 1)
        errors.append(abs(s - F(1, 2)))
    assert all(e <= F(2, k) for e, k in zip(errors, (4, 8, 16, 32)))
    assert errors[-1] < errors[0]


def test_level_sum_requires_root_data(toric_bl1p2):
    s, d, t = toric_bl1p2.level_sum(vec([1, 0]), 2, 1)
    # toric module dimensions are all 1: d_2 = #(2*Delta cap Z^2)
    assert d == len(lattice_points(toric_bl1p2.section_polytope, 2))
    raw = SphericalInput(
        rank=1, dim_x=1,
        divisors=(DivisorRecord("A", vec([1]), F(1), False),
                  DivisorRecord("B", vec([-1]), F(1), False)),
        anticanonical_divisors=(DivisorRecord("A", vec([1]), F(1), False),
                                DivisorRecord("B", vec([-1]), F(1), False)),
        fan=(ColoredConeData((vec([1]),), ("A",)),
             ColoredConeData((vec([-1]),), ("B",))),
        valuation_cone=Cone.full_space(1),
        dh=DHDensity(1, (DHFactor(AffineForm(vec([1]), F(2)), 1, None),)),
        projection=(vec([1]),),
    )
    with pytest.raises(SphericalDataError):
        raw.level_sum(vec([1]), 1, 1)


# ---------------------------------------------------------------------------
# validation


def test_moment_polytope_relation_wonderful(wonderful_a1, wonderful_a2):
    # section polytope + weight of the section = canonical moment polytope
    from kstab.rootsys import RootSystem, wonderful_moment_polytope
    for si, (letter, rank) in ((wonderful_a1, ("A", 1)), (wonderful_a2, ("A", 2))):
        rs = RootSystem(letter, rank)
        chi = rs.two_rho_alpha_coords
        delta_plus = wonderful_moment_polytope(rs, "hrep")
        translated = si.section_polytope_v.translated(chi)
        assert translated.vertices == delta_plus.vertices


def test_fan_must_cover_valuation_cone():
    recs = (DivisorRecord("A", vec([1]), F(1), False),
            DivisorRecord("B", vec([-1]), F(1), False))
    with pytest.raises(SphericalDataError):
        SphericalInput(
            rank=1, dim_x=1,
            divisors=recs, anticanonical_divisors=recs,
            fan=(ColoredConeData((vec([1]),), ("A",)),),  # misses -1 direction
            valuation_cone=Cone.full_space(1),
            dh=DHDensity(1, ()),
            projection=(vec([1]),),
        )


def test_colored_cone_must_be_strictly_convex():
    recs = (DivisorRecord("A", vec([1]), F(1), False),
            DivisorRecord("B", vec([-1]), F(1), False))
    with pytest.raises(SphericalDataError):
        SphericalInput(
            rank=1, dim_x=1,
            divisors=recs, anticanonical_divisors=recs,
            fan=(ColoredConeData((vec([1]), vec([-1])), ("A", "B")),),
            valuation_cone=Cone.full_space(1),
            dh=DHDensity(1, ()),
            projection=(vec([1]),),
        )
