"""Integration engines: exact polynomial route and adaptive cubature."""

import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kstab.geom import HPolytope, Simplex, VPolytope, affine_form, vec
from kstab.quad import (
    AffinePowerWeight,
    ConstantWeight,
    DHDensity,
    DHFactor,
    Polynomial,
    PolynomialWeight,
    SingularIntegrandError,
    ZeroFactorError,
    dh_moments,
    integrate_monomial_simplex,
    integrate_numeric,
    integrate_poly,
    weight_constant_value,
)

INTERVAL = HPolytope(1, [affine_form([1], 1), affine_form([-1], 1)])
UNIT_SQUARE = HPolytope(2, [affine_form([1, 0], 0), affine_form([-1, 0], 1),
                            affine_form([0, 1], 0), affine_form([0, -1], 1)])


def std_simplex(d):
    pts = [vec([0] * d)]
    for i in range(d):
        e = [0] * d
        e[i] = 1
        pts.append(vec(e))
    return Simplex(tuple(pts))


# ---------------------------------------------------------------------------
# monomials over simplices


def test_monomial_area_of_standard_triangle():
    assert integrate_monomial_simplex(std_simplex(2), (0, 0)) == F(1, 2)


def test_monomial_x_over_standard_triangle():
    # factorial formula: 1! 0! / (2 + 1)! = 1/6
    assert integrate_monomial_simplex(std_simplex(2), (1, 0)) == F(1, 6)


def test_monomial_x2_over_interval():
    s = Simplex((vec([-1]), vec([1])))
    assert integrate_monomial_simplex(s, (2,)) == F(2, 3)


# ---------------------------------------------------------------------------
# exact polynomial integration


def test_poly_square_of_affine():
    p = Polynomial.from_affine(affine_form([1], 1)).pow_int(2)
    assert integrate_poly(INTERVAL, p) == F(8, 3)


def test_poly_affine_square_times_x():
    p = Polynomial.from_affine(affine_form([1], 1)).pow_int(2)
    assert integrate_poly(INTERVAL, p * Polynomial.coordinate(1, 0)) == F(4, 3)


def test_poly_xy_over_unit_square():
    xy = Polynomial.coordinate(2, 0) * Polynomial.coordinate(2, 1)
    assert integrate_poly(UNIT_SQUARE, xy) == F(1, 4)


def test_poly_refinement_invariance():
    # barycentric-style refinement: integrate over the two halves of the
    # square separately and compare with the whole
    p = Polynomial(2, {(2, 1): F(3), (0, 0): F(1), (1, 1): F(-2)})
    whole = integrate_poly(UNIT_SQUARE, p)
    left = HPolytope(2, [affine_form([1, 0], 0), affine_form([-1, 0], F(1, 2)),
                         affine_form([0, 1], 0), affine_form([0, -1], 1)])
    right = HPolytope(2, [affine_form([1, 0], F(-1, 2)), affine_form([-1, 0], 1),
                          affine_form([0, 1], 0), affine_form([0, -1], 1)])
    assert integrate_poly(left, p) + integrate_poly(right, p) == whole


def test_poly_affinity_under_unimodular_maps():
    rng = random.Random(23)
    p = Polynomial(2, {(2, 0): F(1), (1, 1): F(2), (0, 1): F(-1)})
    for _ in range(10):
        # random unimodular integer matrix from elementary operations
        a, b, c, d = 1, 0, 0, 1
        for _ in range(4):
            k = rng.randint(-2, 2)
            if rng.random() < 0.5:
                a, b = a + k * c, b + k * d
            else:
                c, d = c + k * a, d + k * b
        # A^{-1}(square): forms x -> form(Ax)
        forms = []
        for f in UNIT_SQUARE.forms:
            n0 = f.normal[0] * a + f.normal[1] * c
            n1 = f.normal[0] * b + f.normal[1] * d
            forms.append(affine_form([n0, n1], f.offset))
        preimage = HPolytope(2, forms)
        composed = p.compose_affine(vec([0, 0]), [vec([a, c]), vec([b, d])])
        assert integrate_poly(preimage, composed) == integrate_poly(UNIT_SQUARE, p)


def test_poly_lower_dimensional_lattice_measure():
    seg = VPolytope(2, [vec([0, 0]), vec([2, 2])])
    one = Polynomial.constant(2, 1)
    # the segment meets three lattice points; its lattice length is 2
    assert integrate_poly(seg, one) == 2
    x0 = Polynomial.coordinate(2, 0)
    assert integrate_poly(seg, x0) == 2  # int_0^2 t dt


def test_poly_zero_dimensional():
    pt = VPolytope(1, [vec([3])])
    assert integrate_poly(pt, Polynomial.coordinate(1, 0)) == 3


# ---------------------------------------------------------------------------
# numeric cubature


def test_numeric_constant():
    q = integrate_numeric(INTERVAL, lambda pts: np.ones(len(pts)), tol=1e-12)
    assert q.converged
    assert abs(q.value - 2) <= 1e-12 + 1e-14


def test_numeric_inverse_square_of_affine():
    # antiderivative of (x/2+1)^(-2) is -2/(x/2+1); the integral is 8/3
    q = integrate_numeric(INTERVAL, lambda pts: (0.5 * pts[:, 0] + 1) ** -2,
                          tol=1e-10)
    assert q.converged
    assert abs(q.value - F(8, 3)) <= q.error_bound + 1e-12


def test_numeric_matches_exact_engine_on_random_polynomials():
    rng = random.Random(31)
    for _ in range(8):
        pts = [vec([rng.randint(-3, 3) for _ in range(3)]) for _ in range(7)]
        v = VPolytope(3, pts)
        if v.affine_dim < 3:
            continue
        terms = {tuple(rng.randint(0, 1) for _ in range(3)): F(rng.randint(-4, 4))
                 for _ in range(4)}
        poly = Polynomial(3, terms)
        exact = integrate_poly(v, poly)
        q = integrate_numeric(v, poly.eval_float, tol=1e-9)
        assert abs(float(exact) - q.value) <= q.error_bound + 1e-9 * (1 + abs(float(exact)))


def test_numeric_singular_integrand_raises():
    def f(pts):
        with np.errstate(divide="ignore"):
            return 1.0 / (pts[:, 0] - 0.25)

    with pytest.raises(SingularIntegrandError):
        integrate_numeric(INTERVAL, f, tol=1e-8)


def test_numeric_budget_flag():
    # hard oscillatory integrand with a tiny budget: must flag, not lie
    q = integrate_numeric(UNIT_SQUARE,
                          lambda pts: np.sin(40 * pts[:, 0]) * np.cos(37 * pts[:, 1]),
                          tol=1e-14, max_subdivisions=5)
    assert not q.converged
    assert q.error_bound > 1e-14


def test_numeric_deterministic():
    f = lambda pts: np.exp(pts[:, 0])
    q1 = integrate_numeric(INTERVAL, f, tol=1e-11)
    q2 = integrate_numeric(INTERVAL, f, tol=1e-11)
    assert q1.value == q2.value and q1.error_bound == q2.error_bound


# ---------------------------------------------------------------------------
# DH moments


PGL2_DENSITY = DHDensity(1, (DHFactor(affine_form([1], 1), 2, F(1)),))


def test_dh_moments_pgl2():
    m = dh_moments(INTERVAL, PGL2_DENSITY, ConstantWeight(F(1)), [])
    assert m.exact
    assert m.mass == F(8, 3)
    assert m.first_moment == (F(4, 3),)
    assert m.barycenter == (F(1, 2),)


def test_dh_moments_constant_weight_cancels():
    m1 = dh_moments(INTERVAL, PGL2_DENSITY, ConstantWeight(F(1)), [])
    m7 = dh_moments(INTERVAL, PGL2_DENSITY, ConstantWeight(F(7)), [])
    assert m1.barycenter == m7.barycenter


def test_dh_moments_degenerate_affine_power_is_constant():
    g = AffinePowerWeight(vec([0]), F(1), 0)
    m = dh_moments(INTERVAL, PGL2_DENSITY, g, [vec([1])])
    assert m.exact and m.barycenter == (F(1, 2),)


def test_dh_moments_polynomial_weight_exact():
    g = PolynomialWeight(Polynomial(1, {(2,): F(1), (0,): F(1)}))
    m = dh_moments(INTERVAL, DHDensity(1, ()), g, [vec([1])])
    # int (x^2+1) dx = 8/3, int x(x^2+1) dx = 0 over [-1,1]
    assert m.exact and m.mass == F(8, 3) and m.first_moment == (F(0),)


def test_dh_moments_numeric_weight_certified():
    g = AffinePowerWeight(vec([F(1, 2)]), F(1), 0.5)
    m = dh_moments(INTERVAL, DHDensity(1, ()), g, [vec([1])])
    assert not m.exact
    # closed forms via u = x/2 + 1 (dx = 2 du, x = 2(u - 1)):
    # mass = 2 int u^(1/2) du;  moment = 4 int (u - 1) u^(1/2) du
    mass = (4.0 / 3.0) * ((1.5) ** 1.5 - (0.5) ** 1.5)
    mom = 4.0 * ((2.0 / 5.0) * (1.5 ** 2.5 - 0.5 ** 2.5)
                 - (2.0 / 3.0) * (1.5 ** 1.5 - 0.5 ** 1.5))
    assert abs(m.mass - mass) <= m.error_bound + 1e-12
    assert abs(m.first_moment[0] - mom) <= m.error_bound + 1e-12


def test_dh_moments_positive_mass_required():
    bad = DHDensity(1, (DHFactor(affine_form([1], -2), 1),))
    with pytest.raises(ValueError):
        dh_moments(INTERVAL, bad, ConstantWeight(F(1)), [])


def test_dh_factor_vanishing_on_polytope_rejected():
    flat = DHDensity(1, (DHFactor(affine_form([0], 0), 1),))
    with pytest.raises(ZeroFactorError):
        flat.check_positive_on(INTERVAL.vertex_list)


def test_weight_constant_detection():
    assert weight_constant_value(ConstantWeight(F(3))) == 3
    assert weight_constant_value(AffinePowerWeight(vec([0]), F(2), 3)) == 8
    assert weight_constant_value(AffinePowerWeight(vec([0]), F(1), -4.5)) == 1
    assert weight_constant_value(AffinePowerWeight(vec([1]), F(1), 0.5)) is None


# ---------------------------------------------------------------------------
# Monte Carlo consistency (seeded; exact engine vs sampling)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_monte_carlo_consistency_small(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 2)
    pts = [vec([rng.randint(-3, 3) for _ in range(dim)]) for _ in range(dim + 3)]
    v = VPolytope(dim, pts)
    if v.affine_dim < dim:
        return
    terms = {tuple(rng.randint(0, 2) for _ in range(dim)): F(rng.randint(-3, 3))
             for _ in range(3)}
    poly = Polynomial(dim, terms)
    exact = float(integrate_poly(v, poly))
    lo = np.array([min(float(p[i]) for p in v.vertices) for i in range(dim)])
    hi = np.array([max(float(p[i]) for p in v.vertices) for i in range(dim)])
    box_vol = float(np.prod(hi - lo))
    nprng = np.random.default_rng(seed)
    samples = nprng.uniform(lo, hi, size=(200_000, dim))
    forms, _ = v.hrep
    inside = np.ones(len(samples), dtype=bool)
    for f in forms:
        inside &= samples @ np.array([float(c) for c in f.normal]) + float(f.offset) >= 0
    vals = poly.eval_float(samples) * inside
    est = box_vol * vals.mean()
    se = box_vol * vals.std(ddof=1) / np.sqrt(len(samples))
    assert abs(est - exact) <= 4 * se + 1e-9
