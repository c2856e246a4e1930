import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import algebra
from oracles import scalar_sym, vp
from padic_cherednik.opalg import LocalizedCoeff
from padic_cherednik.padic import (
    CapTooSmall,
    LatticeLevel,
    TruncatedHElement,
    certify_cherednik_level,
    element_gauge,
    gauge_report,
    gauss_valuation,
    localized_valuation,
    shilov_in_domain,
    tower_map,
    truncated_gauge,
    truncated_multiply,
)
from padic_cherednik.polys import MultiPoly
from padic_cherednik.scalars import INF, FieldSpec, Scalar
from strategies import polys

P5 = FieldSpec(1, 5, 20)
FIFTH = Scalar(1) / 5


def lattice_elements(alg, n, order=2, degree=2, p=5):
    """Random elements whose coefficients carry p^(n|alpha| + extra)."""

    def build(rng):
        a = alg.random_element(rng, order, degree, 3, coeff_range=4)
        extra = rng.randint(0, 2)
        return alg.element({k: f.scale(Scalar(p) ** (n * sum(k[1]) + extra)) for k, f in a.terms.items()})

    return st.randoms(use_true_random=False).map(build)


def integral_polys(r, degree=3):
    return polys(r, degree, 4, st.fractions(min_value=-200, max_value=200, max_denominator=7).map(Scalar))


# -- valuations ----------------------------------------------------------------------------


def test_gauss_valuation_examples():
    f = MultiPoly(2, {(1, 0): Scalar(25), (0, 1): Scalar(10)})
    assert gauss_valuation(f, P5) == 1
    assert gauss_valuation(MultiPoly(2), P5) == INF
    assert gauss_valuation(MultiPoly.const(FIFTH, 2), P5) == -1


def test_localized_valuation_examples(s3):
    arr = s3.skew.arr
    c = LocalizedCoeff(MultiPoly.const(5, 3), [1, 0, 0], arr)
    assert localized_valuation(c, LatticeLevel(0, 2), P5) == -1
    assert localized_valuation(c, LatticeLevel(0, 0), P5) == 1
    assert localized_valuation(LocalizedCoeff.const(0, arr), LatticeLevel(0, 0), P5) == INF


def test_shilov_point():
    form = [Scalar(5), Scalar(-5)]
    assert not shilov_in_domain([form], LatticeLevel(0, 0), P5)
    assert shilov_in_domain([form], LatticeLevel(0, 1), P5)
    assert shilov_in_domain([[Scalar(1), Scalar(-1)]], LatticeLevel(0, 0), P5)


def test_levels_are_non_negative():
    with pytest.raises(ValueError):
        LatticeLevel(-1, 0)


@settings(max_examples=200)
@given(integral_polys(2), integral_polys(2))
def test_gauss_valuation_is_multiplicative(f, g):
    assert gauss_valuation(f * g, P5) == gauss_valuation(f, P5) + gauss_valuation(g, P5)
    if f:
        assert gauss_valuation(f, P5) == min(vp(scalar_sym(c), 5) for c in f.terms.values())


@settings(max_examples=60)
@given(integral_polys(2), integral_polys(2))
def test_gauss_valuation_ultrametric(f, g):
    assert gauss_valuation(f + g, P5) >= min(gauss_valuation(f, P5), gauss_valuation(g, P5))


# -- certification ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["z2", "s3", "b2"])
def test_certification_grid_integral_parameters(name, request):
    alg = request.getfixturevalue(name)
    for n in range(4):
        for m in range(4):
            assert certify_cherednik_level(alg, LatticeLevel(n, m), P5) == (n >= m)


def test_certification_grid_with_p_in_denominator():
    alg = algebra("symmetric", 3, c=(FIFTH,))
    for n in range(4):
        for m in range(4):
            assert certify_cherednik_level(alg, LatticeLevel(n, m), P5) == (n >= m + 1)


def test_certification_scales_with_t():
    alg = algebra("cyclic", c=(Scalar(1) / 3,), t=5)
    assert not certify_cherednik_level(alg, LatticeLevel(0, 0), P5)
    assert certify_cherednik_level(alg, LatticeLevel(1, 0), P5)


# -- gauges ----------------------------------------------------------------------------------


def test_gauge_examples(z2):
    one = LatticeLevel(1, 0)
    assert element_gauge(z2.D(0), one, P5) == -1
    assert element_gauge(z2.D(0).scale(5), one, P5) == 0
    assert element_gauge((z2.g(1) * z2.D(0) ** 2).scale(5), one, P5) == -1
    assert element_gauge(z2.x(0), LatticeLevel(3, 0), P5) == 0
    assert element_gauge(z2.zero(), one, P5) == INF


def test_gauge_report_fields(z2):
    rep = gauge_report(z2.D(0).scale(25), LatticeLevel(1, 1), P5)
    assert rep == {"level": {"n": 1, "m": 1}, "element": str(z2.D(0).scale(25)), "gauge": 1, "certified": True}
    assert gauge_report(z2.zero(), LatticeLevel(1, 1), P5)["gauge"] == "inf"


@pytest.mark.parametrize("n", [1, 2])
@settings(max_examples=30)
@given(data=st.data())
def test_gauge_submultiplicative_z2(z2, n, data):
    level = LatticeLevel(n, n)
    a = data.draw(lattice_elements(z2, n))
    b = data.draw(lattice_elements(z2, n))
    assert element_gauge(a * b, level, P5) >= element_gauge(a, level, P5) + element_gauge(b, level, P5)


@settings(max_examples=10)
@given(data=st.data())
def test_gauge_submultiplicative_s3(s3, data):
    level = LatticeLevel(1, 0)
    a = data.draw(lattice_elements(s3, 1, 1, 1))
    b = data.draw(lattice_elements(s3, 1, 1, 1))
    assert element_gauge(a * b, level, P5) >= element_gauge(a, level, P5) + element_gauge(b, level, P5)


@settings(max_examples=40)
@given(data=st.data())
def test_gauge_of_sum(z2, data):
    level = LatticeLevel(1, 0)
    a = data.draw(lattice_elements(z2, 1))
    b = data.draw(lattice_elements(z2, 1))
    assert element_gauge(a + b, level, P5) >= min(element_gauge(a, level, P5), element_gauge(b, level, P5))


@given(data=st.data())
def test_gauge_drops_by_order_going_up(z2, data):
    a = data.draw(lattice_elements(z2, 1))
    top = max(sum(k[1]) for k in a.terms) if a.terms else 0
    g1 = element_gauge(a, LatticeLevel(1, 0), P5)
    g2 = element_gauge(a, LatticeLevel(2, 0), P5)
    assert g1 >= g2 >= g1 - top


# -- truncated tower -------------------------------------------------------------------------


def test_truncated_product_vanishes(z2):
    spec = FieldSpec(1, 5, 3)
    a = TruncatedHElement.from_element(z2.D(0).scale(25), 1, 3, spec)
    b = TruncatedHElement.from_element(z2.D(0).scale(5), 1, 3, spec)
    assert a.cap == 3
    assert not truncated_multiply(a, b).terms


def test_cap_too_small(z2):
    spec = FieldSpec(1, 5, 3)
    a = TruncatedHElement.from_element(z2.D(0).scale(5), 1, 3, spec, cap=1)
    with pytest.raises(CapTooSmall):
        truncated_multiply(a, a)


def test_lattice_membership_enforced(z2):
    with pytest.raises(ValueError):
        TruncatedHElement.from_element(z2.D(0), 1, 3, FieldSpec(1, 5, 3))
    with pytest.raises(ValueError):
        TruncatedHElement.from_element(z2.x(0), 0, 3, FieldSpec(1, 5, 3))


def test_tower_stops_at_level_one(z2):
    a = TruncatedHElement.from_element(z2.x(0), 1, 3, FieldSpec(1, 5, 3))
    with pytest.raises(ValueError):
        tower_map(a)


def test_mixed_levels_rejected(z2):
    spec = FieldSpec(1, 5, 3)
    a = TruncatedHElement.from_element(z2.x(0), 1, 3, spec)
    b = TruncatedHElement.from_element(z2.x(0), 2, 3, spec)
    with pytest.raises(ValueError):
        a + b


@settings(max_examples=25)
@given(data=st.data())
def test_tower_map_is_a_ring_map(z2, data):
    spec = FieldSpec(1, 5, 4)
    a = TruncatedHElement.from_element(data.draw(lattice_elements(z2, 3, 2, 2)), 3, 4, spec)
    b = TruncatedHElement.from_element(data.draw(lattice_elements(z2, 3, 2, 2)), 3, 4, spec)
    assert tower_map(truncated_multiply(a, b)) == truncated_multiply(tower_map(a), tower_map(b))
    assert tower_map(a + b) == tower_map(a) + tower_map(b)


@settings(max_examples=25)
@given(data=st.data())
def test_tower_map_does_not_lower_gauge(z2, data):
    spec = FieldSpec(1, 5, 4)
    a = TruncatedHElement.from_element(data.draw(lattice_elements(z2, 3)), 3, 4, spec)
    down = tower_map(a)
    assert truncated_gauge(down) >= truncated_gauge(a)
    assert truncated_gauge(tower_map(down)) >= truncated_gauge(down)


@settings(max_examples=25)
@given(data=st.data())
def test_truncation_agrees_with_exact_product(z2, data):
    spec = FieldSpec(1, 5, 4)
    x = data.draw(lattice_elements(z2, 1, 2, 2))
    y = data.draw(lattice_elements(z2, 1, 2, 2))
    a = TruncatedHElement.from_element(x, 1, 4, spec)
    b = TruncatedHElement.from_element(y, 1, 4, spec)
    assert truncated_multiply(a, b) == TruncatedHElement.from_element(x * y, 1, 4, spec)


def test_gauss_valuation_of_product_with_roots_mod_p():
    x = MultiPoly.var(0, 1)
    f = (x - MultiPoly.const(2, 1)) * (x - MultiPoly.const(3, 1))
    assert gauss_valuation(f, P5) == 0
    assert gauss_valuation(MultiPoly(1, {(1,): Scalar(5), (0,): Scalar(25)}), P5) == 1


def test_localized_valuation_of_inverse_form(z2):
    c = LocalizedCoeff(MultiPoly.one(1), [1], z2.skew.arr)
    assert localized_valuation(c, LatticeLevel(0, 2), P5) == -2
    assert localized_valuation(LocalizedCoeff.poly(MultiPoly.const(25, 1), z2.skew.arr), LatticeLevel(0, 2), P5) == 2


def test_weyl_lattice_always_certified():
    alg = algebra("symmetric", 3, c=(0,))
    assert all(certify_cherednik_level(alg, LatticeLevel(n, m), P5) for n in range(4) for m in range(4))


def test_gauge_of_level_zero_examples(z2):
    assert element_gauge(z2.one(), LatticeLevel(0, 0), P5) == 0
    assert element_gauge(z2.D(0), LatticeLevel(0, 0), P5) == 0
