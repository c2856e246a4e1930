import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_hensel, scalar_sym, vp
from padic_cherednik.scalars import (
    INF,
    FieldSpec,
    PrecisionExhausted,
    Scalar,
    TruncatedPadic,
    embed,
    hensel_lift_root,
    valuation,
)

# frozen from brute_hensel / direct lifting, re-checked in test_frozen_values_match_oracle
HENSEL_4_5_2 = 7
VALUATION_ZETA_MINUS_2 = 1

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def cyclotomic(m: int):
    return st.lists(fractions, min_size=1, max_size=6).map(lambda cs: Scalar.from_coeffs(cs, m))


def p_integral(p: int):
    return st.builds(lambda a, b: Fraction(a, b), st.integers(-500, 500), st.integers(1, 40).filter(lambda b: b % p))


# -- worked examples -------------------------------------------------------------------


def test_valuation_of_rational():
    assert valuation(Scalar(25) / 3, FieldSpec(1, 5)) == 2


def test_valuation_of_zero_is_infinite():
    assert valuation(Scalar(0), FieldSpec(1, 5)) == INF


def test_valuation_zeta_minus_two():
    spec = FieldSpec(4, 5, 10)
    assert valuation(Scalar.zeta(4) - 2, spec) == VALUATION_ZETA_MINUS_2


@pytest.mark.parametrize(
    "m, p, N, expected",
    [(1, 5, 3, 1), (2, 5, 3, 124), (4, 5, 2, HENSEL_4_5_2)],
)
def test_hensel_lift_root(m, p, N, expected):
    root = hensel_lift_root(FieldSpec(m, p, N))
    assert root.residue == expected
    assert root.N == N


def test_frozen_values_match_oracle():
    assert brute_hensel(4, 5, 2) == HENSEL_4_5_2
    for N in (3, 4):
        r = brute_hensel(4, 5, N)
        assert sp.multiplicity(5, r - 2) == VALUATION_ZETA_MINUS_2


@pytest.mark.parametrize("m, p", [(3, 7), (4, 5), (5, 11), (6, 7), (8, 17)])
def test_hensel_agrees_with_brute_force(m, p):
    for N in (1, 2, 3):
        assert hensel_lift_root(FieldSpec(m, p, N)).residue == brute_hensel(m, p, N)


def test_precision_exhausted_is_loud():
    with pytest.raises(PrecisionExhausted):
        valuation(Scalar.zeta(4) - 2, FieldSpec(4, 5, 1))


@pytest.mark.parametrize("bad", [dict(m=4, p=7), dict(m=1, p=6), dict(m=1, p=5, N=0), dict(m=0, p=5)])
def test_field_spec_validation(bad):
    with pytest.raises(ValueError):
        FieldSpec(**bad)


def test_embed_respects_denominators():
    spec = FieldSpec(1, 5, 3)
    assert embed(Scalar(1) / 2, spec).residue * 2 % 125 == 1
    with pytest.raises(ValueError):
        embed(Scalar(1) / 5, spec)


def test_truncated_padic_wraps():
    a = TruncatedPadic(120, 5, 3)
    b = TruncatedPadic(10, 5, 3)
    assert (a + b).residue == 5
    assert (a * b).residue == 1200 % 125
    assert TruncatedPadic(0, 5, 3).valuation() == 3
    assert TruncatedPadic(50, 5, 3).valuation() == 2
    assert TruncatedPadic(57, 5, 3).reduce(2).residue == 7


def test_parse_and_print():
    assert Scalar.parse("-3/4") == Scalar(Fraction(-3, 4))
    z = Scalar.parse("1/2 - zeta^3", 4)
    assert z == Scalar(1) / 2 - Scalar.zeta(4, 3)
    assert Scalar.parse(str(z), 4) == z
    with pytest.raises(ValueError):
        Scalar.parse("abc")
    with pytest.raises(ValueError):
        Scalar.parse("zeta", 1)


def test_rationals_are_canonical():
    z = Scalar.zeta(4)
    assert (z * z).is_rational()
    assert z * z == Scalar(-1)
    assert hash(z * z) == hash(Scalar(-1))


# -- field axioms against sympy ----------------------------------------------------------


@pytest.mark.parametrize("m", [3, 4, 5, 6])
@settings(max_examples=25)
@given(data=st.data())
def test_cyclotomic_arithmetic_matches_sympy(m, data):
    a = data.draw(cyclotomic(m))
    b = data.draw(cyclotomic(m))
    for ours, theirs in ((a + b, scalar_sym(a) + scalar_sym(b)), (a * b, scalar_sym(a) * scalar_sym(b))):
        assert abs(sp.N(scalar_sym(ours) - theirs, 60)) < 1e-40
    if b:
        assert a / b * b == a


@given(cyclotomic(4), cyclotomic(4), cyclotomic(4))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Scalar(0)


# -- valuation properties ----------------------------------------------------------------


@settings(max_examples=500)
@given(p_integral(5).map(Scalar) | fractions.map(Scalar), fractions.map(Scalar))
def test_rational_valuation_multiplicative(a, b):
    spec = FieldSpec(1, 5)
    assert valuation(a * b, spec) == valuation(a, spec) + valuation(b, spec)
    if a:
        assert valuation(a, spec) == vp(sp.Rational(str(a.rational())), 5)


@settings(max_examples=500)
@given(cyclotomic(4), cyclotomic(4))
def test_cyclotomic_valuation_multiplicative(a, b):
    spec = FieldSpec(4, 5, 40)
    try:
        va, vb, vab = valuation(a, spec), valuation(b, spec), valuation(a * b, spec)
    except PrecisionExhausted:
        return
    assert vab == va + vb


@given(cyclotomic(4), cyclotomic(4))
def test_valuation_ultrametric(a, b):
    spec = FieldSpec(4, 5, 40)
    va, vb, vs = valuation(a, spec), valuation(b, spec), valuation(a + b, spec)
    assert vs >= min(va, vb)
    if va != vb:
        assert vs == min(va, vb)


@given(st.sampled_from([(3, 7), (4, 5), (4, 13), (5, 11)]), st.integers(1, 12))
def test_hensel_coherent_across_precision(mp, N):
    m, p = mp
    hi = hensel_lift_root(FieldSpec(m, p, N + 1))
    lo = hensel_lift_root(FieldSpec(m, p, N))
    assert hi.residue % p**N == lo.residue


@given(cyclotomic(4).filter(bool))
def test_embedding_is_a_ring_map(a):
    spec = FieldSpec(4, 5, 12)
    b = a * a + Scalar.zeta(4)
    if valuation(a, spec) < 0 or valuation(b, spec) < 0:
        return
    ea, eb = embed(a, spec), embed(b, spec)
    assert embed(a * b, spec) == ea * eb
    assert embed(a + b, spec) == ea + eb
    assert math.isfinite(valuation(a, spec))
