from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfquiver.cyclo import (CycScalar, ScalarSyntaxError, cyclotomic_poly, format_scalar, make_context, nth_root,
                              parse_scalar)

CTX = {n: make_context(n) for n in range(2, 9)}

orders = st.sampled_from(sorted(CTX))
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalar_triples(draw):
    ctx = CTX[draw(orders)]
    mk = lambda: CycScalar(ctx, draw(st.lists(small, min_size=ctx.degree, max_size=ctx.degree)))
    return mk(), mk(), mk()


@settings(max_examples=150, deadline=None)
@given(scalar_triples())
def test_field_axioms(t):
    a, b, c = t
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == a.ctx.zero()
    if not a.is_zero():
        assert a * a.inverse() == a.ctx.one()
        assert (b / a) * a == b


@settings(max_examples=100, deadline=None)
@given(scalar_triples())
def test_format_parse_round_trip(t):
    for s in t:
        assert parse_scalar(s.ctx, format_scalar(s)) == s


@settings(max_examples=60, deadline=None)
@given(scalar_triples())
def test_complex_embedding_is_a_homomorphism(t):
    a, b, _ = t
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9
    assert abs((a + b).to_complex() - a.to_complex() - b.to_complex()) < 1e-9


@pytest.mark.parametrize("n", sorted(CTX))
def test_roots_of_unity(n):
    ctx = CTX[n]
    zeta, q, z = ctx.zeta(), ctx.q(), ctx.z()
    assert zeta ** n == ctx.one()
    assert all(zeta ** k != ctx.one() for k in range(1, n))
    assert z ** n == -ctx.one()
    assert q * q == zeta.inverse()
    assert q ** (-2) == zeta
    assert ctx.root_power(2 * n + 3) == ctx.root_power(3)
    total = ctx.zero()
    for k in range(n):
        total = total + zeta ** k
    assert total.is_zero()


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_small_order_reductions():
    ctx = CTX[3]
    # z^2 = z - 1 in Q(z), z a primitive 6th root
    assert parse_scalar(ctx, "z^2") == parse_scalar(ctx, "z - 1")
    assert parse_scalar(ctx, "z^3") == parse_scalar(ctx, "-1")
    assert parse_scalar(ctx, "z^4") == parse_scalar(ctx, "-z")
    assert parse_scalar(ctx, "z^4") != parse_scalar(ctx, "-z + 1")
    assert format_scalar(parse_scalar(CTX[2], "z^2")) == "-1"


def test_parser_accepts_the_documented_grammar():
    ctx = CTX[4]
    assert parse_scalar(ctx, "2*(1/2 + z)^2 - z^-1") == (ctx.scalar(Fraction(1, 2)) + ctx.z()) ** 2 * 2 - ctx.z().inverse()
    assert parse_scalar(ctx, "z^(-1)") == parse_scalar(ctx, "-z^3")
    assert parse_scalar(ctx, "z**2") == parse_scalar(ctx, "z^2")
    assert parse_scalar(ctx, "-3/4") == ctx.scalar(Fraction(-3, 4))


@pytest.mark.parametrize("text", ["", "1 +", "z^", "(1", "q", "zeta", "z^z", "y", "1/0"])
def test_parser_rejects_garbage(text):
    with pytest.raises((ScalarSyntaxError, ZeroDivisionError, ValueError)):
        parse_scalar(CTX[3], text)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CTX[2].zero().inverse()


def test_mixing_fields_is_refused():
    with pytest.raises(ValueError):
        CTX[2].one() + CTX[3].one()


@pytest.mark.parametrize("n,text,k", [(3, "-8", 3), (4, "z^2", 2), (2, "-1/4", 2), (6, "27*z^3", 3)])
def test_nth_root(n, text, k):
    s = parse_scalar(CTX[n], text)
    r = nth_root(s, k)
    assert r is not None and r ** k == s


def test_nth_root_reports_absence():
    assert nth_root(parse_scalar(CTX[2], "2"), 2) is None
    # 3u = 1 has no solution mod 12
    assert nth_root(parse_scalar(CTX[6], "27*z"), 3) is None
