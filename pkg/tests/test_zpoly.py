import random

import pytest
from hypothesis import given, settings, strategies as st

from mcmv import zpoly
from mcmv.zpoly import (
    IntPoly,
    PolyParseError,
    UnknownVariableError,
    coprime_a1,
    divexact,
    gcd,
    is_local_unit,
    parse,
    pth_root_mod_p,
    squarefree_local,
    to_string,
    try_divexact,
)

V = ["X", "Y"]


def P(s):
    return parse(s, V)


# ----- parsing ------------------------------------------------------------


def test_parse_example():
    f = P("-5*X^3+9")
    assert f.terms == {(3, 0): -5, (0, 0): 9}


def test_parse_zero():
    assert P("0").is_zero()
    assert P("X - X").is_zero()


def test_parse_syntax_error_position():
    with pytest.raises(PolyParseError) as ei:
        P("X^")
    assert ei.value.pos == 2


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariableError):
        P("X + Z")


def test_parse_no_implicit_multiplication():
    with pytest.raises(PolyParseError):
        P("3 X")
    with pytest.raises(PolyParseError):
        P("(X+1)(Y+1)")


def test_parse_precedence():
    assert P("-X^2") == -(P("X") ** 2)
    assert P("2*X^3") == 2 * P("X") ** 3
    assert P("(X+1)^2") == P("X^2 + 2*X + 1")
    assert P("2^3") == IntPoly.const(2, 8)


def test_parse_signed_integers():
    assert P("-5") == IntPoly.const(2, -5)
    assert P("3 - -5") == IntPoly.const(2, 8)


def _random_poly(rng, nvars=2, maxdeg=4, nterms=5, coeff=9):
    terms = {}
    for _ in range(rng.randrange(nterms + 1)):
        e = tuple(rng.randrange(maxdeg) for _ in range(nvars))
        terms[e] = rng.randrange(-coeff, coeff + 1)
    return IntPoly(nvars, terms)


def test_print_parse_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        f = _random_poly(rng)
        assert parse(to_string(f, V), V) == f


# ----- ring axioms --------------------------------------------------------

small_polys = st.builds(
    lambda items: IntPoly(2, dict(items)),
    st.lists(
        st.tuples(
            st.tuples(st.integers(0, 3), st.integers(0, 3)),
            st.integers(-20, 20),
        ),
        max_size=5,
    ),
)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=150, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


# ----- gcd and division ----------------------------------------------------


def test_divexact_basic():
    f = P("X^2 - Y^2")
    g = P("X - Y")
    assert divexact(f, g) == P("X + Y")
    assert try_divexact(P("X^2 + 1"), P("X + 1")) is None
    assert try_divexact(P("2*X"), P("4*X")) is None
    assert divexact(P("6*X*Y"), P("3*Y")) == P("2*X")


def test_gcd_basic():
    assert gcd(P("X^2 - Y^2"), P("X^2 - 2*X*Y + Y^2")) == P("Y - X")
    assert gcd(P("6"), P("4")) == P("2")
    assert gcd(P("0"), P("-3*X")) == P("3*X")
    assert gcd(P("2*X"), P("3*Y")) == P("1")
    assert gcd(P("X^2*Y"), P("X*Y^2")) == P("X*Y")


def test_gcd_random_products():
    rng = random.Random(21)
    for _ in range(60):
        a = _random_poly(rng, nterms=3, maxdeg=3)
        b = _random_poly(rng, nterms=3, maxdeg=3)
        h = _random_poly(rng, nterms=3, maxdeg=3)
        if a.is_zero() or b.is_zero() or h.is_zero():
            continue
        g = gcd(a * h, b * h)
        # gcd divides both exactly and is divisible by every common factor
        assert try_divexact(a * h, g) is not None
        assert try_divexact(b * h, g) is not None
        assert try_divexact(g, h) is not None


def test_gcd_cofactors_coprime():
    rng = random.Random(5)
    for _ in range(40):
        a = _random_poly(rng, nterms=3, maxdeg=3)
        b = _random_poly(rng, nterms=3, maxdeg=3)
        if a.is_zero() or b.is_zero():
            continue
        g = gcd(a, b)
        ca, cb = divexact(a, g), divexact(b, g)
        gg = gcd(ca, cb)
        assert gg.is_const() and abs(gg.constant_term()) == 1


# ----- p-th roots -----------------------------------------------------------


def test_pth_root_examples():
    assert pth_root_mod_p(P("-5*X^3+9"), 3) == P("X")
    assert pth_root_mod_p(P("4*X^3*Y^3+9"), 3) == P("X*Y")
    assert pth_root_mod_p(P("X^2+1"), 3) is None


def test_pth_root_round_trip():
    rng = random.Random(11)
    for p in (3, 5):
        for _ in range(40):
            h = _random_poly(rng, maxdeg=3, nterms=3)
            f = h ** p + p * _random_poly(rng, maxdeg=4, nterms=3)
            r = pth_root_mod_p(f, p)
            assert r is not None
            assert all(0 <= c < p for c in r.terms.values())
            assert ((r ** p - f).reduce_mod(p)).is_zero()


# ----- local predicates -----------------------------------------------------


def test_is_local_unit():
    assert is_local_unit(P("1 + X"), 3)
    assert not is_local_unit(P("3 + X"), 3)
    assert is_local_unit(P("5"), 3)
    assert not is_local_unit(P("0"), 3)


def test_local_unit_multiplicative():
    rng = random.Random(3)
    for _ in range(100):
        f = _random_poly(rng)
        g = _random_poly(rng)
        assert is_local_unit(f * g, 3) == (is_local_unit(f, 3) and is_local_unit(g, 3))


def test_squarefree_local():
    assert squarefree_local(P("-5*X^3+9"), 3)
    assert not squarefree_local(P("X^2"), 3)
    assert squarefree_local(P("4*X^3*Y^3+9"), 3)
    # (X^3+3)^2 has non-unit repeated factor
    assert not squarefree_local(P("X^6+6*X^3+9"), 3)
    # v_p = 1 is fine, v_p = 2 is not
    assert squarefree_local(P("3*X + 3"), 3)
    assert not squarefree_local(P("9*X + 9"), 3)
    # repeated local-unit factor is harmless, repeated non-unit is not
    assert squarefree_local(P("X") * P("1+X") * P("1+X"), 3)
    assert not squarefree_local(P("X^3") * P("1+X") * P("1+X"), 3)
    with pytest.raises(ValueError):
        squarefree_local(P("0"), 3)


def test_coprime_a1():
    assert coprime_a1(P("-5*X^3+9"), P("-2*Y^3+9"), 3)
    assert not coprime_a1(P("X"), P("X*Y"), 3)
    assert coprime_a1(P("X"), P("1+X"), 3)


def test_leading_and_degree_reject_zero():
    with pytest.raises(ValueError):
        IntPoly.zero(2).leading()
    with pytest.raises(ValueError):
        IntPoly.zero(2).total_degree()


def test_grevlex_order():
    # later-listed variables rank higher: Y > X, X*Y^2 > X^2*Y
    x, y = P("X"), P("Y")
    assert zpoly.grevlex_key((0, 1)) > zpoly.grevlex_key((1, 0))
    assert zpoly.grevlex_key((1, 2)) > zpoly.grevlex_key((2, 1))
    assert (x * x * y + x * y * y).leading()[0] == (1, 2)
