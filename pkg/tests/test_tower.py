import random

import pytest

from mcmv.tower import (
    DenominatorError,
    KElem,
    Lattice,
    build_epsilon,
    build_named,
    c_elem,
    cprime,
    p_membership,
    shifted_monomial,
)
from mcmv.zpoly import IntPoly, parse

from .helpers import example1, poly, random_h, random_instance

V1 = ("X",)


def test_cprime_p3():
    # (W^3 - h^3) - (W - h)^3 = 3hW(W - h), so C' = h*W
    c = cprime(poly("X", V1), 3)
    assert list(c) == [IntPoly.zero(1), parse("X", V1)]
    assert cprime(IntPoly.zero(1), 3) == ()


def test_cprime_defining_identity_random():
    rng = random.Random(13)
    for p in (3, 5):
        for _ in range(25):
            h = random_h(rng, p, nvars=2)
            c = cprime(h, p)
            hw = h.extend_vars(1)
            w = IntPoly.variable(3, 2)
            cp = IntPoly.zero(3)
            for s, q in enumerate(c):
                cp = cp + q.extend_vars(1) * w ** s
            lhs = p * (w - hw) * cp
            rhs = (w ** p - hw ** p) - (w - hw) ** p
            assert lhs == rhs


def test_cprime_congruence():
    # C' = h^(p-1) mod (p, W - h): substitute W -> h and reduce mod p
    rng = random.Random(29)
    for p in (3, 5):
        for _ in range(20):
            h = random_h(rng, p, nvars=2)
            c = cprime(h, p)
            val = IntPoly.zero(2)
            for s, q in enumerate(c):
                val = val + q * h ** s
            assert ((val - h ** (p - 1)).reduce_mod(p)).is_zero()


def test_defining_relations():
    inst = example1()
    w = KElem.radical(inst, 0)
    u = KElem.radical(inst, 1)
    assert w * w * w == KElem.from_poly(inst, inst.f)
    assert u ** 3 == KElem.from_poly(inst, inst.g)


def test_instance_example1_data():
    inst = example1()
    assert inst.h1 == poly("X") and inst.h2 == poly("Y")
    assert inst.a == poly("3 - 2*X^3")
    assert inst.b == poly("3 - Y^3")
    # c1' = X*w
    c1 = c_elem(inst, 0)
    assert c1.k == 0
    assert c1.coeffs[inst.index(1, 0)] == poly("X")


def test_shift_power_identity():
    # (w - h1)^p = p*(a - c1'(w - h1)) = p*k1
    inst = example1()
    p = inst.p
    lhs = shifted_monomial(inst, p, 0)
    k1 = build_named(inst, "k1")
    assert lhs == p * k1
    rhs = shifted_monomial(inst, 0, p)
    k2 = build_named(inst, "k2")
    assert rhs == p * k2


def test_mul_eta_product():
    # eta1 * eta2 = (a - c1'(w-h1)) * (b - c2'(u-h2)) lands in A
    inst = example1()
    e1 = build_named(inst, "eta", 1)
    e2 = build_named(inst, "eta", 2)
    k1 = build_named(inst, "k1")
    k2 = build_named(inst, "k2")
    prod = e1 * e2
    assert prod.k == 0
    assert prod == k1 * k2


def test_mul_commutative_associative_random():
    rng = random.Random(31)
    inst = example1()

    def rand_elem():
        coeffs = [
            IntPoly(2, {(rng.randrange(2), rng.randrange(2)): rng.randrange(-4, 5)})
            for _ in range(9)
        ]
        return KElem(inst, rng.randrange(2), coeffs)

    for _ in range(15):
        x, y, z = rand_elem(), rand_elem(), rand_elem()
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_build_named_m_and_tau():
    inst = example1()
    m1 = build_named(inst, "m", 1)
    w = KElem.radical(inst, 0)
    u = KElem.radical(inst, 1)
    assert m1 == w * u - KElem.from_poly(inst, poly("X*Y"))
    tau1 = build_named(inst, "tau1")
    # p*tau1 = w^2 + h1 w + h1^2
    expect = w * w + poly("X") * w + KElem.from_poly(inst, poly("X^2"))
    assert tau1 * 3 == expect
    # tau1 = p^-1 (w-h1)^(p-1) + c1'
    assert tau1 == shifted_monomial(inst, 2, 0, k=1) + c_elem(inst, 0)


def test_tau_quadratic_relation_when_deep():
    # f = X^3 + 9: a = 3, a' = 1; tau1^2 - c1' tau1 - a'(w-h1)^(p-2) = 0
    from mcmv.classify import validate

    inst = validate(3, poly("X^3+9"), poly("Y^3+3"), ("X", "Y"))
    tau1 = build_named(inst, "tau1")
    c1 = c_elem(inst, 0)
    aprime = KElem.from_poly(inst, inst.a.div_int(3))
    rel = tau1 * tau1 - c1 * tau1 - aprime * shifted_monomial(inst, 1, 0)
    assert rel.is_zero()


def test_epsilon_example1():
    inst = example1()
    eps = build_epsilon(inst, poly("1"), poly("X"), poly("Y"))
    assert eps.k == 1
    expect = (
        -poly("X^2") * shifted_monomial(inst, 0, 2)
        + poly("X*Y") * shifted_monomial(inst, 1, 1)
        - poly("Y^2") * shifted_monomial(inst, 2, 0)
    ).scale_down(1)
    assert eps == expect
    assert (3 * eps).k == 0
    with pytest.raises(ValueError):
        build_epsilon(inst, poly("1"), poly("0"), poly("Y"))


def test_p_membership():
    inst = example1()
    w = KElem.radical(inst, 0)
    h1 = KElem.from_poly(inst, inst.h1)
    assert p_membership(w - h1)
    assert not p_membership(KElem.from_poly(inst, 1))
    # the i = 1 product-criterion factor a h2^p + b h1^p lies in P
    val = KElem.from_poly(inst, inst.a * inst.h2 ** 3 + inst.b * inst.h1 ** 3)
    assert p_membership(val)
    with pytest.raises(DenominatorError):
        p_membership(build_named(inst, "eta", 1))


def test_p_membership_ideal_property():
    rng = random.Random(41)
    inst = example1()
    w = KElem.radical(inst, 0)
    h1 = KElem.from_poly(inst, inst.h1)
    x = w - h1
    for _ in range(10):
        coeffs = [
            IntPoly(2, {(rng.randrange(2), rng.randrange(2)): rng.randrange(-4, 5)})
            for _ in range(9)
        ]
        y = KElem(inst, 0, coeffs)
        assert p_membership(x * y)


def test_shifted_coeffs_round_trip():
    rng = random.Random(47)
    inst = example1()
    for _ in range(10):
        coeffs = [
            IntPoly(2, {(rng.randrange(3), rng.randrange(3)): rng.randrange(-9, 10)})
            for _ in range(9)
        ]
        x = KElem(inst, rng.randrange(2), coeffs)
        s = x.shifted_coeffs()
        acc = KElem.from_poly(inst, 0)
        for j in range(3):
            for i in range(3):
                q = s[inst.index(i, j)]
                if not q.is_zero():
                    acc = acc + q * shifted_monomial(inst, i, j)
        assert acc.scale_down(x.k) == x


def test_lattice_matrix_and_column():
    inst = example1()
    one = KElem.from_poly(inst, 1)
    eta = build_named(inst, "eta", 1)
    lat = Lattice(inst, [one, eta], labels=["one", "eta[1]"])
    assert lat.kmax == 1
    assert lat.matrix[0][0] == poly("3")
    col = lat.column_of(one)
    assert col[0] == poly("3")
    x = lat.elem_from_coeffs([poly("X"), poly("Y")])
    assert x == poly("X") * one + poly("Y") * eta
    t3 = shifted_monomial(inst, 2, 2, k=2)
    with pytest.raises(DenominatorError):
        lat.column_of(t3)


def test_render_deterministic():
    inst = example1()
    tau1 = build_named(inst, "tau1")
    s = tau1.render()
    assert s == "3^-1 * ( X^2 + (X)*w + (1)*w^2 )"


def test_identity_suite_random_instances():
    # the acceptance identity block, small scale: relations hold on samples
    rng = random.Random(99)
    for p, count in ((3, 12), (5, 4)):
        for _ in range(count):
            inst = random_instance(rng, p)
            k1 = build_named(inst, "k1")
            assert shifted_monomial(inst, p, 0) == p * k1
            k2 = build_named(inst, "k2")
            assert shifted_monomial(inst, 0, p) == p * k2
