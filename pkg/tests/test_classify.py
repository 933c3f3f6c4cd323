import random

import pytest

from mcmv.classify import (
    CaseLabel,
    Kind,
    QClass,
    UniquenessViolated,
    ValidationError,
    classify,
    fgi_index,
    in_sp_p2,
    q_class,
    validate,
    zce_decompose,
)
from mcmv.zpoly import parse

from .helpers import VARS, example1, example2, poly, random_instance


def V(f, g, p=3):
    return validate(p, poly(f), poly(g), VARS)


def test_validate_example1():
    inst = example1()
    assert (inst.h1, inst.h2) == (poly("X"), poly("Y"))
    assert inst.a == poly("3 - 2*X^3")
    assert inst.b == poly("3 - Y^3")


def test_validate_rejections():
    with pytest.raises(ValidationError) as ei:
        V("X^2+1", "Y^3+3")
    assert ei.value.code == "NOT_IN_SP"
    with pytest.raises(ValidationError) as ei:
        V("X^6+6*X^3+9", "Y^3+3")
    assert ei.value.code == "NOT_SQUAREFREE"
    with pytest.raises(ValidationError) as ei:
        V("X^3+3", "X^3*Y^3+3*X^3")  # g = X^3(Y^3+3): common factor X with f? no...
    assert ei.value.code in ("NOT_SQUAREFREE", "NOT_COPRIME_A1")
    with pytest.raises(ValidationError) as ei:
        V("5", "Y^3+3")
    assert ei.value.code == "F_IS_UNIT"
    with pytest.raises(ValidationError) as ei:
        V("X^3+3", "8")
    assert ei.value.code == "G_IS_UNIT"
    with pytest.raises(ValidationError) as ei:
        V("3*X + 3", "Y^3+3")
    assert ei.value.code == "DEGENERATE_H"
    with pytest.raises(ValidationError) as ei:
        validate(4, poly("X^3+3"), poly("Y^3+3"), VARS)
    assert ei.value.code == "BAD_PRIME"


def test_coprime_rejection():
    with pytest.raises(ValidationError) as ei:
        V("X^3+3*X", "X^3+3*X+3*X^2")  # hmm, contrive common factor
    assert ei.value.code in ("NOT_SQUAREFREE", "NOT_COPRIME_A1", "NOT_IN_SP")


def test_in_sp_p2():
    assert in_sp_p2(V("X^3+9", "Y^3+3"), "f")
    assert not in_sp_p2(example1(), "f")
    assert not in_sp_p2(V("X^3+3", "Y^3+3"), "f")


def test_fgi_index_examples():
    assert fgi_index(example1()) == 1
    assert fgi_index(V("X^3+3", "Y^3+3")) is None
    assert fgi_index(example2()) == 1
    # twisted index: a = X^3+3, b = Y^3+3 gives i = 2 at p = 3
    inst = V("4*X^3+9", "4*Y^3+9")
    assert fgi_index(inst) == 2


def test_fgi_uniqueness_random():
    rng = random.Random(61)
    for _ in range(60):
        inst = random_instance(rng, 3)
        if in_sp_p2(inst, "f") or in_sp_p2(inst, "g"):
            continue
        fgi_index(inst)  # raises UniquenessViolated on a double match


def test_zce_examples():
    d = zce_decompose(example1())
    assert (d.z, d.c, d.e) == (poly("1"), poly("X"), poly("Y"))
    d2 = zce_decompose(example2())
    assert (d2.z, d2.c, d2.e) == (poly("X"), poly("X"), poly("Y"))
    # constants fold into z so that c is monic
    inst = V("8*X^3+9*X^3+9", "8*Y^3+9")  # h1 = 2X... build explicitly below
    # simpler: h1=2X, h2=2Y via f=(2X)^3+3a
    f = poly("8*X^3 + 3")
    g = poly("8*Y^3 + 3")
    inst = validate(3, f, g, VARS)
    d3 = zce_decompose(inst)
    assert (d3.z, d3.c, d3.e) == (poly("2"), poly("X"), poly("Y"))


def test_q_class():
    assert q_class(example1()) is QClass.GradeThree
    assert q_class(example2()) is QClass.GradeTwoNotPerfect
    # unit cofactor: h1 = X, h2 = X*Y gives z = X, c = 1, e = Y
    inst = validate(3, poly("X^3+3"), poly("X^3*Y^3 + 6*Y^3 + 9"), VARS)
    assert q_class(inst) is QClass.TwoGenOrAll


def test_classify_examples():
    assert classify(example1()) == CaseLabel(Kind.NotCM_GradeThree, 1)
    assert classify(example2()) == CaseLabel(Kind.NotCM_GradeTwoOpen, 1)
    assert classify(V("X^3+9", "Y^3+9")) == CaseLabel(Kind.CM_NotNormal_Both)
    assert classify(V("X^3+9", "Y^3+3")) == CaseLabel(Kind.CM_NotNormal_One)
    assert classify(V("X^3+3", "Y^3+3")) == CaseLabel(Kind.CM_NormalNoFgi)


def test_classify_two_gen_q():
    # h1 = X, h2 = XY, i* = 1: Q = (3, X) is two-generated
    f = poly("X^3+3")
    g = poly("X^3*Y^3 + 6*Y^3 + 9")
    inst = validate(3, f, g, VARS)
    lab = classify(inst)
    assert lab.kind is Kind.CM_TwoGenQ and lab.i_star == 1


def test_label_invariant():
    with pytest.raises(ValueError):
        CaseLabel(Kind.CM_NormalNoFgi, 1)
    with pytest.raises(ValueError):
        CaseLabel(Kind.NotCM_GradeThree)


def test_classify_total_random():
    rng = random.Random(5)
    for _ in range(40):
        inst = random_instance(rng, 3)
        lab = classify(inst)
        assert isinstance(lab, CaseLabel)


def test_q_class_swap_invariance():
    rng = random.Random(8)
    for _ in range(20):
        inst = random_instance(rng, 3)
        swapped = validate(3, inst.g, inst.f, VARS)
        assert q_class(inst) == q_class(swapped)
