import pytest

from mcmv.classify import CaseLabel, Kind, classify, validate
from mcmv.closure import (
    CaseMismatchError,
    basis_monomials,
    closure_gens,
    conductor_gens,
    dual_via_cofactors,
    ideal_spec,
    kelem_div,
    leading_slot_coverage,
    pstar_gens,
)
from mcmv.tower import KElem, build_named, shifted_monomial
from mcmv.verify import Span

from .helpers import VARS, example1, poly


@pytest.fixture(scope="module")
def ex1():
    inst = example1()
    return inst, classify(inst)


def test_closure_gens_example1(ex1):
    inst, case = ex1
    gset = closure_gens(inst, case)
    assert len(gset.gens) == 10
    assert gset.provenance[-1] == "epsilon"
    assert sum(1 for l in gset.provenance if l.startswith("T1")) == 6
    assert sum(1 for l in gset.provenance if l.startswith("T2")) == 3
    assert leading_slot_coverage(gset)


def test_closure_gens_both_nonnormal():
    inst = validate(3, poly("X^3+9"), poly("Y^3+9"), VARS)
    gset = closure_gens(inst, classify(inst))
    assert len(gset.gens) == 9
    t3 = [x for x, l in zip(gset.gens.gens, gset.provenance) if l == "T3"]
    assert t3 == [shifted_monomial(inst, 2, 2, k=2)]
    assert leading_slot_coverage(gset)
    # tau1 = p^-1 (w-h1)^(p-1) + c1' lies in the span of T
    tau1 = build_named(inst, "tau1")
    sp = Span.of_lattice(gset.gens)
    assert sp.member_elem(gset.gens, tau1)


def test_closure_gens_one_nonnormal_both_orientations():
    for f, g, slot in [("X^3+9", "Y^3+3", (2, 0)), ("X^3+3", "Y^3+9", (0, 2))]:
        inst = validate(3, poly(f), poly(g), VARS)
        case = classify(inst)
        assert case.kind is Kind.CM_NotNormal_One
        gset = closure_gens(inst, case)
        assert len(gset.gens) == 9
        t3 = [x for x, l in zip(gset.gens.gens, gset.provenance) if l == "T3"]
        assert t3 == [shifted_monomial(inst, *slot, k=1)]
        assert leading_slot_coverage(gset)


def test_closure_gens_normal_case_denominators():
    inst = validate(3, poly("X^3+3"), poly("Y^3+3"), VARS)
    gset = closure_gens(inst, classify(inst))
    assert len(gset.gens) == 9
    for x, l in zip(gset.gens.gens, gset.provenance):
        assert x.k == (1 if l.startswith("T2") else 0)


def test_closure_gens_case_mismatch(ex1):
    inst, _ = ex1
    with pytest.raises(Exception):
        closure_gens(inst, CaseLabel(Kind.CM_NotNormal_Both))  # wrong count etc.


def test_dual_p1_and_p2(ex1):
    inst, _ = ex1
    lat = dual_via_cofactors(inst, "P1")
    assert lat.gens[0] == KElem.from_poly(inst, 1)
    assert lat.gens[1] == build_named(inst, "tau1")
    lat2 = dual_via_cofactors(inst, "P2")
    assert lat2.gens[1] == build_named(inst, "tau2")


def test_dual_h(ex1):
    inst, _ = ex1
    lat = dual_via_cofactors(inst, "H", 1)
    assert lat.gens[1] == build_named(inst, "tau_i", 1)
    # ideal * dual lands in A
    h = ideal_spec(inst, "H", i=1)
    for gamma in h.a_gens:
        for d in lat.gens:
            assert (gamma * d).k == 0


def test_dual_ppow_is_t_lattice(ex1):
    inst, _ = ex1
    lat = dual_via_cofactors(inst, "Ppow")
    assert len(lat.gens) == 3
    gens = set()
    for x in lat.gens:
        gens.add(x if not x.is_zero() else x)
    eta1 = build_named(inst, "eta", 1)
    eta2 = build_named(inst, "eta", 2)
    assert any(x == eta1 or x == -eta1 for x in lat.gens)
    assert any(x == eta2 or x == -eta2 for x in lat.gens)
    one = KElem.from_poly(inst, 1)
    assert any(x == one or x == -one for x in lat.gens)
    # duals always contain 1 and multiply the ideal into A
    psymb = ideal_spec(inst, "P_symb")
    for gamma in psymb.a_gens:
        for d in lat.gens:
            assert (gamma * d).k == 0


def test_kelem_div(ex1):
    inst, _ = ex1
    w = KElem.radical(inst, 0)
    x = shifted_monomial(inst, 2, 1, k=1)
    y = shifted_monomial(inst, 1, 1)
    q = kelem_div(x * y, y)
    assert q == x
    # non-divisible: (w - h1) / p is not in p^-k A times A... it is: k grows
    q2 = kelem_div(w, w)
    assert q2 == KElem.from_poly(inst, 1)


def test_pstar_gens(ex1):
    inst, _ = ex1
    lat = pstar_gens(inst)
    assert len(lat) == 18
    one = KElem.from_poly(inst, 1)
    assert any(x == one for x in lat.gens)
    top = shifted_monomial(inst, 2, 2, k=1)
    assert any(x == top for x in lat.gens)


def test_conductor_gens(ex1):
    inst, case = ex1
    spec = conductor_gens(inst, case)
    assert spec.name == "I"
    m = build_named(inst, "m", 1)
    p3 = KElem.from_poly(inst, 3)
    assert spec.a_gens[0] == p3
    assert spec.a_gens[1] == p3 * m
    assert (
        shifted_monomial(inst, 1, 0) * m in spec.a_gens
        or shifted_monomial(inst, 0, 1) * m in spec.a_gens
    )
    # p * 1 is always in I
    sp = Span.of_lattice(spec.gens)
    assert sp.member_elem(spec.gens, p3)


def test_conductor_p_symb():
    inst = validate(3, poly("X^3+3"), poly("Y^3+3"), VARS)
    spec = conductor_gens(inst, classify(inst))
    assert spec.name == "P_symb"
    assert len(spec.a_gens) == 4  # p and the three (w-h1)^s (u-h2)^(2-s)


def test_conductor_refuses_nonnormal_cases():
    inst = validate(3, poly("X^3+9"), poly("Y^3+9"), VARS)
    with pytest.raises(CaseMismatchError):
        conductor_gens(inst, classify(inst))


def test_basis_monomials_order(ex1):
    inst, _ = ex1
    basis = basis_monomials(inst)
    assert len(basis) == 9
    assert basis[0] == KElem.from_poly(inst, 1)
    w = KElem.radical(inst, 0)
    u = KElem.radical(inst, 1)
    assert basis[1] == w
    assert basis[3] == u
    assert basis[8] == w * w * u * u
