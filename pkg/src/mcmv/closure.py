"""Explicit generating sets for the closure, its dual ideals and conductors.

All sets are built from shifted monomials p^(-k) (w-h1)^i (u-h2)^j:

  * both radical subrings non-normal:  k=0 on i+j < p-1, k=1 on
    i+j >= p-1 except the top corner, which carries k=2;
  * exactly one non-normal (say the w-side): k=0 on i+j < p with i < p-1,
    k=1 on i+j >= p with i,j >= 1, plus p^-1 (w-h1)^(p-1);
  * both normal: k=0 on i+j < p, k=1 on i+j >= p;
  * with an fg^i index the same set plus the extra generator eps.

Each set has exactly one element per leading monomial w^i u^j, so the
cached matrix is unitriangular in the shifted basis.

Dual ideals of the grade-two-perfect ideals are produced by the cofactor
method: adjoin the coefficient column of the ring relation to the ideal's
presentation matrix and divide the diagonal cofactors by the signed maximal
minors; the divisions are performed exactly in K and verified by
multiplying back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classify import CaseLabel, Kind, in_sp_p2, zce_decompose
from .linalg import BareissSolver
from .tower import (
    Instance,
    KElem,
    Lattice,
    build_epsilon,
    build_named,
    c_elem,
    shifted_monomial,
)


class CaseMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    case: CaseLabel
    gens: Lattice
    provenance: tuple[str, ...]

    def __post_init__(self):
        want = self.gens.inst.dim + (1 if self.case.has_epsilon() else 0)
        if len(self.gens) != want:
            raise ValueError(f"expected {want} generators, got {len(self.gens)}")


@dataclass(frozen=True)
class IdealSpec:
    name: str
    a_gens: tuple[KElem, ...]
    gens: Lattice


def basis_monomials(inst: Instance) -> list[KElem]:
    """The S-basis w^i u^j of A in index order i + p*j."""
    out = []
    for j in range(inst.p):
        for i in range(inst.p):
            w = KElem.radical(inst, 0, i) if i else KElem.from_poly(inst, 1)
            u = KElem.radical(inst, 1, j) if j else KElem.from_poly(inst, 1)
            out.append(w * u)
    return out


def a_span(inst: Instance, a_gens: Sequence[KElem],
           labels: Optional[Sequence[str]] = None) -> Lattice:
    """Expand A-module generators to S-module generators over the A-basis."""
    gens, labs = [], []
    basis = basis_monomials(inst)
    for t, gamma in enumerate(a_gens):
        for idx, b in enumerate(basis):
            gens.append(gamma * b)
            name = labels[t] if labels is not None else f"g{t}"
            i, j = idx % inst.p, idx // inst.p
            labs.append(f"{name}*w^{i}*u^{j}")
    return Lattice(inst, gens, labs)


def _slot_order(inst: Instance) -> list[tuple[int, int]]:
    return sorted(
        ((i, j) for i in range(inst.p) for j in range(inst.p)),
        key=lambda ij: (ij[0] + ij[1], ij[0]),
    )


def _check_case_compatible(inst: Instance, case: CaseLabel) -> None:
    f_deep, g_deep = in_sp_p2(inst, "f"), in_sp_p2(inst, "g")
    kind = case.kind
    if kind is Kind.CM_NotNormal_Both and not (f_deep and g_deep):
        raise CaseMismatchError("instance has an integrally closed radical side")
    if kind is Kind.CM_NotNormal_One and (f_deep == g_deep):
        raise CaseMismatchError("instance does not have exactly one closed side")
    if kind in (Kind.CM_NormalNoFgi, Kind.CM_TwoGenQ, Kind.NotCM_GradeThree,
                Kind.NotCM_GradeTwoOpen) and (f_deep or g_deep):
        raise CaseMismatchError("instance has a non-normal radical side")
    if case.has_epsilon():
        from .classify import fgi_index

        if fgi_index(inst) != case.i_star:
            raise CaseMismatchError("fg^i index does not match the instance")


def closure_gens(inst: Instance, case: CaseLabel) -> GeneratorSet:
    """The generating set of the integral closure for the classified case."""
    _check_case_compatible(inst, case)
    p = inst.p
    gens: list[KElem] = []
    labels: list[str] = []

    def push(i: int, j: int, k: int, label: str):
        gens.append(shifted_monomial(inst, i, j, k))
        labels.append(label)

    kind = case.kind
    if kind is Kind.CM_NotNormal_Both:
        for (i, j) in _slot_order(inst):
            if i + j < p - 1:
                push(i, j, 0, f"T1[{i},{j}]")
            elif i + j == 2 * p - 2:
                push(i, j, 2, "T3")
            else:
                push(i, j, 1, f"T2[{i},{j}]")
    elif kind is Kind.CM_NotNormal_One:
        f_deep = in_sp_p2(inst, "f")
        for (i, j) in _slot_order(inst):
            a, b = (i, j) if f_deep else (j, i)
            # a indexes the non-normal side's shift exponent
            if a == p - 1 and b == 0:
                push(i, j, 1, "T3")
            elif i + j < p and a <= p - 2:
                push(i, j, 0, f"T1[{i},{j}]")
            elif i + j >= p and 1 <= i <= p - 1 and 1 <= j <= p - 1:
                push(i, j, 1, f"T2[{i},{j}]")
            else:
                raise AssertionError(f"slot ({i},{j}) not covered")
    elif kind in (Kind.CM_NormalNoFgi, Kind.CM_TwoGenQ,
                  Kind.NotCM_GradeThree, Kind.NotCM_GradeTwoOpen):
        for (i, j) in _slot_order(inst):
            if i + j < p:
                push(i, j, 0, f"T1[{i},{j}]")
            else:
                push(i, j, 1, f"T2[{i},{j}]")
        if case.has_epsilon():
            zce = zce_decompose(inst)
            gens.append(build_epsilon(inst, zce.z, zce.c, zce.e, index=case.i_star))
            labels.append("epsilon")
    else:
        raise CaseMismatchError(f"no generator set for {case}")
    return GeneratorSet(case, Lattice(inst, gens, labels), tuple(labels))


def leading_slot_coverage(gset: GeneratorSet) -> bool:
    """One generator per leading monomial w^i u^j (epsilon excluded)."""
    inst = gset.gens.inst
    seen = set()
    for x, label in zip(gset.gens.gens, gset.provenance):
        if label == "epsilon":
            continue
        shifted = x.shifted_coeffs()
        slots = [idx for idx, q in enumerate(shifted) if not q.is_zero()]
        if len(slots) != 1:
            return False
        if slots[0] in seen:
            return False
        seen.add(slots[0])
    return len(seen) == inst.dim


# ----- duals by the cofactor method ----------------------------------------


def kelem_div(x: KElem, y: KElem) -> Optional[KElem]:
    """x / y when the quotient lies in p^(-k) A; None otherwise."""
    inst = x.inst
    if y.is_zero():
        raise ZeroDivisionError("division by zero element")
    cols = [y * b for b in basis_monomials(inst)]
    lat = Lattice(inst, cols)
    if x.k > lat.kmax:
        lat = Lattice(inst, cols + [x])  # only to share the clearing exponent
        cols_m = lat.matrix[:-1]
        target = lat.matrix[-1]
    else:
        cols_m = lat.matrix
        target = lat.column_of(x)
    solver = BareissSolver([list(c) for c in cols_m])
    sol = solver.solve(list(target))
    if sol is None:
        return None
    p = inst.p
    kmax = 0
    for fr in sol:
        den = fr.den
        if not den.is_const():
            return None
        d = abs(den.constant_term())
        k = 0
        while d % p == 0:
            d //= p
            k += 1
        if d != 1:
            return None
        kmax = max(kmax, k)
    coeffs = []
    for fr in sol:
        d = abs(fr.den.constant_term())
        sign = 1 if fr.den.constant_term() > 0 else -1
        coeffs.append(fr.num * (sign * (p ** kmax // d)))
    return KElem(inst, kmax, coeffs)


def _det(mat: list[list[KElem]]) -> KElem:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    inst = mat[0][0].inst
    acc = KElem.from_poly(inst, 0)
    for col in range(n):
        entry = mat[0][col]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != col] for row in mat[1:]]
        term = entry * _det(minor)
        acc = acc + term if col % 2 == 0 else acc - term
    return acc


def dual_via_cofactors(inst: Instance, which: str,
                       i: Optional[int] = None) -> Lattice:
    """A-module generators of the dual of a named grade-two-perfect ideal.

    P1 = (p, w-h1) and P2 = (p, u-h2) give <1, tau>; H(i) = (p, w u^i -
    h1 h2^i) gives <1, tau_i>; Ppow is the (p-1)-st power of the height-one
    prime over p, whose dual is the closure T-lattice, produced here from
    the banded presentation matrix with the relation column cleared by k1.
    """
    p = inst.p
    one = KElem.from_poly(inst, 1)
    if which == "P1":
        tau = build_named(inst, "tau1")
        _check_quotient(inst, tau, KElem.from_poly(inst, p),
                        _sum_power_column(inst, 0))
        return Lattice(inst, [one, tau], ["one", "tau"])
    if which == "P2":
        tau = build_named(inst, "tau2")
        _check_quotient(inst, tau, KElem.from_poly(inst, p),
                        _sum_power_column(inst, 1))
        return Lattice(inst, [one, tau], ["one", "tau"])
    if which == "H":
        if i is None:
            raise ValueError("H needs the index i")
        tau = build_named(inst, "tau_i", i)
        m = build_named(inst, "m", i)
        # m * tau = p^-1 ((w u^i)^p - (h1 h2^i)^p) must land in A
        if (m * tau).k != 0:
            raise AssertionError("cofactor quotient for H(i) left A")
        return Lattice(inst, [one, tau], ["one", f"tau[{i}]"])
    if which == "Ppow":
        return _ppow_dual(inst)
    raise ValueError(f"unknown dual name {which!r}")


def _sum_power_column(inst: Instance, which: int) -> KElem:
    """w^(p-1) + h w^(p-2) + .. + h^(p-1) (or the u-side)."""
    p = inst.p
    h = inst.h1 if which == 0 else inst.h2
    rad = KElem.radical(inst, which, 1)
    acc = KElem.from_poly(inst, 0)
    for t in range(p):
        acc = acc + (h ** t) * rad ** (p - 1 - t)
    return acc


def _check_quotient(inst: Instance, q: KElem, delta: KElem, cof: KElem):
    if q * delta != cof:
        raise AssertionError("cofactor division check failed")


def _ppow_dual(inst: Instance) -> Lattice:
    """Diagonal cofactors of the augmented banded matrix, divided exactly."""
    p = inst.p
    zero = KElem.from_poly(inst, 0)
    wmh = shifted_monomial(inst, 1, 0)
    umh = shifted_monomial(inst, 0, 1)
    k1 = build_named(inst, "k1")
    c2 = c_elem(inst, 1)
    b = KElem.from_poly(inst, inst.b)
    # p x (p-1) banded matrix M, plus the k1-cleared relation column:
    # k1*G = -(w-h1)(c2'(u-h2) - b) * Delta_1  -  k1 (u-h2) * Delta_p
    mat: list[list[KElem]] = []
    for r in range(p):
        row = []
        for c in range(p - 1):
            if r == c:
                row.append(umh)
            elif r == c + 1:
                row.append(wmh)
            else:
                row.append(zero)
        mat.append(row)
    vcol = [zero] * p
    vcol[0] = -(wmh * (c2 * umh - b))
    vcol[p - 1] = -(k1 * umh)
    for r in range(p):
        mat[r].append(vcol[r])
    gens: list[KElem] = []
    labels: list[str] = []
    for idx in range(p):
        cof = _det([[mat[r][c] for c in range(p) if c != idx]
                    for r in range(p) if r != idx])
        sign = -1 if idx % 2 == 0 else 1  # Delta_{idx+1} = (-1)^(idx+1) e_{idx+1}
        delta = (wmh ** (p - 1 - idx)) * (umh ** idx)
        if sign < 0:
            delta = -delta
        q = kelem_div(cof, delta)
        if q is None:
            raise AssertionError("banded cofactor not divisible by its minor")
        _check_quotient(inst, q, delta, cof)
        gens.append(q)
        labels.append("one" if idx == p - 1 else f"eta[{p - 1 - idx}]")
    return Lattice(inst, gens, labels)


def pstar_gens(inst: Instance) -> Lattice:
    """S-generators of the dual of P = (p, w-h1, u-h2), expanded from
    <1, p^-1 (w-h1)^(p-1) (u-h2)^(p-1)>."""
    p = inst.p
    one = KElem.from_poly(inst, 1)
    top = shifted_monomial(inst, p - 1, p - 1, k=1)
    return a_span(inst, [one, top], ["one", "pstar"])


def conductor_gens(inst: Instance, case: CaseLabel) -> IdealSpec:
    """The stated conductor: (p) + P^(p-1) without an fg^i index, else
    I = pA + P^(p-2) m_i A."""
    if case.kind in (Kind.CM_NotNormal_Both, Kind.CM_NotNormal_One):
        raise CaseMismatchError(f"no stated conductor for {case}")
    if case.kind is Kind.CM_NormalNoFgi:
        return ideal_spec(inst, "P_symb")
    return ideal_spec(inst, "I", i=case.i_star)


def ideal_spec(inst: Instance, name: str, k: Optional[int] = None,
               i: Optional[int] = None) -> IdealSpec:
    """Named A-ideals with their S-module expansions.

    P, P_pow(k), P_symb = (p) + P^(p-1), I = pA + P^(p-2) m_i A,
    H(i) = (p, w u^i - h1 h2^i), F2 = (p) + P^p, Fscr = m P* + p (P^(p-1))*.
    """
    p = inst.p
    pk = KElem.from_poly(inst, p)
    a_gens: list[KElem] = []
    labels: list[str] = []

    def powers(total: int):
        out = []
        for s in range(total + 1):
            out.append(shifted_monomial(inst, s, total - s))
        return out

    if name == "P":
        a_gens = [pk, shifted_monomial(inst, 1, 0), shifted_monomial(inst, 0, 1)]
        labels = ["p", "w-h1", "u-h2"]
    elif name == "P_pow":
        if k is None:
            raise ValueError("P_pow needs the power k")
        for u_ in range(k + 1):
            for s in range(k - u_ + 1):
                t = k - u_ - s
                a_gens.append((pk ** u_) * shifted_monomial(inst, s, t))
                labels.append(f"p^{u_}(w-h1)^{s}(u-h2)^{t}")
    elif name == "P_symb":
        a_gens = [pk] + powers(p - 1)
        labels = ["p"] + [f"(w-h1)^{s}(u-h2)^{p - 1 - s}" for s in range(p)]
    elif name == "I":
        if i is None:
            raise ValueError("I needs the fg index i")
        m = build_named(inst, "m", i)
        a_gens = [pk, pk * m] + [x * m for x in powers(p - 2)]
        labels = ["p", "p*m"] + [f"(w-h1)^{s}(u-h2)^{p - 2 - s}*m" for s in range(p - 1)]
    elif name == "H":
        if i is None:
            raise ValueError("H needs the index i")
        a_gens = [pk, build_named(inst, "m", i)]
        labels = ["p", "m"]
    elif name == "F2":
        a_gens = [pk] + powers(p)
        labels = ["p"] + [f"(w-h1)^{s}(u-h2)^{p - s}" for s in range(p + 1)]
    elif name == "Fscr":
        if i is None:
            raise ValueError("Fscr needs the fg index i")
        m = build_named(inst, "m", i)
        top = shifted_monomial(inst, p - 1, p - 1, k=1)
        a_gens = [m, m * top]
        labels = ["m", "m*pstar"]
        lat = a_span(inst, a_gens, labels)
        # plus p * (P^(p-1))^* which is already an S-span: p times the T-set
        tset = closure_gens(inst, CaseLabel(Kind.CM_NormalNoFgi)).gens
        gens = list(lat.gens) + [pk * t for t in tset.gens]
        labs = list(lat.labels) + [f"p*{l}" for l in tset.labels]
        return IdealSpec("Fscr", tuple(a_gens), Lattice(inst, gens, labs))
    else:
        raise ValueError(f"unknown ideal name {name!r}")
    return IdealSpec(name, tuple(a_gens), a_span(inst, a_gens, labels))
