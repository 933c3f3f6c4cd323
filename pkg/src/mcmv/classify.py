"""Validation of (p, f, g) inputs and the case decision for the closure.

The decision tree follows the structure theorem for the closure:

  * one or both radical subrings not integrally closed (a or b in pS)
    -> the closure is S-free (two flavours);
  * both closed and no index i with a h2^p + i b h1^p = 0 mod p
    -> S-free, with the symbolic power (p) + P^(p-1) as conductor;
  * the unique index i exists: write h1 = z c, h2 = z e mod p with c, e
    coprime; the ideal (p, h1, h2) being two-generated (c or e a unit),
    grade three (z a unit, c, e not) or grade two decides the branch.

The subring S[w] is integrally closed exactly when a is not divisible by p:
f = h1^p + a p lies in the deeper stratum x^p + y p^2 iff a in pS, because
(h1 + p t)^p = h1^p mod p^2 turns the lifting search into one mod-p check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from . import zpoly
from .tower import Instance, cprime
from .zpoly import IntPoly, divexact_mod, gcd_mod, is_local_unit


class ValidationError(ValueError):
    """Input rejected; `code` is the machine-readable reason."""

    def __init__(self, code: str, msg: str):
        super().__init__(msg)
        self.code = code


class UniquenessViolated(RuntimeError):
    """Two indices satisfied the fg^i congruence; invalid instance or bug."""


class Kind(enum.Enum):
    CM_NotNormal_Both = "CM_NotNormal_Both"
    CM_NotNormal_One = "CM_NotNormal_One"
    CM_NormalNoFgi = "CM_NormalNoFgi"
    CM_TwoGenQ = "CM_TwoGenQ"
    NotCM_GradeThree = "NotCM_GradeThree"
    NotCM_GradeTwoOpen = "NotCM_GradeTwoOpen"


_I_STAR_KINDS = {Kind.CM_TwoGenQ, Kind.NotCM_GradeThree, Kind.NotCM_GradeTwoOpen}


@dataclass(frozen=True)
class CaseLabel:
    kind: Kind
    i_star: Optional[int] = None

    def __post_init__(self):
        if (self.i_star is not None) != (self.kind in _I_STAR_KINDS):
            raise ValueError("i_star present iff the label carries an fg^i index")

    def is_cm(self) -> bool:
        return self.kind not in (Kind.NotCM_GradeThree, Kind.NotCM_GradeTwoOpen)

    def has_epsilon(self) -> bool:
        return self.kind in _I_STAR_KINDS

    def __str__(self):
        if self.i_star is not None:
            return f"{self.kind.value}(i={self.i_star})"
        return self.kind.value


@dataclass(frozen=True)
class ZceDecomposition:
    """h1 = z*c, h2 = z*e mod p with gcd(c, e) a unit; all lifted to 0..p-1."""

    z: IntPoly
    c: IntPoly
    e: IntPoly


class QClass(enum.Enum):
    TwoGenOrAll = "TwoGenOrAll"
    GradeThree = "GradeThree"
    GradeTwoNotPerfect = "GradeTwoNotPerfect"


def validate(p: int, f: IntPoly, g: IntPoly,
             varnames: tuple[str, ...]) -> Instance:
    """Check the standing hypotheses and build the derived Instance.

    Rejections carry specific codes: BAD_PRIME, NOT_IN_SP, F_IS_UNIT,
    G_IS_UNIT, NOT_SQUAREFREE, NOT_COPRIME_A1, DEGENERATE_H.
    """
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(p ** 0.5) + 1, 2)):
        raise ValidationError("BAD_PRIME", f"p = {p} is not an odd prime >= 3")
    if f.is_zero() or g.is_zero():
        raise ValidationError("NOT_SQUAREFREE", "zero input")
    h1 = zpoly.pth_root_mod_p(f, p)
    if h1 is None:
        raise ValidationError("NOT_IN_SP", "f has no p-th root mod p")
    h2 = zpoly.pth_root_mod_p(g, p)
    if h2 is None:
        raise ValidationError("NOT_IN_SP", "g has no p-th root mod p")
    if is_local_unit(f, p):
        raise ValidationError("F_IS_UNIT", "f is a unit of the local base ring")
    if is_local_unit(g, p):
        raise ValidationError("G_IS_UNIT", "g is a unit of the local base ring")
    if not zpoly.squarefree_local(f, p):
        raise ValidationError("NOT_SQUAREFREE", "f is not squarefree locally")
    if not zpoly.squarefree_local(g, p):
        raise ValidationError("NOT_SQUAREFREE", "g is not squarefree locally")
    if not zpoly.coprime_a1(f, g, p):
        raise ValidationError("NOT_COPRIME_A1", "f, g share a height-one prime")
    if h1.is_zero() or h2.is_zero():
        raise ValidationError(
            "DEGENERATE_H",
            "h1 or h2 vanishes mod p; the closure is S-free by the "
            "one-sided results but outside this machinery",
        )
    a = (f - h1 ** p).div_int(p)
    b = (g - h2 ** p).div_int(p)
    return Instance(
        p=p, varnames=tuple(varnames), f=f, g=g, h1=h1, h2=h2, a=a, b=b,
        c1=cprime(h1, p), c2=cprime(h2, p),
    )


def in_sp_p2(inst: Instance, which: str) -> bool:
    """Whether f (which="f") or g lies in the x^p + y p^2 stratum: a in pS."""
    if which == "f":
        q = inst.a
    elif which == "g":
        q = inst.b
    else:
        raise ValueError("which must be 'f' or 'g'")
    return q.content() % inst.p == 0


def fgi_index(inst: Instance) -> Optional[int]:
    """The unique i in 1..p-1 with a h2^p + i b h1^p = 0 mod p, if any."""
    if in_sp_p2(inst, "f") or in_sp_p2(inst, "g"):
        raise ValueError("fgi_index needs both radical subrings integrally closed")
    p = inst.p
    base = inst.a * inst.h2 ** p
    step = inst.b * inst.h1 ** p
    hits = [
        i for i in range(1, p)
        if (base + i * step).reduce_mod(p).is_zero()
    ]
    if len(hits) > 1:
        raise UniquenessViolated(f"indices {hits} all satisfy the congruence")
    return hits[0] if hits else None


def zce_decompose(inst: Instance) -> ZceDecomposition:
    """Factor h1 = z c, h2 = z e mod p with coprime cofactors, c monic."""
    p = inst.p
    hb1 = inst.h1.reduce_mod(p)
    hb2 = inst.h2.reduce_mod(p)
    zbar = gcd_mod(hb1, hb2)
    cbar = divexact_mod(hb1, zbar)
    ebar = divexact_mod(hb2, zbar)
    _, lc = cbar.leading()
    if lc != 1:
        inv = pow(lc, -1, p)
        cbar = cbar.scale(inv)
        ebar = ebar.scale(inv)
        zbar = zbar.scale(lc)
    if not gcd_mod(cbar, ebar).is_const():
        raise RuntimeError("cofactors of the h-gcd are not coprime")
    return ZceDecomposition(zbar.lift(), cbar.lift(), ebar.lift())


def q_class(inst: Instance) -> QClass:
    """Shape of the ideal (p, h1, h2), read off the z c e decomposition."""
    p = inst.p
    zce = zce_decompose(inst)
    c_unit = is_local_unit(zce.c, p)
    e_unit = is_local_unit(zce.e, p)
    if c_unit or e_unit:
        return QClass.TwoGenOrAll
    if is_local_unit(zce.z, p):
        return QClass.GradeThree
    return QClass.GradeTwoNotPerfect


def classify(inst: Instance) -> CaseLabel:
    """Total decision: every validated instance gets exactly one label."""
    f_deep = in_sp_p2(inst, "f")
    g_deep = in_sp_p2(inst, "g")
    if f_deep and g_deep:
        return CaseLabel(Kind.CM_NotNormal_Both)
    if f_deep or g_deep:
        return CaseLabel(Kind.CM_NotNormal_One)
    i = fgi_index(inst)
    if i is None:
        return CaseLabel(Kind.CM_NormalNoFgi)
    q = q_class(inst)
    if q is QClass.TwoGenOrAll:
        return CaseLabel(Kind.CM_TwoGenQ, i)
    if q is QClass.GradeThree:
        return CaseLabel(Kind.NotCM_GradeThree, i)
    return CaseLabel(Kind.NotCM_GradeTwoOpen, i)
