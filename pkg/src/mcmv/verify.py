"""Certificate engine: span checks, freeness, resolutions, MCM witnesses.

Everything here decides claims by exact computation and returns reports
carrying witnesses for failures rather than booleans alone.  Localized span
membership flows through one chokepoint so that every decision can be
recorded and replayed against the truncation oracle.

Freeness over the local base ring is decided by Nakayama reduction: the
syzygy matrix of the generators, with entries evaluated at the closed point
(constant term mod p), has rank r0 over GF(p); dropping the r0 pivoted
generators leaves a minimal generating set, and the module is free exactly
when the survivor count equals the fraction-field rank.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import grobner, oracle
from .classify import CaseLabel, Kind, classify, zce_decompose
from .closure import (
    CaseMismatchError,
    GeneratorSet,
    basis_monomials,
    closure_gens,
    conductor_gens,
    ideal_spec,
    pstar_gens,
)
from .linalg import BareissSolver, Frac, frac_rank
from .oracle import MembershipQuery, Verdict, truncation_oracle
from .tower import DenominatorError, Instance, KElem, Lattice, build_named
from .zpoly import IntPoly, is_local_unit


class IntersectionRankMismatch(RuntimeError):
    pass


class StabilityFailure(RuntimeError):
    def __init__(self, msg, witness):
        super().__init__(msg)
        self.witness = witness


class OpenCaseError(RuntimeError):
    """The grade-two non-perfect branch: no construction is known."""

    code = "OPEN_CASE"


# ----- recorded localized membership ----------------------------------------

_LOG: Optional[list[MembershipQuery]] = None


@contextlib.contextmanager
def record_memberships():
    """Collect every localized membership decision made inside the block."""
    global _LOG
    prev = _LOG
    _LOG = [] if prev is None else prev
    try:
        yield _LOG
    finally:
        _LOG = prev


class Span:
    """Columns of a lattice with a cached strong basis, membership-logged."""

    def __init__(self, columns, rank: int, p: int, context: str = ""):
        self.module = grobner.SubmoduleGens(rank, tuple(tuple(c) for c in columns))
        self.p = p
        self.context = context
        self._gb = None

    @classmethod
    def of_lattice(cls, lat: Lattice, context: str = "") -> "Span":
        return cls(lat.matrix, lat.inst.dim, lat.inst.p, context)

    def member(self, col: Sequence[IntPoly]) -> bool:
        if self._gb is None:
            self._gb = grobner.strong_gb(self.module)
        res = grobner.local_member(tuple(col), self.module, self.p, self._gb)
        if _LOG is not None:
            _LOG.append(MembershipQuery(
                self.p, self.module.rank, self.module.columns,
                tuple(col), res, self.context,
            ))
        return res

    def member_elem(self, lat: Lattice, x: KElem) -> bool:
        """Membership of a K-element against the lattice these columns came
        from; a denominator beyond the lattice's clearing exponent already
        rules membership out."""
        try:
            col = lat.column_of(x)
        except DenominatorError:
            return False
        return self.member(col)


def _span_of(lat: Lattice, context: str = "") -> Span:
    sp = getattr(lat, "_span", None)
    if sp is None:
        sp = Span.of_lattice(lat, context)
        lat._span = sp
    return sp


# ----- span solving -----------------------------------------------------------


def span_solve(target: KElem, gens: Lattice) -> Optional[list[Frac]]:
    """Coefficients over the localized ring expressing target in the span.

    Solved over the fraction field; every coordinate's reduced denominator
    must be a local unit, else the solve reports absence.  Free coordinates
    of a dependent generator list are pinned to zero.
    """
    if target.inst is not gens.inst:
        raise ValueError("target from another instance")
    try:
        tcol = gens.column_of(target)
    except DenominatorError:
        return None
    solver = getattr(gens, "_solver", None)
    if solver is None:
        solver = BareissSolver([list(c) for c in gens.matrix])
        gens._solver = solver
    sol = solver.solve(list(tcol))
    if sol is None:
        return None
    p = gens.inst.p
    if not all(fr.is_local(p) for fr in sol):
        return None
    return sol


# ----- reports ----------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    ok: bool
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


@dataclass
class FreenessReport:
    free: bool
    nu: int
    rank: int
    kept: tuple[int, ...]


@dataclass
class ResolutionCertificate:
    nu: int
    pd: int
    psi: Optional[tuple[IntPoly, ...]]
    ordering: tuple[tuple[int, int], ...]
    zero_block_start: Optional[int]
    zero_block_ok: bool
    entries_in_max_ideal: bool
    kernel_rank_one: Optional[bool]
    order_direction: str = "ascending"


@dataclass
class MCMCertificate:
    basis: tuple[KElem, ...]
    stability: dict
    determinant_nonzero: bool
    in_f1: bool
    in_f2: bool
    provenance: dict


# ----- ring closure and freeness ----------------------------------------------


def verify_ring_closure(gens: Lattice, context: str = "closure") -> CheckReport:
    """All pairwise products of generators stay in the localized span."""
    rep = CheckReport("ring_closure", True)
    sp = _span_of(gens, context)
    one = KElem.from_poly(gens.inst, 1)
    if not sp.member_elem(gens, one):
        rep.ok = False
        rep.failures.append("1 is not in the span")
    n = len(gens.gens)
    labels = gens.labels or tuple(f"g{i}" for i in range(n))
    for i in range(n):
        for j in range(i, n):
            prod = gens.gens[i] * gens.gens[j]
            rep.checked += 1
            if not sp.member_elem(gens, prod):
                rep.ok = False
                rep.failures.append(
                    f"{labels[i]} * {labels[j]} escapes the span: {prod.render()}"
                )
    return rep


def minimal_generator_indices(columns, rank: int, p: int) -> tuple[int, ...]:
    """Indices of a minimal generating subset over the local ring.

    Syzygies are computed globally (localization is flat), their matrix is
    evaluated at the closed point, and the GF(p) pivot columns are dropped.
    """
    m = grobner.SubmoduleGens(rank, tuple(tuple(c) for c in columns))
    syz = grobner.syzygies(m)
    k = len(columns)
    rows = []
    for col in syz.columns:
        rows.append([col[i].constant_term() % p for i in range(k)])
    pivots = []
    r = 0
    for c in range(k):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    dropped = set(pivots)
    return tuple(i for i in range(k) if i not in dropped)


def verify_free(gens: Lattice) -> FreenessReport:
    """Nakayama-minimalize and compare against the fraction-field rank."""
    kept = minimal_generator_indices(gens.matrix, gens.inst.dim, gens.inst.p)
    rank = frac_rank([list(c) for c in gens.matrix])
    return FreenessReport(free=(len(kept) == rank), nu=len(kept), rank=rank,
                          kept=kept)


def minimalize(gens: Lattice) -> Lattice:
    kept = minimal_generator_indices(gens.matrix, gens.inst.dim, gens.inst.p)
    labels = None
    if gens.labels is not None:
        labels = [gens.labels[i] for i in kept]
    return Lattice(gens.inst, [gens.gens[i] for i in kept], labels)


# ----- conductor ---------------------------------------------------------------


def verify_conductor(inst: Instance, case: CaseLabel) -> CheckReport:
    """Every product (conductor generator) x (closure generator) lies in A."""
    cond = conductor_gens(inst, case)
    gset = closure_gens(inst, case)
    rep = CheckReport(f"conductor[{cond.name}]", True)
    rlabels = gset.provenance
    for t, gamma in enumerate(cond.a_gens):
        for r, x in enumerate(gset.gens.gens):
            prod = gamma * x
            rep.checked += 1
            if prod.k != 0:
                rep.ok = False
                rep.failures.append(
                    f"conductor gen {t} * {rlabels[r]} has denominator "
                    f"p^{prod.k}"
                )
    return rep


# ----- resolution ---------------------------------------------------------------


def resolution(inst: Instance, case: Optional[CaseLabel] = None,
               check_kernel: bool = True) -> ResolutionCertificate:
    """The two-step free resolution of the closure over the base ring.

    Orders the p^2-element set ascending by (total shift degree, shift
    degree on the first radical), expresses p*eps over it, and assembles
    the kernel vector psi = [v_1 .. v_{m-1} 0 .. 0 -p].  When an entry of
    psi is a unit (the two-generated branch) the presentation is not
    minimal and the certificate reports pd = 0 after re-minimalization.
    """
    if case is None:
        case = classify(inst)
    if not case.has_epsilon():
        raise CaseMismatchError(
            "the p^2+1 presentation needs an fg^i index; "
            "use verify_free on the closure set instead"
        )
    p = inst.p
    gset = closure_gens(inst, case)
    tgens = gset.gens.gens[:-1]
    eps = gset.gens.gens[-1]
    ordering = []
    for x in tgens:
        shifted = x.shifted_coeffs()
        slot = next(i for i, q in enumerate(shifted) if not q.is_zero())
        i, j = slot % p, slot // p
        ordering.append((i + j, i))
    assert ordering == sorted(ordering), "generator order is not ascending"

    pe = p * eps
    shifted = pe.shifted_coeffs()
    v: list[IntPoly] = []
    for x in tgens:
        sc = x.shifted_coeffs()
        slot = next(i for i, q in enumerate(sc) if not q.is_zero())
        v.append(shifted[slot] * (p ** x.k))
    recon = KElem.from_poly(inst, 0)
    for c, x in zip(v, tgens):
        if not c.is_zero():
            recon = recon + c * x
    assert recon == pe, "p*eps does not decompose over the ordered set"
    psi = tuple(v) + (inst.const(-p),)

    mstart = p * p - (p - 1) * p // 2 + 1
    zero_ok = all(v[i].is_zero() for i in range(mstart - 1, p * p))
    direction = "ascending"
    if not zero_ok:
        rev_ok = all(v[i].is_zero() for i in range(0, p * p - mstart + 1))
        direction = "descending_only" if rev_ok else "violated"

    in_max = all(
        q.is_zero() or q.constant_term() % p == 0 for q in psi
    )

    kernel_rank_one: Optional[bool] = None
    if in_max and check_kernel:
        kernel_rank_one = _kernel_is_psi(gset.gens, psi)

    if in_max:
        return ResolutionCertificate(
            nu=p * p + 1, pd=1, psi=psi, ordering=tuple(ordering),
            zero_block_start=mstart, zero_block_ok=zero_ok,
            entries_in_max_ideal=True, kernel_rank_one=kernel_rank_one,
            order_direction=direction,
        )
    free = verify_free(gset.gens)
    if not free.free or free.rank != p * p:
        raise RuntimeError("unit relation found but re-minimalization failed")
    return ResolutionCertificate(
        nu=p * p, pd=0, psi=None, ordering=tuple(ordering),
        zero_block_start=None, zero_block_ok=zero_ok,
        entries_in_max_ideal=False, kernel_rank_one=None,
        order_direction=direction,
    )


def _kernel_is_psi(lat: Lattice, psi: tuple[IntPoly, ...]) -> bool:
    """The syzygies of the generator list minimalize to the single psi."""
    inst = lat.inst
    p = inst.p
    m = grobner.SubmoduleGens(inst.dim, lat.matrix)
    syz = grobner.syzygies(m)
    if not syz.columns:
        return False
    unit_scale_seen = False
    for col in syz.columns:
        last = col[-1]
        # col = c * psi with c = last / (-p); needs p | last exactly
        try:
            c = last.div_int(-p)
        except ValueError:
            return False
        for a, b in zip(col, psi):
            if a != c * b:
                return False
        if is_local_unit(c, p):
            unit_scale_seen = True
    return unit_scale_seen


# ----- the MCM certificate -------------------------------------------------------


def mcm_certificate(inst: Instance, case: Optional[CaseLabel] = None,
                    check_stability: bool = True) -> MCMCertificate:
    """A birational maximal Cohen-Macaulay module witness.

    Grade-three branch: intersect F1 = p^-1 P^* with F2 = m^-1 (P^(p-1))^*
    inside the common ambient (p^2 m)^-1 A, minimalize to a free rank-p^2
    lattice and verify stability under every closure generator.  The
    grade-two branch refuses (no construction is known); the free branches
    certify trivially with the closure lattice itself (M = R).
    """
    if case is None:
        case = classify(inst)
    if case.kind is Kind.NotCM_GradeTwoOpen:
        raise OpenCaseError("no birational MCM construction for the "
                            "grade-two non-perfect branch")
    p = inst.p
    if case.is_cm():
        gset = closure_gens(inst, case)
        basis_lat = minimalize(gset.gens)
        if len(basis_lat) != p * p:
            raise IntersectionRankMismatch(
                f"closure lattice minimalized to {len(basis_lat)}")
        stab = _stability(inst, gset.gens, basis_lat) if check_stability else {}
        det = BareissSolver([list(c) for c in basis_lat.matrix]).det()
        return MCMCertificate(
            basis=basis_lat.gens, stability=stab,
            determinant_nonzero=not det.is_zero(),
            in_f1=True, in_f2=True,
            provenance={"construction": "M = R (free closure)"},
        )

    if case.kind is not Kind.NotCM_GradeThree:
        raise CaseMismatchError(f"no MCM certificate for {case}")

    i = case.i_star
    m_el = build_named(inst, "m", i)
    # dropping redundant P^* generators keeps only the local span, which is
    # all the certificate asserts
    pstar = pstar_gens(inst)
    kept = minimal_generator_indices(pstar.matrix, inst.dim, p)
    f1_gens = [pstar.gens[idx].scale_down(1) for idx in kept]
    tset = closure_gens(inst, CaseLabel(Kind.CM_NormalNoFgi)).gens
    scale = p * p
    f1_scaled = [(scale * x) * m_el for x in f1_gens]
    f2_scaled = [scale * t for t in tset.gens]
    for x in f1_scaled + f2_scaled:
        if x.k != 0:
            raise RuntimeError("ambient clearing failed")
    m1 = grobner.SubmoduleGens(inst.dim, tuple(x.coeffs for x in f1_scaled))
    m2 = grobner.SubmoduleGens(inst.dim, tuple(x.coeffs for x in f2_scaled))
    _, coeffs = grobner.module_intersect(m1, m2, with_coeffs=True)
    raw = []
    for u in coeffs:
        acc = KElem.from_poly(inst, 0)
        for c, x in zip(u, f1_gens):
            if not c.is_zero():
                acc = acc + c * x
        if not acc.is_zero():
            raw.append(acc)
    lat = Lattice(inst, raw)
    basis_lat = minimalize(lat)
    if len(basis_lat) != p * p:
        raise IntersectionRankMismatch(
            f"intersection minimalized to {len(basis_lat)} generators, "
            f"expected {p * p}")
    det = BareissSolver([list(c) for c in basis_lat.matrix]).det()
    if det.is_zero():
        raise IntersectionRankMismatch("intersection basis is degenerate")

    f1_lat = Lattice(inst, f1_gens)
    f1_span = _span_of(f1_lat, "mcm:F1")
    t_span = _span_of(tset, "mcm:F2")
    in_f1 = all(f1_span.member_elem(f1_lat, b) for b in basis_lat.gens)
    in_f2 = all(
        t_span.member_elem(tset, m_el * b) for b in basis_lat.gens
    )

    rset = closure_gens(inst, case)
    stab = _stability(inst, rset.gens, basis_lat) if check_stability else {}
    return MCMCertificate(
        basis=basis_lat.gens, stability=stab,
        determinant_nonzero=True, in_f1=in_f1, in_f2=in_f2,
        provenance={
            "construction": "F1 ∩ F2",
            "clearing_exponent": 2,
            "intersection_generators": len(raw),
            "fg_index": i,
        },
    )


def _stability(inst: Instance, rgens: Lattice, basis: Lattice) -> dict:
    """Coefficient vectors of r*b over the basis, all local, else raises."""
    out = {}
    rlabels = rgens.labels or tuple(f"r{i}" for i in range(len(rgens)))
    for ri, r in enumerate(rgens.gens):
        for bi, b in enumerate(basis.gens):
            prod = r * b
            sol = span_solve(prod, basis)
            if sol is None:
                raise StabilityFailure(
                    f"product {rlabels[ri]} * basis[{bi}] leaves the module",
                    witness=(rlabels[ri], bi, prod),
                )
            out[(ri, bi)] = tuple(sol)
    return out


# ----- the two theorem claims ------------------------------------------------------


def verify_theorem_claims(inst: Instance,
                          case: Optional[CaseLabel] = None) -> CheckReport:
    """Mutual-span certificates for the two grade-three module identities.

    Claim 1: the scaled sum lattice m P^* + p (P^(p-1))^* equals
    p (P^(p-1))^* + (m).  Claim 2: the colon of the latter ideal by m is
    (p) + P^(p-1); both directions are checked by localized membership.
    """
    if case is None:
        case = classify(inst)
    if case.kind is not Kind.NotCM_GradeThree:
        raise CaseMismatchError("theorem claims apply to the grade-three case")
    p = inst.p
    i = case.i_star
    rep = CheckReport("theorem_claims", True)
    m_el = build_named(inst, "m", i)
    basis = basis_monomials(inst)
    tset = closure_gens(inst, CaseLabel(Kind.CM_NormalNoFgi)).gens

    fscr = ideal_spec(inst, "Fscr", i=i).gens
    rhs_gens = [p * t for t in tset.gens] + [m_el * b for b in basis]
    rhs_labels = [f"p*T[{k}]" for k in range(len(tset.gens))] + [
        f"m*b{k}" for k in range(len(basis))
    ]
    rhs = Lattice(inst, rhs_gens, rhs_labels)

    lhs_span = _span_of(fscr, "claim1:lhs")
    rhs_span = _span_of(rhs, "claim1:rhs")
    for x, lab in zip(fscr.gens, fscr.labels):
        rep.checked += 1
        if not rhs_span.member_elem(rhs, x):
            rep.ok = False
            rep.failures.append(f"claim1: {lab} not in F2 + (m)")
    for x, lab in zip(rhs.gens, rhs.labels):
        rep.checked += 1
        if not lhs_span.member_elem(fscr, x):
            rep.ok = False
            rep.failures.append(f"claim1: {lab} not in the scaled sum lattice")

    # claim 2: (F2 : m) as an S-module via the multiplication matrix
    f2_cols = tuple((p * t).coeffs for t in tset.gens)
    map_cols = tuple((m_el * b).coeffs for b in basis)
    pre = grobner.preimage(
        grobner.SubmoduleGens(inst.dim, map_cols),
        grobner.SubmoduleGens(inst.dim, f2_cols),
    )
    colon_elems = [KElem(inst, 0, col) for col in pre.columns]
    psymb = ideal_spec(inst, "P_symb")
    psymb_span = _span_of(psymb.gens, "claim2:rhs")
    f2_lat = Lattice(inst, [p * t for t in tset.gens])
    f2_span = _span_of(f2_lat, "claim2:f2")
    for idx, x in enumerate(colon_elems):
        rep.checked += 1
        if not psymb_span.member_elem(psymb.gens, x):
            rep.ok = False
            rep.failures.append(
                f"claim2: colon generator {idx} not in (p) + P^(p-1)")
    for gamma, lab in zip(psymb.a_gens,
                          ["p"] + [f"P^{p-1}[{s}]" for s in range(p)]):
        rep.checked += 1
        if not f2_span.member_elem(f2_lat, gamma * m_el):
            rep.ok = False
            rep.failures.append(f"claim2: {lab} * m not in F2")
    return rep


# ----- oracle replay ----------------------------------------------------------------


def replay_against_oracle(queries: Sequence[MembershipQuery], k: int = 3,
                          degree_cut: Optional[int] = None) -> CheckReport:
    """Check that the oracle never refutes a positive Groebner decision."""
    rep = CheckReport("oracle_consistency", True)
    for q in queries:
        verdict = truncation_oracle(q, k=k, degree_cut=degree_cut)
        rep.checked += 1
        if q.result and verdict is Verdict.REFUTED:
            rep.ok = False
            rep.failures.append(
                f"oracle refuted a Groebner YES in context {q.context!r}")
    return rep
