"""Independent falsification oracle in a finite truncation of the base ring.

Membership questions over ZZ[X..] localized at (p, X1..Xn) are projected to
the finite ring ZZ[X..]/(p^k, (X1..Xn)^N) and decided there by dense linear
algebra over ZZ/p^k.  Local units stay invertible in the truncation (unit
constant term mod p, nilpotent rest), so a positive answer upstairs always
survives the projection: a NO here refutes membership, a YES is evidence
only.

Linear algebra over ZZ/p^k uses a Howell-style echelon form: pivots are
normalized powers of p (minimal-valuation pivoting), and for every pivot
p^j with j > 0 the shifted row p^(k-j) times it is fed back in, which is
exactly the closure needed for greedy reduction to decide membership.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .zpoly import IntPoly


class Verdict(enum.Enum):
    REFUTED = "refuted"            # not a member even in the truncation
    CONSISTENT = "consistent"      # member of the truncated span


def _monomials(nvars: int, degree_cut: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def gen(prefix, idx):
        if idx == nvars:
            out.append(tuple(prefix))
            return
        used = sum(prefix)
        for d in range(degree_cut - used):
            prefix.append(d)
            gen(prefix, idx + 1)
            prefix.pop()

    gen([], 0)
    out.sort()
    return out


class TruncatedSpace:
    """Howell form of the truncated span of one generator matrix."""

    def __init__(self, columns: Sequence[Sequence[IntPoly]], rank: int,
                 p: int, k: int, degree_cut: int):
        self.p, self.k, self.q = p, k, p ** k
        self.rank = rank
        self.degree_cut = degree_cut
        self.nvars = columns[0][0].nvars
        self.monomials = _monomials(self.nvars, degree_cut)
        self.monomial_index = {m: i for i, m in enumerate(self.monomials)}
        self.dim = rank * len(self.monomials)
        rows = []
        for col in columns:
            for shift in self.monomials:
                row = self._shifted_vec(col, shift)
                if row.any():
                    rows.append(row)
        self._pivots: list[tuple[int, int, np.ndarray]] = []  # (col, val j, row)
        self._howell(rows)

    def _poly_into(self, vec: np.ndarray, poly: IntPoly, pos: int,
                   shift: tuple[int, ...]) -> None:
        base = pos * len(self.monomials)
        for e, c in poly.terms.items():
            e2 = tuple(a + b for a, b in zip(e, shift))
            idx = self.monomial_index.get(e2)
            if idx is not None:
                vec[base + idx] = (vec[base + idx] + c) % self.q

    def _shifted_vec(self, col: Sequence[IntPoly],
                     shift: tuple[int, ...]) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.int64)
        for pos, poly in enumerate(col):
            self._poly_into(vec, poly, pos, shift)
        return vec

    def vec_of(self, col: Sequence[IntPoly]) -> np.ndarray:
        return self._shifted_vec(col, (0,) * self.nvars)

    @staticmethod
    def _val(x: int, p: int, k: int) -> int:
        v = 0
        while v < k and x % p == 0:
            x //= p
            v += 1
        return v

    def _howell(self, rows: list[np.ndarray]) -> None:
        p, k, q = self.p, self.k, self.q
        active = rows
        for c in range(self.dim):
            if not active:
                break
            best, bestv = None, k
            for idx, r in enumerate(active):
                x = int(r[c])
                if x:
                    v = self._val(x, p, k)
                    if v < bestv:
                        best, bestv = idx, v
                        if v == 0:
                            break
            if best is None:
                continue
            row = active.pop(best)
            j = bestv
            unit = int(row[c]) // p ** j
            row = (row * pow(unit, -1, q)) % q
            keep = []
            for r in active:
                x = int(r[c])
                if x:
                    r = (r - (x // p ** j) * row) % q
                if r.any():
                    keep.append(r)
            active = keep
            if j > 0:
                shifted = (row * p ** (k - j)) % q
                if shifted.any():
                    active.append(shifted)
            self._pivots.append((c, j, row))

    def member(self, vec: np.ndarray) -> bool:
        p, k, q = self.p, self.k, self.q
        v = vec % q
        for c, j, row in self._pivots:
            x = int(v[c])
            if x:
                if self._val(x, p, k) < j:
                    return False
                v = (v - (x // p ** j) * row) % q
        return not v.any()


@dataclass(frozen=True)
class MembershipQuery:
    """One localized membership decision, as made by the Groebner path."""

    p: int
    rank: int
    columns: tuple[tuple[IntPoly, ...], ...]
    target: tuple[IntPoly, ...]
    result: bool
    context: str = ""


_SPACE_CACHE: dict = {}


def space_for(columns: tuple[tuple[IntPoly, ...], ...], rank: int, p: int,
              k: int, degree_cut: int) -> TruncatedSpace:
    key = (columns, rank, p, k, degree_cut)
    sp = _SPACE_CACHE.get(key)
    if sp is None:
        sp = TruncatedSpace(columns, rank, p, k, degree_cut)
        _SPACE_CACHE[key] = sp
    return sp


def truncation_oracle(query: MembershipQuery, k: int = 3,
                      degree_cut: Optional[int] = None) -> Verdict:
    """Decide the query in ZZ[X..]/(p^k, (X..)^N); NO refutes membership."""
    if degree_cut is None:
        degree_cut = 4 * query.p
    sp = space_for(query.columns, query.rank, query.p, k, degree_cut)
    ok = sp.member(sp.vec_of(query.target))
    return Verdict.CONSISTENT if ok else Verdict.REFUTED
