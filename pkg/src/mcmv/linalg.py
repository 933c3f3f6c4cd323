"""Exact linear algebra over ZZ[X1..Xn] and its fraction field.

Forward elimination is fraction-free (Bareiss): every intermediate entry is
a minor of the input matrix, every division is exact in ZZ[X..].  Solutions
are produced as reduced fractions of polynomials so that p-local questions
(is the denominator a unit at (p, X..)?) can be read off the reduced form.

The eliminator caches its row-operation history, so solving many targets
against one matrix costs one elimination plus cheap replays.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .zpoly import IntPoly, divexact, gcd, is_local_unit


class Frac:
    """Reduced fraction num/den of integer polynomials, den != 0.

    Reduced over the UFD with content included; the denominator carries a
    positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: IntPoly, den: Optional[IntPoly] = None, *, reduce: bool = True):
        if den is None:
            den = IntPoly.const(num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero():
            g = gcd(num, den)
            if not (g.is_const() and g.constant_term() == 1):
                num = divexact(num, g)
                den = divexact(den, g)
        if num.is_zero():
            den = IntPoly.const(num.nvars, 1)
        else:
            _, lc = den.leading()
            if lc < 0:
                num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def from_int(cls, nvars: int, c: int) -> "Frac":
        return cls(IntPoly.const(nvars, c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Frac") -> "Frac":
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.num * other.den, self.den * other.num)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, reduce=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_local(self, p: int) -> bool:
        """True iff the reduced denominator is a unit of ZZ[X..]_(p,X..)."""
        return is_local_unit(self.den, p)

    def __repr__(self):
        return f"Frac({self.num!r}/{self.den!r})"


class BareissSolver:
    """Fraction-free elimination of a polynomial matrix, reusable per target.

    The matrix is given by columns; `solve` answers M x = t with reduced
    fractional coordinates (free variables pinned to zero), or None when the
    system is inconsistent.
    """

    def __init__(self, columns: Sequence[Sequence[IntPoly]]):
        if not columns:
            raise ValueError("empty matrix")
        self.ncols = len(columns)
        self.nrows = len(columns[0])
        self.nvars = columns[0][0].nvars
        rows = [[columns[j][i] for j in range(self.ncols)] for i in range(self.nrows)]
        self._ops: list[tuple] = []
        self._echelon = rows
        self._pivots: list[tuple[int, int]] = []  # (row, col)
        self._eliminate()

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def det(self) -> IntPoly:
        """Determinant; requires a square matrix (last Bareiss pivot)."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        if self.rank < self.nrows:
            return IntPoly.zero(self.nvars)
        r, c = self._pivots[-1]
        d = self._echelon[r][c]
        return -d if self._swap_sign < 0 else d

    def _eliminate(self) -> None:
        rows = self._echelon
        prev = IntPoly.const(self.nvars, 1)
        pr = 0
        self._swap_sign = 1
        for pc in range(self.ncols):
            pivot_row = None
            for i in range(pr, self.nrows):
                if not rows[i][pc].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            if pivot_row != pr:
                rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
                self._ops.append(("swap", pr, pivot_row))
                self._swap_sign = -self._swap_sign
            pivot = rows[pr][pc]
            factors = []
            for i in range(pr + 1, self.nrows):
                f = rows[i][pc]
                factors.append(f)
                if f.is_zero() and pivot == prev:
                    continue
                for j in range(self.ncols):
                    rows[i][j] = divexact(rows[i][j] * pivot - f * rows[pr][j], prev)
            self._ops.append(("elim", pr, pivot, prev, factors))
            self._pivots.append((pr, pc))
            prev = pivot
            pr += 1
            if pr == self.nrows:
                break

    def _apply_ops(self, t: list[IntPoly]) -> list[IntPoly]:
        t = list(t)
        for op in self._ops:
            if op[0] == "swap":
                _, i, j = op
                t[i], t[j] = t[j], t[i]
            else:
                _, pr, pivot, prev, factors = op
                for k, f in enumerate(factors):
                    i = pr + 1 + k
                    t[i] = divexact(t[i] * pivot - f * t[pr], prev)
        return t

    def solve(self, target: Sequence[IntPoly]) -> Optional[list[Frac]]:
        """Coordinates x with M x = target, or None if inconsistent.

        When the columns are not independent the free coordinates are zero.
        """
        if len(target) != self.nrows:
            raise ValueError("target length mismatch")
        t = self._apply_ops(target)
        for i in range(self.rank, self.nrows):
            if not t[i].is_zero():
                return None
        zero = Frac.from_int(self.nvars, 0)
        x: list[Frac] = [zero] * self.ncols
        rows = self._echelon
        for r in range(self.rank - 1, -1, -1):
            _, pc = self._pivots[r]
            acc = Frac(t[r])
            for j in range(pc + 1, self.ncols):
                if not rows[r][j].is_zero() and not x[j].is_zero():
                    acc = acc - Frac(rows[r][j]) * x[j]
            x[pc] = acc / Frac(rows[r][pc])
        return x


def frac_rank(columns: Sequence[Sequence[IntPoly]]) -> int:
    """Rank over the fraction field of ZZ[X..]."""
    if not columns:
        return 0
    return BareissSolver(columns).rank
