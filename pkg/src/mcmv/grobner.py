"""Strong Groebner bases over ZZ[X1..Xn] for ideals and free-module columns.

Over the Euclidean coefficient ring ZZ a basis is *strong* when every
element of the span has a leading term divisible, coefficient and monomial
both, by the leading term of some basis element.  Buchberger completion
therefore processes gcd-polynomials (Bezout combinations killing the
coefficient gcd at the lcm monomial) in addition to S-polynomials; with
both families reducing to zero, normal-form-equals-zero decides membership
exactly.  Field-coefficient bases over QQ would erase exactly the p-part
that every question downstream lives on, so nothing here ever leaves ZZ.

Representation: a module element is a dict mapping (position, exponent
tuple) to a nonzero integer.  The module order is position-over-term
(earlier positions dominate) extending the global grevlex, which makes the
first block of positions an elimination block: syzygies, intersections and
colon ideals all come from reading off basis elements supported on the tag
block.  Localization is never performed on data; `local_member` decides
membership over ZZ[X..]_(p,X..) through the identity

    z in M.S_loc  <=>  z in M + (p, X1..Xn) z   over ZZ[X..]

(for u z in M with u a local unit, split u = u(0) - w, pick u(0)' with
u(0) u(0)' = 1 + p t; then z = u(0)' m - p t z + u(0)' w z; the converse
direction is Nakayama's trick: (1 - a) z in M with a in the maximal ideal).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .zpoly import Expt, IntPoly, grevlex_key

ModTerm = tuple[int, Expt]
VP = dict[ModTerm, int]


def _term_key(t: ModTerm):
    return (-t[0], grevlex_key(t[1]))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _vp_lt(v: VP) -> ModTerm:
    return max(v, key=_term_key)


def _vp_sub_scaled(v: VP, g: VP, c: int, shift: Expt) -> VP:
    """v - c * X^shift * g, in place on a copy of v."""
    out = dict(v)
    for (pos, e), gc in g.items():
        t = (pos, tuple(a + b for a, b in zip(e, shift)))
        val = out.get(t, 0) - c * gc
        if val:
            out[t] = val
        elif t in out:
            del out[t]
    return out


def _vp_neg(v: VP) -> VP:
    return {t: -c for t, c in v.items()}


def _vp_is_zero(v: VP) -> bool:
    return not v


@dataclass
class _Elt:
    vp: VP
    pos: int
    expt: Expt
    coeff: int

    @classmethod
    def make(cls, v: VP) -> "_Elt":
        (pos, e) = _vp_lt(v)
        c = v[(pos, e)]
        if c < 0:
            v = _vp_neg(v)
            c = -c
        return cls(v, pos, e, c)


class RankMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SubmoduleGens:
    """Columns of a map onto a submodule of a free module of given rank."""

    rank: int
    columns: tuple[tuple[IntPoly, ...], ...]

    def __post_init__(self):
        for col in self.columns:
            if len(col) != self.rank:
                raise RankMismatchError("column length does not match ambient rank")

    @classmethod
    def from_ideal(cls, gens: Sequence[IntPoly]) -> "SubmoduleGens":
        return cls(1, tuple((g,) for g in gens))

    @property
    def nvars(self) -> int:
        return self.columns[0][0].nvars


def _col_to_vp(col: Sequence[IntPoly]) -> VP:
    v: VP = {}
    for pos, poly in enumerate(col):
        for e, c in poly.terms.items():
            v[(pos, e)] = c
    return v


def _vp_to_col(v: VP, rank: int, nvars: int) -> tuple[IntPoly, ...]:
    polys = [IntPoly(nvars) for _ in range(rank)]
    for (pos, e), c in v.items():
        polys[pos].terms[e] = c
    return tuple(polys)


class GroebnerBasis:
    """A completed strong basis; immutable once constructed."""

    def __init__(self, elements: list[VP], rank: int, nvars: int,
                 order: str = "pot-grevlex", reduced: bool = False):
        self.rank = rank
        self.nvars = nvars
        self.order = order
        self.reduced = reduced
        self._elts = [_Elt.make(dict(v)) for v in elements]
        self._by_pos: dict[int, list[_Elt]] = {}
        for el in self._elts:
            self._by_pos.setdefault(el.pos, []).append(el)

    def __len__(self):
        return len(self._elts)

    @property
    def elements(self) -> list[VP]:
        return [el.vp for el in self._elts]

    def columns(self) -> SubmoduleGens:
        return SubmoduleGens(
            self.rank, tuple(_vp_to_col(el.vp, self.rank, self.nvars) for el in self._elts)
        )

    def _nf(self, v: VP) -> VP:
        v = dict(v)
        rem: VP = {}
        while v:
            t = _vp_lt(v)
            c = v[t]
            pos, e = t
            hit = None
            for el in self._by_pos.get(pos, ()):
                be = el.expt
                if c % el.coeff == 0 and all(x >= y for x, y in zip(e, be)):
                    hit = el
                    break
            if hit is None:
                rem[t] = c
                del v[t]
            else:
                shift = tuple(x - y for x, y in zip(e, hit.expt))
                v = _vp_sub_scaled(v, hit.vp, c // hit.coeff, shift)
        return rem


def _spair(f: _Elt, g: _Elt) -> VP:
    gamma = tuple(map(max, f.expt, g.expt))
    l = f.coeff * g.coeff // _xgcd(f.coeff, g.coeff)[0]
    a = _vp_sub_scaled({}, f.vp, -(l // f.coeff), tuple(x - y for x, y in zip(gamma, f.expt)))
    return _vp_sub_scaled(a, g.vp, l // g.coeff, tuple(x - y for x, y in zip(gamma, g.expt)))


def _gpair(f: _Elt, g: _Elt) -> VP:
    gamma = tuple(map(max, f.expt, g.expt))
    _, s, t = _xgcd(f.coeff, g.coeff)
    a = _vp_sub_scaled({}, f.vp, -s, tuple(x - y for x, y in zip(gamma, f.expt)))
    return _vp_sub_scaled(a, g.vp, -t, tuple(x - y for x, y in zip(gamma, g.expt)))


def _complete(gens: list[VP], rank: int, nvars: int, assume_prefix: int = 0) -> GroebnerBasis:
    """Buchberger completion with S- and gcd-pairs, normal pair selection."""
    gb = GroebnerBasis([], rank, nvars)
    heap: list[tuple] = []

    def push_pairs(j: int):
        ej = gb._elts[j]
        for i in range(j):
            ei = gb._elts[i]
            if ei.pos != ej.pos:
                continue
            if assume_prefix and i < assume_prefix and j < assume_prefix:
                continue
            gamma = tuple(map(max, ei.expt, ej.expt))
            key = _term_key((ei.pos, gamma))
            ci, cj = ei.coeff, ej.coeff
            if ci % cj and cj % ci:
                heapq.heappush(heap, (key, 0, i, j))
            heapq.heappush(heap, (key, 1, i, j))

    def append(v: VP):
        el = _Elt.make(v)
        gb._elts.append(el)
        gb._by_pos.setdefault(el.pos, []).append(el)
        push_pairs(len(gb._elts) - 1)

    for v in gens:
        if v:
            append(dict(v))

    while heap:
        _, kind, i, j = heapq.heappop(heap)
        f, g = gb._elts[i], gb._elts[j]
        v = _gpair(f, g) if kind == 0 else _spair(f, g)
        r = gb._nf(v)
        if r:
            append(r)
    return gb


def _reduce_basis(gb: GroebnerBasis) -> GroebnerBasis:
    """Minimal, tail-reduced, deterministically sorted strong basis."""
    elts = sorted(gb._elts, key=lambda el: _term_key((el.pos, el.expt)))
    kept: list[_Elt] = []
    for el in elts:
        dominated = False
        for other in kept:
            # strong divisibility of leading terms; earlier (smaller) wins
            if (other.pos == el.pos and el.coeff % other.coeff == 0
                    and all(x >= y for x, y in zip(el.expt, other.expt))):
                dominated = True
                break
        if not dominated:
            kept.append(el)
    out = GroebnerBasis([el.vp for el in kept], gb.rank, gb.nvars, gb.order, reduced=True)
    final: list[VP] = []
    for idx, el in enumerate(out._elts):
        others = GroebnerBasis(
            [e.vp for k, e in enumerate(out._elts) if k != idx],
            gb.rank, gb.nvars, gb.order,
        )
        lt = {(el.pos, el.expt): el.coeff}
        tail = dict(el.vp)
        del tail[(el.pos, el.expt)]
        red = others._nf(tail) if others._elts else tail
        lt.update(red)
        final.append(lt)
    return GroebnerBasis(final, gb.rank, gb.nvars, gb.order, reduced=True)


IdealLike = Union[SubmoduleGens, Sequence[IntPoly]]


def _as_module(gens: IdealLike) -> SubmoduleGens:
    if isinstance(gens, SubmoduleGens):
        return gens
    return SubmoduleGens.from_ideal(list(gens))


def strong_gb(gens: IdealLike, order: str = "pot-grevlex") -> GroebnerBasis:
    """Canonical reduced strong Groebner basis of the given ideal or module."""
    if order != "pot-grevlex":
        raise ValueError(f"unsupported order {order!r}")
    m = _as_module(gens)
    vps = [_col_to_vp(col) for col in m.columns]
    gb = _complete(vps, m.rank, m.nvars)
    return _reduce_basis(gb)


def normal_form(v, gb: GroebnerBasis):
    """Remainder of v against gb; no term strongly divisible by a basis LT.

    Zero exactly when v lies in the ZZ[X..]-span.  v may be an IntPoly (rank
    1) or a sequence of IntPoly of the ambient rank; the result has the same
    shape.
    """
    if isinstance(v, IntPoly):
        if gb.rank != 1:
            raise RankMismatchError("polynomial against module basis")
        r = gb._nf(_col_to_vp((v,)))
        return _vp_to_col(r, 1, gb.nvars)[0]
    if len(v) != gb.rank:
        raise RankMismatchError("vector length does not match basis rank")
    r = gb._nf(_col_to_vp(tuple(v)))
    return _vp_to_col(r, gb.rank, gb.nvars)


def _tagged_block(cols: Sequence[tuple[IntPoly, ...]], rank: int, nvars: int,
                  tag: bool) -> list[VP]:
    """Column vp's living in rank + (#tagged) positions, unit tag appended."""
    out = []
    for i, col in enumerate(cols):
        v = _col_to_vp(col)
        if tag:
            v[(rank + i, (0,) * nvars)] = 1
        out.append(v)
    return out


def _lift_through(map_cols: Sequence[tuple[IntPoly, ...]],
                  target_cols: Sequence[tuple[IntPoly, ...]],
                  rank: int, nvars: int) -> list[tuple[IntPoly, ...]]:
    """Generators of {u : sum u_i map_cols_i  in  span(target_cols)}.

    The ambient block is an elimination block for pot-grevlex, so the basis
    elements supported on the tag block read off the u's.
    """
    k = len(map_cols)
    gens = _tagged_block(map_cols, rank, nvars, True)
    gens += _tagged_block(target_cols, rank, nvars, False)
    ext = [{(pos, e): c for (pos, e), c in v.items()} for v in gens]
    gb = _complete(ext, rank + k, nvars)
    out = []
    for el in gb._elts:
        if all(pos >= rank for (pos, _e) in el.vp):
            shifted = {(pos - rank, e): c for (pos, e), c in el.vp.items()}
            out.append(_vp_to_col(shifted, k, nvars))
    return out


def syzygies(m: IdealLike) -> SubmoduleGens:
    """Generators of the kernel of the map defined by the columns of m."""
    mm = _as_module(m)
    zeros = []
    u = _lift_through(mm.columns, zeros, mm.rank, mm.nvars)
    return SubmoduleGens(len(mm.columns), tuple(u))


def module_intersect(m1: IdealLike, m2: IdealLike,
                     with_coeffs: bool = False):
    """Generators of span(m1) ∩ span(m2).

    Computed from syzygies of the block [m1 | -m2]: the first-block
    coordinates of each syzygy, applied to m1, generate the intersection.
    With `with_coeffs`, also return those coordinate vectors.
    """
    a, b = _as_module(m1), _as_module(m2)
    if a.rank != b.rank:
        raise RankMismatchError("ambient rank mismatch")
    u = _lift_through(a.columns, b.columns, a.rank, a.nvars)
    nvars = a.nvars
    gens = []
    for coeffs in u:
        col = [IntPoly.zero(nvars) for _ in range(a.rank)]
        for i, c in enumerate(coeffs):
            if not c.is_zero():
                for pos in range(a.rank):
                    col[pos] = col[pos] + c * a.columns[i][pos]
        gens.append(tuple(col))
    out = SubmoduleGens(a.rank, tuple(gens))
    if with_coeffs:
        return out, [tuple(c) for c in u]
    return out


def colon(m: IdealLike, z) -> SubmoduleGens:
    """Generators of the ideal {s : s*z in span(m)}; z a vector or scalar."""
    mm = _as_module(m)
    if isinstance(z, IntPoly):
        if mm.rank != 1:
            raise RankMismatchError("scalar colon against higher-rank module")
        zcol = (z,)
    else:
        zcol = tuple(z)
        if len(zcol) != mm.rank:
            raise RankMismatchError("colon element has wrong rank")
    u = _lift_through([zcol], mm.columns, mm.rank, mm.nvars)
    return SubmoduleGens(1, tuple(u))


def preimage(map_cols: IdealLike, target: IdealLike) -> SubmoduleGens:
    """Generators of {u : (map columns) u in span(target)}; rank = #columns."""
    a, b = _as_module(map_cols), _as_module(target)
    if a.rank != b.rank:
        raise RankMismatchError("ambient rank mismatch")
    u = _lift_through(a.columns, b.columns, a.rank, a.nvars)
    return SubmoduleGens(len(a.columns), tuple(u))


def local_member(z, m: IdealLike, p: int,
                 gb: Optional[GroebnerBasis] = None) -> bool:
    """Membership of z in span(m) over ZZ[X..] localized at (p, X1..Xn).

    True iff u*z lies in the global span for some local unit u; decided as
    z in span(m) + (p, X1..Xn)*z (see the module docstring).  A precomputed
    strong basis of m may be passed to be extended incrementally.
    """
    mm = _as_module(m)
    nvars = mm.nvars
    if isinstance(z, IntPoly):
        if mm.rank != 1:
            raise RankMismatchError("polynomial against module generators")
        zcol = (z,)
    else:
        zcol = tuple(z)
        if len(zcol) != mm.rank:
            raise RankMismatchError("vector length does not match ambient rank")
    zvp = _col_to_vp(zcol)
    if not zvp:
        return True
    if gb is None:
        gb = strong_gb(mm)
    if not gb._nf(zvp):
        return True
    scalars = [IntPoly.const(nvars, p)]
    scalars += [IntPoly.variable(nvars, i) for i in range(nvars)]
    extra = []
    for s in scalars:
        col = tuple(s * q for q in zcol)
        extra.append(_col_to_vp(col))
    ext = _complete(gb.elements + extra, mm.rank, nvars, assume_prefix=len(gb))
    return not ext._nf(zvp)


def unit_colon_member(z, m: IdealLike, p: int) -> bool:
    """Reference route for local membership: scan (m : z) for a local unit.

    An ideal avoids the maximal ideal iff some generator does; kept as a
    cross-check for `local_member`.
    """
    from .zpoly import is_local_unit

    mm = _as_module(m)
    if isinstance(z, IntPoly):
        zc = (z,)
    else:
        zc = tuple(z)
    if all(q.is_zero() for q in zc):
        return True
    c = colon(mm, zc if len(zc) > 1 else zc[0])
    return any(is_local_unit(col[0], p) for col in c.columns)
