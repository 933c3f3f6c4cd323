"""Exact arithmetic in the biradical extension and its fraction field.

The base ring is S = ZZ[X1..Xn] localized at (p, X1..Xn); the extension is
A = S[w, u] with w^p = f and u^p = g.  A is S-free on the monomials
w^i u^j (0 <= i, j < p); an element of the fraction field K with p-power
denominator is stored as

    p^(-k) * sum coeffs[i + p*j] * w^i u^j

with integer-polynomial coefficients, canonical when k = 0 or not every
coefficient is divisible by p.  Only p-power denominators ever occur in the
constructions downstream, so the type enforces exactly that.

With f = h1^p + a p, the correction polynomial C' in one radical variable
satisfies p (W - h1) C' = (W^p - h1^p) - (W - h1)^p identically; its image
c1' gives the workhorse identity (w - h1)^p = p (a - c1' (w - h1)) = p k1,
and symmetrically for u, h2, b, c2', k2.  The shifted basis
(w - h1)^i (u - h2)^j is produced by a cached triangular change of basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .zpoly import IntPoly, coprime_a1, divexact, squarefree_local, to_string


class InstanceMismatchError(ValueError):
    pass


class DenominatorError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    """A validated problem (p, f, g) with its derived data.

    h1, h2 are the p-th root lifts (coefficients in 0..p-1), a, b the exact
    cofactors with f = h1^p + a p and g = h2^p + b p, and c1, c2 the
    coefficient lists (by radical-variable power) of the correction
    polynomials for h1 and h2.
    """

    p: int
    varnames: tuple[str, ...]
    f: IntPoly
    g: IntPoly
    h1: IntPoly
    h2: IntPoly
    a: IntPoly
    b: IntPoly
    c1: tuple[IntPoly, ...]
    c2: tuple[IntPoly, ...]

    def __post_init__(self):
        p = self.p
        if p < 3:
            raise ValueError("p must be an odd prime >= 3")
        if (self.f - self.h1 ** p - self.a * p) != 0:
            raise ValueError("f != h1^p + a*p")
        if (self.g - self.h2 ** p - self.b * p) != 0:
            raise ValueError("g != h2^p + b*p")
        if self.h1.is_zero() or self.h2.is_zero():
            raise ValueError("degenerate h1/h2 = 0 is outside Instance")
        if not squarefree_local(self.f, p) or not squarefree_local(self.g, p):
            raise ValueError("f, g must be squarefree locally")
        if not coprime_a1(self.f, self.g, p):
            raise ValueError("f, g must share no height-one prime")
        object.__setattr__(self, "_cache", {})

    @property
    def n(self) -> int:
        return len(self.varnames)

    @property
    def dim(self) -> int:
        return self.p * self.p

    def index(self, i: int, j: int) -> int:
        return i + self.p * j

    def zero_poly(self) -> IntPoly:
        return IntPoly.zero(self.n)

    def const(self, c: int) -> IntPoly:
        return IntPoly.const(self.n, c)


def cprime(h: IntPoly, p: int) -> tuple[IntPoly, ...]:
    """Coefficient list of C' with p (W - h) C' = (W^p - h^p) - (W - h)^p.

    Entry s is the coefficient polynomial of W^s.  For h = 0 the correction
    is defined to be 0 (empty list).
    """
    if h.is_zero():
        return ()
    n = h.nvars
    hw = h.extend_vars(1)
    w = IntPoly.variable(n + 1, n)
    c = (w ** p - hw ** p) - (w - hw) ** p
    cp = divexact(c, (w - hw) * p)
    coeffs = cp.coeffs_in_var(n)
    out = []
    for s in range(max(coeffs) + 1 if coeffs else 0):
        q = coeffs.get(s)
        if q is None:
            out.append(IntPoly.zero(n + 1))
        else:
            out.append(q)
    # drop the adjoined variable (now exponent 0 everywhere)
    trimmed = []
    for q in out:
        trimmed.append(IntPoly(n, {e[:n]: v for e, v in q.terms.items()}))
    return tuple(trimmed)


class KElem:
    """An element p^(-k) * sum coeffs[i + p*j] w^i u^j of K."""

    __slots__ = ("inst", "k", "coeffs")

    def __init__(self, inst: Instance, k: int, coeffs: Sequence[IntPoly]):
        if len(coeffs) != inst.dim:
            raise ValueError("coefficient vector has wrong length")
        coeffs = list(coeffs)
        p = inst.p
        while k > 0:
            reduced = []
            for q in coeffs:
                if q.is_zero():
                    reduced.append(q)
                    continue
                if q.content() % p:
                    reduced = None
                    break
                reduced.append(q.div_int(p))
            if reduced is None:
                break
            coeffs = reduced
            k -= 1
        if all(q.is_zero() for q in coeffs):
            k = 0
        self.inst = inst
        self.k = k
        self.coeffs = tuple(coeffs)

    # ----- constructors ---------------------------------------------------

    @classmethod
    def from_poly(cls, inst: Instance, q: Union[IntPoly, int]) -> "KElem":
        if isinstance(q, int):
            q = inst.const(q)
        coeffs = [inst.zero_poly()] * inst.dim
        coeffs[0] = q
        return cls(inst, 0, coeffs)

    @classmethod
    def radical(cls, inst: Instance, which: int, power: int = 1) -> "KElem":
        """w^power (which = 0) or u^power (which = 1), 0 <= power < p."""
        coeffs = [inst.zero_poly()] * inst.dim
        idx = inst.index(power, 0) if which == 0 else inst.index(0, power)
        coeffs[idx] = inst.const(1)
        return cls(inst, 0, coeffs)

    # ----- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return all(q.is_zero() for q in self.coeffs)

    def in_base_ring(self) -> bool:
        return self.k == 0 and all(
            q.is_zero() for i, q in enumerate(self.coeffs) if i != 0
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, KElem):
            return NotImplemented
        return (
            self.inst is other.inst
            and self.k == other.k
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.inst), self.k, self.coeffs))

    def _check(self, other: "KElem"):
        if self.inst is not other.inst:
            raise InstanceMismatchError("operands belong to different instances")

    # ----- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "KElem":
        other = self._coerce(other)
        self._check(other)
        k = max(self.k, other.k)
        p = self.inst.p
        sa = p ** (k - self.k)
        sb = p ** (k - other.k)
        coeffs = [
            qa * sa + qb * sb for qa, qb in zip(self.coeffs, other.coeffs)
        ]
        return KElem(self.inst, k, coeffs)

    def __sub__(self, other) -> "KElem":
        return self + (-self._coerce(other))

    def __neg__(self) -> "KElem":
        out = KElem.__new__(KElem)
        out.inst, out.k = self.inst, self.k
        out.coeffs = tuple(-q for q in self.coeffs)
        return out

    def _coerce(self, other) -> "KElem":
        if isinstance(other, KElem):
            return other
        if isinstance(other, (int, IntPoly)):
            return KElem.from_poly(self.inst, other)
        raise TypeError(f"cannot coerce {type(other)!r}")

    def __mul__(self, other) -> "KElem":
        other = self._coerce(other)
        self._check(other)
        inst = self.inst
        p = inst.p
        out = [inst.zero_poly() for _ in range(inst.dim)]
        f, g = inst.f, inst.g
        for i1 in range(p):
            for j1 in range(p):
                qa = self.coeffs[inst.index(i1, j1)]
                if qa.is_zero():
                    continue
                for i2 in range(p):
                    for j2 in range(p):
                        qb = other.coeffs[inst.index(i2, j2)]
                        if qb.is_zero():
                            continue
                        q = qa * qb
                        i, j = i1 + i2, j1 + j2
                        if i >= p:
                            q = q * f
                            i -= p
                        if j >= p:
                            q = q * g
                            j -= p
                        idx = inst.index(i, j)
                        out[idx] = out[idx] + q
        return KElem(inst, self.k + other.k, out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, e: int) -> "KElem":
        if e < 0:
            raise ValueError("negative power")
        acc = KElem.from_poly(self.inst, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def scale_down(self, j: int) -> "KElem":
        """Formal division by p^j (the denominator exponent grows by j)."""
        return KElem(self.inst, self.k + j, self.coeffs)

    # ----- views -------------------------------------------------------------

    def shifted_coeffs(self) -> tuple[IntPoly, ...]:
        """Coefficients on the shifted basis (w - h1)^i (u - h2)^j.

        The change of basis is unitriangular (expanding a shifted monomial
        only involves smaller monomials), so back substitution is exact.
        """
        order = _shift_order(self.inst)
        cols = _shift_columns(self.inst)
        residual = list(self.coeffs)
        out = [self.inst.zero_poly()] * self.inst.dim
        for (i, j) in reversed(order):
            idx = self.inst.index(i, j)
            s = residual[idx]
            out[idx] = s
            if not s.is_zero():
                col = cols[(i, j)]
                for pos, q in enumerate(col):
                    if not q.is_zero():
                        residual[pos] = residual[pos] - s * q
        return tuple(out)

    def render(self, wname: str = "w", uname: str = "u") -> str:
        """Deterministic display form "p^-k * ( <poly> * w^i*u^j + ... )"."""
        inst = self.inst
        parts = []
        for j in range(inst.p):
            for i in range(inst.p):
                q = self.coeffs[inst.index(i, j)]
                if q.is_zero():
                    continue
                body = to_string(q, inst.varnames)
                if " " in body or i or j:
                    body = f"({body})"
                rad = []
                if i:
                    rad.append(f"{wname}^{i}" if i > 1 else wname)
                if j:
                    rad.append(f"{uname}^{j}" if j > 1 else uname)
                parts.append("*".join([body] + rad))
        if not parts:
            return "0"
        s = " + ".join(parts)
        if self.k:
            return f"{inst.p}^-{self.k} * ( {s} )"
        return s

    def __repr__(self):
        return f"KElem({self.render()})"


# ----- cached structural data ----------------------------------------------


def _inst_cache(inst: Instance) -> dict:
    return inst._cache  # type: ignore[attr-defined]


def _shift_order(inst: Instance) -> list[tuple[int, int]]:
    cache = _inst_cache(inst)
    if "order" not in cache:
        cache["order"] = sorted(
            ((i, j) for i in range(inst.p) for j in range(inst.p)),
            key=lambda ij: (ij[0] + ij[1], ij[0]),
        )
    return cache["order"]


def _shift_columns(inst: Instance) -> dict[tuple[int, int], tuple[IntPoly, ...]]:
    """Monomial-basis coefficient vector of each (w-h1)^i (u-h2)^j."""
    cache = _inst_cache(inst)
    if "cols" not in cache:
        cols = {}
        for i in range(inst.p):
            for j in range(inst.p):
                el = shifted_monomial(inst, i, j)
                cols[(i, j)] = el.coeffs
        cache["cols"] = cols
    return cache["cols"]


def shifted_monomial(inst: Instance, i: int, j: int, k: int = 0) -> KElem:
    """p^(-k) (w - h1)^i (u - h2)^j as an exact element of K."""
    w = KElem.radical(inst, 0)
    u = KElem.radical(inst, 1)
    h1 = KElem.from_poly(inst, inst.h1)
    h2 = KElem.from_poly(inst, inst.h2)
    el = (w - h1) ** i * (u - h2) ** j
    return el.scale_down(k) if k else el


def c_elem(inst: Instance, which: int) -> KElem:
    """The correction element c1' (which = 0) or c2' (which = 1) inside A."""
    coeffs = [inst.zero_poly()] * inst.dim
    clist = inst.c1 if which == 0 else inst.c2
    for s, q in enumerate(clist):
        idx = inst.index(s, 0) if which == 0 else inst.index(0, s)
        coeffs[idx] = q
    return KElem(inst, 0, coeffs)


def build_named(inst: Instance, name: str, i: Optional[int] = None) -> KElem:
    """A named element of K.

    Names: tau1, tau2, tau_i(i), eta(i), m(i), k1, k2, d(i).  tau1 is
    integral only when a is divisible by p, but the element exists in K
    unconditionally and is built without that check.
    """
    p = inst.p
    w = KElem.radical(inst, 0)
    u = KElem.radical(inst, 1)
    if name == "tau1":
        acc = KElem.from_poly(inst, 0)
        for t in range(p):
            acc = acc + (inst.h1 ** t) * (w ** (p - 1 - t))
        return acc.scale_down(1)
    if name == "tau2":
        acc = KElem.from_poly(inst, 0)
        for t in range(p):
            acc = acc + (inst.h2 ** t) * (u ** (p - 1 - t))
        return acc.scale_down(1)
    if name == "tau_i":
        if i is None or not 1 <= i <= p - 1:
            raise ValueError("tau_i needs an index 1 <= i <= p-1")
        base = w * u ** i
        hh = inst.h1 * inst.h2 ** i
        acc = KElem.from_poly(inst, 0)
        for t in range(p):
            acc = acc + (hh ** t) * (base ** (p - 1 - t))
        return acc.scale_down(1)
    if name == "eta":
        if i is None or not 1 <= i <= p - 1:
            raise ValueError("eta needs an index 1 <= i <= p-1")
        return shifted_monomial(inst, i, p - i, k=1)
    if name == "m":
        if i is None or not 1 <= i <= p - 1:
            raise ValueError("m needs an index 1 <= i <= p-1")
        return w * u ** i - KElem.from_poly(inst, inst.h1 * inst.h2 ** i)
    if name == "k1":
        return KElem.from_poly(inst, inst.a) - c_elem(inst, 0) * (
            w - KElem.from_poly(inst, inst.h1)
        )
    if name == "k2":
        return KElem.from_poly(inst, inst.b) - c_elem(inst, 1) * (
            u - KElem.from_poly(inst, inst.h2)
        )
    if name == "d":
        if i is None or not 1 <= i <= p - 1:
            raise ValueError("d needs an index 1 <= i <= p-1")
        clist = cprime(inst.h1 * inst.h2 ** i, p)
        base = w * u ** i
        acc = KElem.from_poly(inst, 0)
        for s, q in enumerate(clist):
            acc = acc + q * base ** s
        return acc
    raise ValueError(f"unknown element name {name!r}")


def build_epsilon(inst: Instance, z: IntPoly, c: IntPoly, e: IntPoly,
                  index: int = 1) -> KElem:
    """The extra closure generator for the non-free cases.

    eps = p^-1 sum_{i=1..p} (-1)^i l_i c^(p-i) e^(i-1) (u-h2)^(p-i) (w-h1)^(i-1)

    with l_i = index^(1-i) mod p.  For index = 1 (the fg case) all l_i = 1.
    The coefficients solve the membership recursion
    a_{i-1} h2 + index * a_i h1 = 0 mod (p, w - h1, u - h2).
    """
    if c.is_zero() or e.is_zero():
        raise ValueError("epsilon needs nonzero cofactors c, e")
    p = inst.p
    if not 1 <= index <= p - 1:
        raise ValueError("index out of range")
    inv = pow(index, -1, p)
    acc = KElem.from_poly(inst, 0)
    for i in range(1, p + 1):
        l = pow(inv, i - 1, p)
        sign = -1 if i % 2 else 1
        coeff = (c ** (p - i)) * (e ** (i - 1)) * (sign * l)
        acc = acc + coeff * shifted_monomial(inst, i - 1, p - i)
    return acc.scale_down(1)


def p_membership(x: KElem) -> bool:
    """Membership in P = (p, w - h1, u - h2) for elements of A.

    A/P is S/pS via w -> h1, u -> h2; the test evaluates and reduces mod p.
    """
    if x.k != 0:
        raise DenominatorError("p_membership needs an element of A")
    inst = x.inst
    val = inst.zero_poly()
    for j in range(inst.p):
        for i in range(inst.p):
            q = x.coeffs[inst.index(i, j)]
            if not q.is_zero():
                val = val + q * (inst.h1 ** i) * (inst.h2 ** j)
    return val.reduce_mod(inst.p).is_zero()


class Lattice:
    """A finitely generated S-submodule of K, given by KElem generators.

    The cached matrix clears the common p-power: column j equals
    p^(kmax - k_j) times the coefficient vector of generator j, so that the
    lattice is p^(-kmax) times the integer span of the matrix columns.
    """

    def __init__(self, inst: Instance, gens: Sequence[KElem],
                 labels: Optional[Sequence[str]] = None):
        if not gens:
            raise ValueError("empty lattice")
        for x in gens:
            if x.inst is not inst:
                raise InstanceMismatchError("generator from another instance")
        self.inst = inst
        self.gens = tuple(gens)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != len(self.gens):
            raise ValueError("label count mismatch")
        self.kmax = max(x.k for x in gens)
        p = inst.p
        self.matrix = tuple(
            tuple(q * p ** (self.kmax - x.k) for q in x.coeffs) for x in gens
        )

    def __len__(self):
        return len(self.gens)

    def column_of(self, x: KElem) -> tuple[IntPoly, ...]:
        """x as a column in this lattice's cleared coordinates.

        Requires x.k <= kmax, which holds for every element of the span.
        """
        if x.inst is not self.inst:
            raise InstanceMismatchError("element from another instance")
        if x.k > self.kmax:
            raise DenominatorError(
                f"element has denominator p^{x.k} beyond the lattice's p^{self.kmax}"
            )
        s = self.inst.p ** (self.kmax - x.k)
        return tuple(q * s for q in x.coeffs)

    def elem_from_coeffs(self, coeffs: Sequence[IntPoly]) -> KElem:
        """sum coeffs[j] * gens[j], exact."""
        acc = KElem.from_poly(self.inst, 0)
        for q, x in zip(coeffs, self.gens):
            if not q.is_zero():
                acc = acc + q * x
        return acc
