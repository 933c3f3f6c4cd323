"""Exact sparse multivariate polynomial arithmetic over ZZ and GF(p).

A polynomial in n variables is stored as a dict mapping exponent tuples
(length n, nonnegative ints) to nonzero arbitrary-precision integer
coefficients:

    -5*X^3 + 9   in ZZ[X, Y]   ->   {(3, 0): -5, (0, 0): 9}

The zero polynomial is the empty dict.  All arithmetic is exact; nothing in
this module (or anything built on it) ever rounds.

The global monomial order is graded reverse lexicographic (grevlex).  The
base ring of interest downstream is ZZ[X1..Xn] localized at (p, X1..Xn); the
predicates `is_local_unit`, `squarefree_local` and `coprime_a1` decide the
p-local questions there while computing only over ZZ.

A p-th power test used throughout: f is a p-th power mod p exactly when
every exponent of f mod p is divisible by p, because Frobenius on GF(p)[X..]
maps sum(c_a X^a) to sum(c_a X^{pa}); unique factorization in the localized
ring means no extra localized case arises, so `pth_root_mod_p` is a complete
decision procedure for membership in the lifted-Frobenius subring.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Optional

Expt = tuple[int, ...]


def grevlex_key(e: Expt):
    """Sort key realizing grevlex: bigger key = bigger monomial.

    Later-listed variables rank higher, so a remainder against an ideal like
    (p, W - h) with an adjoined variable W listed last eliminates W.
    """
    return (sum(e), tuple(-x for x in e))


class IntPoly:
    """Sparse multivariate polynomial with integer coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[dict[Expt, int]] = None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "IntPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: int) -> "IntPoly":
        return cls(nvars, {(0,) * nvars: c} if c else None)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "IntPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, e: Expt, c: int = 1) -> "IntPoly":
        return cls(nvars, {tuple(e): c} if c else None)

    # ----- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        """Total degree; the zero polynomial has none and is rejected."""
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def leading(self) -> tuple[Expt, int]:
        """Leading (exponent, coefficient) under grevlex; rejects zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def content(self) -> int:
        """gcd of all coefficients, nonnegative; 0 for the zero polynomial."""
        c = 0
        for v in self.terms.values():
            c = math.gcd(c, v)
            if c == 1:
                return 1
        return c

    def sorted_terms(self) -> list[tuple[Expt, int]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return IntPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            elif e in terms:
                del terms[e]
        out = IntPoly(self.nvars)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        out = IntPoly(self.nvars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return IntPoly(self.nvars)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        prod: dict[Expt, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(map(sum, zip(e1, e2)))
                v = prod.get(e, 0) + c1 * c2
                if v:
                    prod[e] = v
                elif e in prod:
                    del prod[e]
        out = IntPoly(self.nvars)
        out.terms = prod
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        if k < 0:
            raise ValueError("negative power")
        out = IntPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly.const(self.nvars, other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"IntPoly({to_string(self, tuple(f'x{i}' for i in range(self.nvars)))!r})"

    # ----- structural helpers -------------------------------------------

    def div_int(self, c: int) -> "IntPoly":
        """Exact division by a nonzero integer; raises if not exact."""
        out = IntPoly(self.nvars)
        terms = {}
        for e, v in self.terms.items():
            q, r = divmod(v, c)
            if r:
                raise ValueError("integer division not exact")
            terms[e] = q
        out.terms = terms
        return out

    def derivative(self, i: int) -> "IntPoly":
        terms: dict[Expt, int] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                terms[e2] = terms.get(e2, 0) + c * k
        return IntPoly(self.nvars, terms)

    def extend_vars(self, extra: int) -> "IntPoly":
        """Reinterpret in nvars + extra variables (new ones appended)."""
        pad = (0,) * extra
        out = IntPoly(self.nvars + extra)
        out.terms = {e + pad: c for e, c in self.terms.items()}
        return out

    def coeffs_in_var(self, v: int) -> dict[int, "IntPoly"]:
        """Split as a univariate polynomial in variable v: degree -> coefficient."""
        out: dict[int, IntPoly] = {}
        for e, c in self.terms.items():
            k = e[v]
            e2 = e[:v] + (0,) + e[v + 1:]
            bucket = out.setdefault(k, IntPoly(self.nvars))
            val = bucket.terms.get(e2, 0) + c
            if val:
                bucket.terms[e2] = val
            elif e2 in bucket.terms:
                del bucket.terms[e2]
        return {k: q for k, q in out.items() if not q.is_zero()}

    def deg_in_var(self, v: int) -> int:
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def reduce_mod(self, p: int) -> "ModPPoly":
        return ModPPoly(self.nvars, p, {e: c % p for e, c in self.terms.items()})


def monomial_content(f: IntPoly) -> Expt:
    """Componentwise min exponent over all terms (the monomial gcd of f)."""
    if not f.terms:
        raise ValueError("zero polynomial")
    mins = None
    for e in f.terms:
        mins = e if mins is None else tuple(map(min, mins, e))
        if not any(mins):
            break
    return mins


def shift_down(f: IntPoly, m: Expt) -> IntPoly:
    """Exact division by the monomial X^m."""
    out = IntPoly(f.nvars)
    terms = {}
    for e, c in f.terms.items():
        e2 = tuple(a - b for a, b in zip(e, m))
        if any(x < 0 for x in e2):
            raise ValueError("monomial division not exact")
        terms[e2] = c
    out.terms = terms
    return out


def try_divexact(f: IntPoly, g: IntPoly) -> Optional[IntPoly]:
    """Quotient f/g in ZZ[X..] if the division is exact, else None."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return IntPoly(f.nvars)
    ge, gc = g.leading()
    q = IntPoly(f.nvars)
    r = f
    while not r.is_zero():
        re, rc = r.leading()
        e = tuple(a - b for a, b in zip(re, ge))
        if any(x < 0 for x in e):
            return None
        cq, rem = divmod(rc, gc)
        if rem:
            return None
        t = IntPoly.monomial(f.nvars, e, cq)
        q = q + t
        r = r - t * g
    return q


def divexact(f: IntPoly, g: IntPoly) -> IntPoly:
    q = try_divexact(f, g)
    if q is None:
        raise ValueError("polynomial division not exact")
    return q


def _normalize_sign(f: IntPoly) -> IntPoly:
    if f.is_zero():
        return f
    _, c = f.leading()
    return -f if c < 0 else f


def _content_in_var(f: IntPoly, v: int) -> IntPoly:
    acc = IntPoly(f.nvars)
    for coeff in f.coeffs_in_var(v).values():
        acc = gcd(acc, coeff)
        if acc.is_const() and abs(acc.constant_term()) == 1:
            break
    return acc


def _lead_coeff_in_var(f: IntPoly, v: int) -> IntPoly:
    cs = f.coeffs_in_var(v)
    return cs[max(cs)]


def _prem(f: IntPoly, g: IntPoly, v: int) -> IntPoly:
    """Pseudo-remainder of f by g as univariates in variable v."""
    dg = g.deg_in_var(v)
    lcg = _lead_coeff_in_var(g, v)
    r = f
    while not r.is_zero() and r.deg_in_var(v) >= dg:
        dr = r.deg_in_var(v)
        lr = _lead_coeff_in_var(r, v)
        r = r * lcg - g * lr * IntPoly.monomial(
            f.nvars, tuple(dr - dg if i == v else 0 for i in range(f.nvars))
        )
    return r


def _gcd_rec(f: IntPoly, g: IntPoly) -> IntPoly:
    # both nonzero, integer contents already 1 apart from sign
    if f.is_const() or g.is_const():
        return IntPoly.const(f.nvars, math.gcd(f.content(), g.content()))
    present = sorted(
        v for v in range(f.nvars)
        if f.deg_in_var(v) > 0 or g.deg_in_var(v) > 0
    )
    v = present[0]
    df, dg = f.deg_in_var(v), g.deg_in_var(v)
    if df == 0:
        return _gcd_rec(f, _content_in_var(g, v))
    if dg == 0:
        return _gcd_rec(_content_in_var(f, v), g)
    if df < dg:
        f, g = g, f
    contf, contg = _content_in_var(f, v), _content_in_var(g, v)
    c = _gcd_rec(contf, contg)
    fp, gp = divexact(f, contf), divexact(g, contg)
    # primitive PRS in v
    while True:
        r = _prem(fp, gp, v)
        if r.is_zero():
            prim = gp
            break
        if r.deg_in_var(v) == 0:
            prim = IntPoly.const(f.nvars, 1)
            break
        r = divexact(r, _content_in_var(r, v))
        fp, gp = gp, r
    return _normalize_sign(c * prim)


def gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Exact gcd in ZZ[X1..Xn], content included, positive leading coefficient."""
    if f.is_zero():
        return _normalize_sign(g)
    if g.is_zero():
        return _normalize_sign(f)
    if f.terms == g.terms:
        return _normalize_sign(f)
    cf, cg = f.content(), g.content()
    c = math.gcd(cf, cg)
    f1, g1 = f.div_int(cf), g.div_int(cg)
    mf, mg = monomial_content(f1), monomial_content(g1)
    m = tuple(map(min, mf, mg))
    f2, g2 = shift_down(f1, mf), shift_down(g1, mg)
    core = _gcd_rec(f2, g2)
    return _normalize_sign(IntPoly.monomial(f.nvars, m, c) * core)


def gcd_many(polys: Iterable[IntPoly]) -> IntPoly:
    acc: Optional[IntPoly] = None
    for q in polys:
        acc = q if acc is None else gcd(acc, q)
        if acc.is_const() and abs(acc.constant_term()) == 1:
            break
    if acc is None:
        raise ValueError("empty gcd")
    return _normalize_sign(acc)


# ----- GF(p) layer -------------------------------------------------------


class ModPPoly:
    """Sparse polynomial over GF(p), coefficients reduced to 0..p-1."""

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms: Optional[dict[Expt, int]] = None):
        self.nvars = nvars
        self.p = p
        if terms:
            self.terms = {e: c % p for e, c in terms.items() if c % p}
        else:
            self.terms = {}

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def lift(self) -> IntPoly:
        """The representative in ZZ[X..] with coefficients in 0..p-1."""
        return IntPoly(self.nvars, dict(self.terms))

    def leading(self) -> tuple[Expt, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def deg_in_var(self, v: int) -> int:
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def scale(self, c: int) -> "ModPPoly":
        return ModPPoly(self.nvars, self.p, {e: v * c for e, v in self.terms.items()})

    def monic(self) -> "ModPPoly":
        _, lc = self.leading()
        return self.scale(pow(lc, -1, self.p))

    def __add__(self, other: "ModPPoly") -> "ModPPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return ModPPoly(self.nvars, self.p, terms)

    def __sub__(self, other: "ModPPoly") -> "ModPPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) - c
        return ModPPoly(self.nvars, self.p, terms)

    def __mul__(self, other: "ModPPoly") -> "ModPPoly":
        prod: dict[Expt, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(sum, zip(e1, e2)))
                prod[e] = prod.get(e, 0) + c1 * c2
        return ModPPoly(self.nvars, self.p, prod)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModPPoly)
            and self.p == other.p
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"ModPPoly(p={self.p}, {self.terms!r})"


def try_divexact_mod(f: ModPPoly, g: ModPPoly) -> Optional[ModPPoly]:
    """Quotient f/g in GF(p)[X..] if exact, else None."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    p = f.p
    if f.is_zero():
        return ModPPoly(f.nvars, p)
    ge, gc = g.leading()
    gcinv = pow(gc, -1, p)
    q = ModPPoly(f.nvars, p)
    r = f
    while not r.is_zero():
        re, rc = r.leading()
        e = tuple(a - b for a, b in zip(re, ge))
        if any(x < 0 for x in e):
            return None
        t = ModPPoly(f.nvars, p, {e: rc * gcinv})
        q = q + t
        r = r - t * g
    return q


def divexact_mod(f: ModPPoly, g: ModPPoly) -> ModPPoly:
    q = try_divexact_mod(f, g)
    if q is None:
        raise ValueError("polynomial division not exact")
    return q


def _content_in_var_mod(f: ModPPoly, v: int) -> ModPPoly:
    acc: Optional[ModPPoly] = None
    for k in sorted(set(e[v] for e in f.terms)):
        coeff = ModPPoly(
            f.nvars, f.p,
            {e[:v] + (0,) + e[v + 1:]: c for e, c in f.terms.items() if e[v] == k},
        )
        acc = coeff if acc is None else gcd_mod(acc, coeff)
        if acc.is_const():
            break
    return acc


def _prem_mod(f: ModPPoly, g: ModPPoly, v: int) -> ModPPoly:
    dg = g.deg_in_var(v)
    lcg = ModPPoly(
        f.nvars, f.p,
        {e[:v] + (0,) + e[v + 1:]: c for e, c in g.terms.items() if e[v] == dg},
    )
    r = f
    while not r.is_zero() and r.deg_in_var(v) >= dg:
        dr = r.deg_in_var(v)
        lr = ModPPoly(
            f.nvars, f.p,
            {e[:v] + (0,) + e[v + 1:]: c for e, c in r.terms.items() if e[v] == dr},
        )
        shift = ModPPoly(
            f.nvars, f.p,
            {tuple(dr - dg if i == v else 0 for i in range(f.nvars)): 1},
        )
        r = r * lcg - g * lr * shift
    return r


def gcd_mod(f: ModPPoly, g: ModPPoly) -> ModPPoly:
    """gcd in GF(p)[X1..Xn], normalized monic under grevlex."""
    if f.is_zero():
        return g.monic() if not g.is_zero() else g
    if g.is_zero():
        return f.monic()
    if f.is_const() or g.is_const():
        return ModPPoly(f.nvars, f.p, {(0,) * f.nvars: 1})
    present = sorted(
        v for v in range(f.nvars)
        if f.deg_in_var(v) > 0 or g.deg_in_var(v) > 0
    )
    v = present[0]
    df, dg = f.deg_in_var(v), g.deg_in_var(v)
    if df == 0:
        return gcd_mod(f, _content_in_var_mod(g, v))
    if dg == 0:
        return gcd_mod(_content_in_var_mod(f, v), g)
    if df < dg:
        f, g = g, f
    contf, contg = _content_in_var_mod(f, v), _content_in_var_mod(g, v)
    c = gcd_mod(contf, contg)
    fp, gp = divexact_mod(f, contf), divexact_mod(g, contg)
    while True:
        r = _prem_mod(fp, gp, v)
        if r.is_zero():
            prim = gp
            break
        if r.deg_in_var(v) == 0:
            prim = ModPPoly(f.nvars, f.p, {(0,) * f.nvars: 1})
            break
        r = divexact_mod(r, _content_in_var_mod(r, v))
        fp, gp = gp, r
    return (c * prim).monic()


# ----- p-local predicates -------------------------------------------------


def pth_root_mod_p(f: IntPoly, p: int) -> Optional[IntPoly]:
    """h with h^p = f mod p, if f mod p is a p-th power in GF(p)[X..].

    Exists exactly when every exponent of f mod p is divisible by p; the
    coefficients carry over unchanged (c^p = c in GF(p)).  Returned with
    coefficients in 0..p-1.  None when no root exists.
    """
    if p < 3:
        raise ValueError("p must be an odd prime >= 3")
    fbar = f.reduce_mod(p)
    root: dict[Expt, int] = {}
    for e, c in fbar.terms.items():
        if any(x % p for x in e):
            return None
        root[tuple(x // p for x in e)] = c
    return IntPoly(f.nvars, root)


def is_local_unit(f: IntPoly, p: int) -> bool:
    """True iff f lies outside (p, X1..Xn): constant term coprime to p."""
    return f.constant_term() % p != 0


def squarefree_local(f: IntPoly, p: int) -> bool:
    """True iff no prime of ZZ[X..]_(p,X..) divides f twice.

    Tests: p^2 does not divide the integer content; after stripping a single
    p from the content (when present), gcd(f, df/dX1, .., df/dXn) over ZZ
    (content included) must be a local unit.
    """
    if f.is_zero():
        raise ValueError("squarefree test on zero polynomial")
    c = f.content()
    if c % (p * p) == 0:
        return False
    g = f
    for i in range(f.nvars):
        d = f.derivative(i)
        if not d.is_zero():
            g = gcd(g, d)
    if c % p == 0:
        g = g.div_int(p)
    return is_local_unit(g, p)


def coprime_a1(f: IntPoly, g: IntPoly, p: int) -> bool:
    """True iff f, g share no height-one prime locally: gcd is a local unit."""
    if f.is_zero() or g.is_zero():
        raise ValueError("coprimality test on zero polynomial")
    return is_local_unit(gcd(f, g), p)


# ----- parsing and printing ----------------------------------------------


class PolyParseError(ValueError):
    """Syntax error in a polynomial expression; `pos` is the 0-based offset."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


class UnknownVariableError(PolyParseError):
    def __init__(self, name: str, pos: int):
        super().__init__(f"unknown variable {name!r}", pos)
        self.name = name


_OPS = set("+-*^()")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum()):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        elif ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
        else:
            raise PolyParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, names: list[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = list(names)
        self.nvars = len(names)

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self) -> IntPoly:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> IntPoly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> IntPoly:
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                if val == "-":
                    sign = -sign
            else:
                break
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise PolyParseError("expected exponent", pos)
            base = base ** int(val)
        return base if sign == 1 else -base

    def atom(self) -> IntPoly:
        kind, val, pos = self.next()
        if kind == "int":
            return IntPoly.const(self.nvars, int(val))
        if kind == "name":
            if val not in self.names:
                raise UnknownVariableError(val, pos)
            return IntPoly.variable(self.nvars, self.names.index(val))
        if kind == "op" and val == "(":
            e = self.expr()
            kind, val, pos = self.next()
            if not (kind == "op" and val == ")"):
                raise PolyParseError("expected ')'", pos)
            return e
        raise PolyParseError("expected integer, variable or '('", pos)


def parse(text: str, names: list[str] | tuple[str, ...]) -> IntPoly:
    """Parse a polynomial expression over the named variables.

    Grammar: decimal integers with optional sign, variable names
    [A-Za-z][A-Za-z0-9]*, operators + - * ^ (with ^ tightest, then *, then
    the additive ones), parentheses, insignificant whitespace.  Implicit
    multiplication is a syntax error.
    """
    parser = _Parser(text, list(names))
    e = parser.expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise PolyParseError("expected operator or end of input", pos)
    return e


def to_string(f: IntPoly, names: Iterable[str]) -> str:
    """Render in the grammar of `parse`; parse(to_string(f)) == f."""
    names = list(names)
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        factors = [f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
