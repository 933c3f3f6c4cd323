"""Shared builders for instances used across the test suite."""

import random

from mcmv.classify import ValidationError, validate
from mcmv.zpoly import IntPoly, parse

VARS = ("X", "Y")


def poly(s, names=VARS):
    return parse(s, names)


def example1():
    """p=3, f=-5X^3+9, g=-2Y^3+9: the grade-three showcase."""
    return validate(3, poly("-5*X^3+9"), poly("-2*Y^3+9"), VARS)


def example2():
    """p=3 instantiation of f=(1-p)X^{2p}+p^2, g=(1+p)(XY)^p+p^2."""
    return validate(3, poly("-2*X^6+9"), poly("4*X^3*Y^3+9"), VARS)


def random_poly(rng, p, nvars=2, maxdeg=2, nterms=2):
    terms = {}
    for _ in range(rng.randrange(1, nterms + 1)):
        e = tuple(rng.randrange(maxdeg + 1) for _ in range(nvars))
        c = rng.randrange(-2 * p, 2 * p + 1)
        if c:
            terms[e] = c
    return IntPoly(nvars, terms)


def random_h(rng, p, nvars=2):
    """A nonzero mod-p reduced polynomial, small, for use as a root lift."""
    while True:
        terms = {}
        for _ in range(rng.randrange(1, 3)):
            e = tuple(rng.randrange(3) for _ in range(nvars))
            c = rng.randrange(1, p)
            terms[e] = c
        h = IntPoly(nvars, terms)
        if not h.reduce_mod(p).is_zero():
            return IntPoly(nvars, {e: c % p for e, c in h.terms.items() if c % p})


def random_instance(rng, p, nvars=2, want=None, max_tries=400):
    """A random validated instance; `want` filters on the classify label kind."""
    from mcmv.classify import classify

    names = VARS[:nvars]
    for _ in range(max_tries):
        h1 = random_h(rng, p, nvars)
        h2 = random_h(rng, p, nvars)
        a = random_poly(rng, p, nvars)
        b = random_poly(rng, p, nvars)
        f = h1 ** p + a * p
        g = h2 ** p + b * p
        try:
            inst = validate(p, f, g, names)
        except ValidationError:
            continue
        if want is not None and classify(inst).kind is not want:
            continue
        return inst
    raise RuntimeError("could not sample a valid instance")
