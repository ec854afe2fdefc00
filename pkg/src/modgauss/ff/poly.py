"""Dense polynomials over a prime field F_p.

A polynomial is a tuple of coefficients in increasing degree, with no
trailing zeros (the zero polynomial is the empty tuple).
"""
from __future__ import annotations

from ..errors import DomainError


def normalize(f, p: int) -> tuple:
    out = [int(c) % p for c in f]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def degree(f) -> int:
    return len(f) - 1


def add(f, g, p: int) -> tuple:
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                      for i in range(n)], p)


def sub(f, g, p: int) -> tuple:
    return add(f, [-c for c in g], p)


def mul(f, g, p: int) -> tuple:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return normalize(out, p)


def divmod_poly(f, g, p: int) -> tuple[tuple, tuple]:
    """Quotient and remainder of f by g over F_p."""
    if not g:
        raise DomainError("division by the zero polynomial")
    r = list(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = r[-1] * inv % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = list(normalize(r, p))
    return normalize(q, p), normalize(r, p)


def mod(f, g, p: int) -> tuple:
    return divmod_poly(f, g, p)[1]


def monic(f, p: int) -> tuple:
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return normalize([c * inv for c in f], p)


def gcd(f, g, p: int) -> tuple:
    f, g = normalize(f, p), normalize(g, p)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def derivative(f, p: int) -> tuple:
    return normalize([i * c for i, c in enumerate(f)][1:], p)


def powmod(f, e: int, m, p: int) -> tuple:
    result, base = (1,), mod(f, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def is_squarefree(f, p: int) -> bool:
    f = normalize(f, p)
    d = derivative(f, p)
    if not d:
        return degree(f) <= 0
    return degree(gcd(f, d, p)) == 0


def is_irreducible(f, p: int) -> bool:
    """Rabin-style test: gcd(f, X^{p^i} - X) = 1 for i <= deg/2."""
    f = normalize(f, p)
    n = degree(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x = (0, 1)
    h = x
    for _ in range(n // 2):
        h = powmod(h, p, f, p)
        if degree(gcd(f, sub(h, x, p), p)) > 0:
            return False
    return True


def evaluate(f, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def resultant(f, g, p: int) -> int:
    """Res(f, g) over F_p by the Euclidean algorithm."""
    f, g = normalize(f, p), normalize(g, p)
    if not f or not g:
        return 0
    res = 1
    while degree(g) > 0:
        df, dg = degree(f), degree(g)
        r = mod(f, g, p)
        if not r:
            return 0
        dr = degree(r)
        # Res(f, g) = (-1)^{df dg} lc(g)^{df - dr} Res(g, r)
        res = res * pow(-1, df * dg) * pow(g[-1], df - dr, p) % p
        f, g = g, r
    return res * pow(g[0], degree(f), p) % p


def from_int(n: int, p: int, m: int) -> tuple:
    """Base-p digits of n (m of them) as a coefficient tuple."""
    return tuple((n // p ** i) % p for i in range(m))
