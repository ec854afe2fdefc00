"""Extension fields F_{p^m} with log/exp tables.

Elements are encoded as integers idx = sum_i c_i p^i, where c_i are the
coefficients of the polynomial-basis representative modulo a fixed monic
irreducible. The modulus is the smallest one in that same integer order, so
the encoding is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import DomainError, ResourceError
from . import poly

DESK_BUDGET = 10 ** 8
_POWER_TABLE_LIMIT = 4 * 10 ** 7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for k in range(2, int(n ** 0.5) + 1):
        if n % k == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest generator of F_p^x."""
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // l, p) != 1 for l in factors):
            return g
    raise DomainError(f"{p} is not prime")


@lru_cache(maxsize=None)
def discrete_log_table(p: int) -> np.ndarray:
    """dlog[a] = k with g^k = a for the smallest primitive root g; dlog[0] = -1."""
    g = primitive_root(p)
    table = np.full(p, -1, dtype=np.int64)
    a = 1
    for k in range(p - 1):
        table[a] = k
        a = a * g % p
    table.flags.writeable = False
    return table


def smallest_irreducible(p: int, m: int) -> tuple:
    """Monic irreducible of degree m minimizing sum_i c_i p^i."""
    for n in range(p ** m):
        f = poly.from_int(n, p, m) + (1,)
        if poly.is_irreducible(f, p):
            return f
    raise DomainError(f"no irreducible polynomial of degree {m} over F_{p}")


def check_budget(p: int, m: int):
    cost = p ** m
    if cost > DESK_BUDGET:
        raise ResourceError(f"F_{p}^{m} has {cost:.3g} elements, over the desk budget "
                            f"of {DESK_BUDGET:.0e}", projected_cost=cost)


@dataclass(frozen=True, eq=False)
class FieldTower:
    """F_{p^m} with exp/log tables for a primitive element omega.

    ``exp_table[k]`` is the index of omega^k (k < q - 1); ``log_table[idx]``
    is the inverse, with ``log_table[0] = -1``. ``norm_log_factor`` is the c
    with dlog(N(omega^k)) = c k mod (p - 1), dlog taken in base the smallest
    primitive root of F_p.
    """

    p: int
    m: int
    modulus: tuple = field(init=False)
    exp_table: np.ndarray = field(init=False, repr=False)
    log_table: np.ndarray = field(init=False, repr=False)
    norm_log_factor: int = field(init=False)
    _power_cache: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        p, m = self.p, self.m
        if p < 3 or not is_prime(p):
            raise DomainError("the base field characteristic must be an odd prime")
        if m < 1:
            raise DomainError("extension degree must be >= 1")
        check_budget(p, m)
        f = smallest_irreducible(p, m)
        exp_digits = _power_digits(f, p, m)
        weights = p ** np.arange(m, dtype=np.int64)
        exp_table = exp_digits @ weights
        q = p ** m
        log_table = np.full(q, -1, dtype=np.int64)
        log_table[exp_table] = np.arange(q - 1, dtype=np.int64)
        if np.any(log_table[1:] < 0):
            raise DomainError("internal error: element is not primitive")
        r = int(exp_table[(q - 1) // (p - 1)])
        if r >= p:
            raise DomainError("internal error: norm of omega is not in the prime field")
        for name, value in (("modulus", f), ("exp_table", exp_table),
                            ("log_table", log_table),
                            ("norm_log_factor", int(discrete_log_table(p)[r])),
                            ("_power_cache", {})):
            object.__setattr__(self, name, value)
        exp_table.flags.writeable = False
        log_table.flags.writeable = False

    @property
    def q(self) -> int:
        return self.p ** self.m

    def mul(self, x, y):
        """Elementwise product of encoded elements."""
        x, y = np.asarray(x), np.asarray(y)
        lx, ly = self.log_table[x], self.log_table[y]
        out = self.exp_table[(lx + ly) % (self.q - 1)]
        return np.where((lx < 0) | (ly < 0), 0, out)

    def add_prime(self, x, c: int):
        """x + c for encoded x and c in F_p: only the constant digit changes."""
        x = np.asarray(x)
        low = x % self.p
        return x - low + (low + c) % self.p

    def _power_digits(self, k: int) -> np.ndarray:
        """Digits of x^k for every field element x, shape (q, m)."""
        if k not in self._power_cache:
            x = np.arange(self.q, dtype=np.int64)
            lx = self.log_table[x]
            idx = np.where(lx < 0, 1 if k == 0 else 0, self.exp_table[(k * lx) % (self.q - 1)])
            weights = self.p ** np.arange(self.m, dtype=np.int64)
            dtype = np.int8 if self.p < 128 else np.int32
            self._power_cache[k] = ((idx[:, None] // weights) % self.p).astype(dtype)
        return self._power_cache[k]

    def evaluate(self, f, x=None) -> np.ndarray:
        """f(x) for a polynomial f over F_p, at all field elements by default.

        Full-field evaluation combines cached digit tables of x^k (additions
        in F_q are digitwise); evaluation at given points uses Horner's rule
        through the log tables.
        """
        f = poly.normalize(f, self.p)
        if x is None and self.q * self.m * len(f) <= _POWER_TABLE_LIMIT:
            acc = np.zeros((self.q, self.m), dtype=np.int64)
            for k, c in enumerate(f):
                if c:
                    acc += c * self._power_digits(k).astype(np.int64)
            acc %= self.p
            return acc @ (self.p ** np.arange(self.m, dtype=np.int64))
        if x is None:
            x = np.arange(self.q, dtype=np.int64)
        acc = np.full(np.shape(x), f[-1] if f else 0, dtype=np.int64)
        logx = self.log_table[x]
        qm1 = self.q - 1
        for c in reversed(f[:-1]):
            la = self.log_table[acc]
            prod = self.exp_table[(la + logx) % qm1]
            acc = np.where((la < 0) | (logx < 0), 0, prod)
            acc = self.add_prime(acc, c)
        return acc

    def norm_dlog(self, y) -> np.ndarray:
        """Discrete log (base the smallest primitive root of F_p) of N(y); -1 at y = 0."""
        ly = self.log_table[np.asarray(y)]
        return np.where(ly < 0, -1, (self.norm_log_factor * ly) % (self.p - 1))


def _mul_block(block: np.ndarray, e: np.ndarray, f: tuple, p: int) -> np.ndarray:
    """Multiply each row of digit array ``block`` by the element ``e`` modulo f."""
    m = len(f) - 1
    n = block.shape[0]
    prod = np.zeros((n, 2 * m - 1), dtype=np.int64)
    for j in range(m):
        if e[j]:
            prod[:, j:j + m] += block * int(e[j])
    prod %= p
    low = np.asarray(f[:m], dtype=np.int64)
    for k in range(2 * m - 2, m - 1, -1):
        c = prod[:, k]
        prod[:, k - m:k] = (prod[:, k - m:k] - c[:, None] * low) % p
    return prod[:, :m]


def _element_order_is_full(e: np.ndarray, f: tuple, p: int, q: int) -> bool:
    for l in prime_factors(q - 1):
        g = poly.powmod(poly.normalize(e, p), (q - 1) // l, f, p)
        if g == (1,):
            return False
    return True


def _power_digits(f: tuple, p: int, m: int) -> np.ndarray:
    """Digit rows of omega^0 .. omega^{q-2} for the smallest primitive omega.

    Powers are generated by block doubling: the block omega^{0..L-1} times
    omega^L gives omega^{L..2L-1}.
    """
    q = p ** m
    for n in range(1, q):
        e = np.array(poly.from_int(n, p, m), dtype=np.int64)
        if _element_order_is_full(e, f, p, q):
            break
    block = np.zeros((1, m), dtype=np.int64)
    block[0, 0] = 1
    step = e.copy()  # omega^{len(block)}
    while block.shape[0] < q - 1:
        block = np.concatenate([block, _mul_block(block, step, f, p)])
        step = _mul_block(step[None, :], step, f, p)[0]
    return block[:q - 1]


@lru_cache(maxsize=8)
def field_tower(p: int, m: int) -> FieldTower:
    """Cached :class:`FieldTower` (tables are built once per (p, m))."""
    return FieldTower(p, m)
