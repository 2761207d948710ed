"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are residue polynomials modulo the N-th cyclotomic polynomial
Phi_N, with Fraction coefficients.  Different orders mix freely: operands
are lifted into Q(zeta_lcm) via zeta_N = zeta_M^(M/N).  Elements whose
residue is constant are demoted back to order 1, so plain rationals stay
plain through round trips.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Sequence, Tuple

from ..errors import NonInvertible

Frac = Fraction

# ---------------------------------------------------------------------------
# dense Fraction polynomials, lowest degree first


def _strip(p: List[Frac]) -> List[Frac]:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a: Sequence[Frac], b: Sequence[Frac]) -> List[Frac]:
    n = max(len(a), len(b))
    out = [Frac(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def poly_mul(a: Sequence[Frac], b: Sequence[Frac]) -> List[Frac]:
    if not a or not b:
        return []
    out = [Frac(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb == 0:
                continue
            out[i + j] += ca * cb
    return _strip(out)


def poly_divmod(a: Sequence[Frac], b: Sequence[Frac]) -> Tuple[List[Frac], List[Frac]]:
    b = _strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    _strip(r)
    q = [Frac(0)] * max(0, len(r) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        k = len(r) - len(b)
        q[k] = c
        for i, cb in enumerate(b):
            r[k + i] -= c * cb
        _strip(r)
        if not r:
            break
    return _strip(q), r


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[Frac, ...]:
    """Coefficients of Phi_n, lowest degree first (integer-valued Fractions)."""
    if n < 1:
        raise ValueError("cyclotomic order must be >= 1")
    if n == 1:
        return (Frac(-1), Frac(1))
    # divide x^n - 1 by Phi_d for every proper divisor d
    p: List[Frac] = [Frac(-1)] + [Frac(0)] * (n - 1) + [Frac(1)]
    for d in range(1, n):
        if n % d == 0:
            q, r = poly_divmod(p, list(cyclotomic_poly(d)))
            assert not r, "cyclotomic division must be exact"
            p = q
    return tuple(p)


def _ext_gcd(a: List[Frac], b: List[Frac]) -> Tuple[List[Frac], List[Frac], List[Frac]]:
    """Return (g, u, v) with u*a + v*b = g over Q[x]."""
    r0, r1 = list(a), list(b)
    u0, u1 = [Frac(1)], []
    v0, v1 = [], [Frac(1)]
    while _strip(r1):
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_add(u0, [-c for c in poly_mul(q, u1)])
        v0, v1 = v1, poly_add(v0, [-c for c in poly_mul(q, v1)])
    return r0, u0, v0


class Cyc:
    """An element of Q(zeta_order) as a residue polynomial mod Phi_order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Frac], _reduced: bool = False):
        if _reduced:
            self.order = order
            self.coeffs = tuple(coeffs)
            return
        phi = cyclotomic_poly(order)
        deg = len(phi) - 1
        c = list(coeffs)
        if len(c) >= len(phi):
            _, c = poly_divmod(c, list(phi))
        c += [Frac(0)] * (deg - len(c))
        c = c[:deg]
        if order > 1 and all(x == 0 for x in c[1:]):
            order, c = 1, [c[0]]
        elif order == 1:
            c = [c[0]] if c else [Frac(0)]
        else:
            # demote zeta_M^(g*i) combinations into Q(zeta_{M/g})
            g = order
            for i, x in enumerate(c):
                if i and x != 0:
                    g = gcd(g, i)
                    if g == 1:
                        break
            if g > 1:
                shrunk = [c[i] for i in range(0, len(c), g)]
                sub = Cyc(order // g, shrunk)
                order, c = sub.order, list(sub.coeffs)
        self.order = order
        self.coeffs = tuple(c)

    # -- constructors

    @staticmethod
    def from_fraction(x) -> "Cyc":
        return Cyc(1, [Frac(x)], _reduced=True)

    @staticmethod
    def root_of_unity(n: int, k: int) -> "Cyc":
        if n < 1:
            raise ValueError("order must be >= 1")
        k %= n
        if k == 0:
            return Cyc.from_fraction(1)
        g = gcd(n, k)
        n, k = n // g, k // g
        mono = [Frac(0)] * k + [Frac(1)]
        return Cyc(n, mono)

    # -- structure

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.order == 1

    def as_fraction(self) -> Frac:
        if self.order != 1:
            raise ValueError("not a rational cyclotomic element")
        return self.coeffs[0]

    def _lift_coeffs(self, m: int) -> List[Frac]:
        """Raw residue coefficients inside Q(zeta_m); requires order | m."""
        if m % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {m}")
        if m == self.order:
            return list(self.coeffs)
        step = m // self.order
        out = [Frac(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return out

    def lift(self, m: int) -> "Cyc":
        """Embed into Q(zeta_m); the result may demote back if it is rational."""
        return Cyc(m, self._lift_coeffs(m))

    @staticmethod
    def _common(a: "Cyc", b: "Cyc") -> Tuple[int, List[Frac], List[Frac]]:
        """Common order and raw lifted coefficient vectors (no demotion)."""
        if a.order == b.order:
            return a.order, list(a.coeffs), list(b.coeffs)
        m = a.order * b.order // gcd(a.order, b.order)
        return m, a._lift_coeffs(m), b._lift_coeffs(m)

    # -- arithmetic

    def __add__(self, other: "Cyc") -> "Cyc":
        if self.order == 1 and other.order == 1:
            return Cyc(1, [self.coeffs[0] + other.coeffs[0]], _reduced=True)
        order, a, b = Cyc._common(self, other)
        return Cyc(order, poly_add(a, b))

    def __sub__(self, other: "Cyc") -> "Cyc":
        return self + (-other)

    def __neg__(self) -> "Cyc":
        return Cyc(self.order, tuple(-c for c in self.coeffs), _reduced=True)

    def __mul__(self, other: "Cyc") -> "Cyc":
        if self.order == 1 and other.order == 1:
            return Cyc(1, [self.coeffs[0] * other.coeffs[0]], _reduced=True)
        order, a, b = Cyc._common(self, other)
        return Cyc(order, poly_mul(a, b))

    def inverse(self) -> "Cyc":
        if self.is_zero:
            raise NonInvertible("division by zero in Q(zeta)")
        if self.order == 1:
            return Cyc(1, [1 / self.coeffs[0]], _reduced=True)
        g, u, _ = _ext_gcd(list(self.coeffs), list(cyclotomic_poly(self.order)))
        assert len(g) == 1, "residue poly must be coprime to Phi_N"
        scale = 1 / g[0]
        return Cyc(self.order, [c * scale for c in u])

    def __pow__(self, n: int) -> "Cyc":
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyc.from_fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyc):
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        m, a, b = Cyc._common(self, other)
        ra, rb = Cyc(m, a), Cyc(m, b)
        return ra.order == rb.order and ra.coeffs == rb.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        if self.order == 1:
            return f"Cyc({self.coeffs[0]})"
        return f"Cyc(zeta_{self.order}; {list(self.coeffs)})"


CYC_ZERO = Cyc.from_fraction(0)
CYC_ONE = Cyc.from_fraction(1)
