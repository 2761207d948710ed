"""Independent oracles used by the tests.

quintic_instanton_numbers implements the classical mirror computation for the
quintic threefold with plain Fraction power series: hypergeometric solutions
F = sum (5d)!/(d!)^5 q^d and G = F-weighted harmonic-number sums, the mirror
map Q = q exp(G/F), and the Yukawa coupling

    5 + sum_d n_d d^3 Q^d / (1 - Q^d)
        = 5 / ((1 - 5^5 q) F(q)^2) * (q dT/dq)^(-3),  T = log q + G/F,

from which the n_d are extracted triangularly.  None of the package machinery
is used here.

string_recursion_point_correlator computes point psi-integrals purely from
the string equation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

Frac = Fraction


# -- plain Fraction power series, dense lists, index = q-degree ----------------


def s_mul(a: List[Frac], b: List[Frac], nmax: int) -> List[Frac]:
    out = [Frac(0)] * (nmax + 1)
    for i, x in enumerate(a[: nmax + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: nmax + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def s_inv(a: List[Frac], nmax: int) -> List[Frac]:
    assert a[0] != 0
    out = [Frac(0)] * (nmax + 1)
    out[0] = 1 / a[0]
    for n in range(1, nmax + 1):
        acc = Frac(0)
        for k in range(1, n + 1):
            if k < len(a):
                acc += a[k] * out[n - k]
        out[n] = -acc / a[0]
    return out


def s_exp(a: List[Frac], nmax: int) -> List[Frac]:
    assert a[0] == 0
    out = [Frac(0)] * (nmax + 1)
    out[0] = Frac(1)
    term = [Frac(0)] * (nmax + 1)
    term[0] = Frac(1)
    for j in range(1, nmax + 1):
        term = s_mul(term, a, nmax)
        for n in range(nmax + 1):
            out[n] += term[n] / factorial(j)
    return out


def s_compose(a: List[Frac], b: List[Frac], nmax: int) -> List[Frac]:
    """a(b(q)) for b with b[0] = 0."""
    assert b[0] == 0
    out = [Frac(0)] * (nmax + 1)
    out[0] = a[0] if a else Frac(0)
    power = [Frac(0)] * (nmax + 1)
    power[0] = Frac(1)
    for k in range(1, min(len(a), nmax + 1)):
        power = s_mul(power, b, nmax)
        if a[k]:
            for n in range(nmax + 1):
                out[n] += a[k] * power[n]
    return out


def harmonic(n: int) -> Frac:
    return sum((Frac(1, k) for k in range(1, n + 1)), Frac(0))


def quintic_instanton_numbers(dmax: int) -> Tuple[Dict[int, Frac], Dict[int, Frac]]:
    """Returns (n, N): instanton numbers and the multiple-cover sums
    N_d = sum_{k|d} n_{d/k} / k^3."""
    nmax = dmax
    F = [Frac(factorial(5 * d), factorial(d) ** 5) for d in range(nmax + 1)]
    G = [F[d] * 5 * (harmonic(5 * d) - harmonic(d)) for d in range(nmax + 1)]
    g_over_f = s_mul(G, s_inv(F, nmax), nmax)
    # mirror map: Q = q e^{G/F}; invert to q = q(Q) by fixed-point iteration
    exp_gf = s_exp(g_over_f, nmax)
    bigq_of_q = s_mul([Frac(0), Frac(1)] + [Frac(0)] * (nmax - 1), exp_gf, nmax)
    q_of_bigq = [Frac(0), Frac(1)] + [Frac(0)] * (nmax - 1)
    for _ in range(nmax + 2):
        # q = Q * exp(-(G/F)(q))
        inner = s_compose(g_over_f, q_of_bigq, nmax)
        e = s_exp([-x for x in inner], nmax)
        q_of_bigq = s_mul([Frac(0), Frac(1)] + [Frac(0)] * (nmax - 1), e, nmax)
    # sanity: the two maps invert each other
    check = s_compose(bigq_of_q, q_of_bigq, nmax)
    assert check[1] == 1 and all(c == 0 for c in check[2:]), "mirror map inversion failed"
    # B-model Yukawa in q
    disc = [Frac(1)] + [Frac(0)] * nmax
    if nmax >= 1:
        disc[1] = Frac(-(5 ** 5))
    f_sq = s_mul(F, F, nmax)
    # q dT/dq = 1 + q d/dq (G/F)
    dT = [Frac(0)] * (nmax + 1)
    dT[0] = Frac(1)
    for k in range(1, nmax + 1):
        dT[k] = g_over_f[k] * k
    inv_part = s_mul(s_mul(disc, f_sq, nmax), s_mul(dT, s_mul(dT, dT, nmax), nmax), nmax)
    K_q = [5 * x for x in s_inv(inv_part, nmax)]
    # change variables to Q
    K_Q = s_compose(K_q, q_of_bigq, nmax)
    # K(Q) = 5 + sum n_d d^3 Q^d / (1 - Q^d): extract n_d triangularly
    n: Dict[int, Frac] = {}
    for m in range(1, nmax + 1):
        acc = K_Q[m]
        for d in range(1, m):
            if m % d == 0:
                acc -= n[d] * d ** 3
        n[m] = acc / Frac(m ** 3)
    big_n: Dict[int, Frac] = {}
    for d in range(1, nmax + 1):
        big_n[d] = sum((n[d // k] / Frac(k ** 3) for k in range(1, d + 1) if d % k == 0),
                       Frac(0))
    return n, big_n


# -- point correlators from the string equation --------------------------------


@lru_cache(maxsize=None)
def string_recursion_point_correlator(kpowers: Tuple[int, ...]) -> Frac:
    """<psi^{k_1} ... psi^{k_n}>_{0,n} for the point, by string recursion only."""
    n = len(kpowers)
    if sum(kpowers) != n - 3 or n < 3:
        return Frac(0)
    if n == 3:
        return Frac(1)
    ks = sorted(kpowers)
    assert ks[0] == 0, "dimension forces a zero power for n > 3"
    rest = ks[1:]
    acc = Frac(0)
    for j in range(len(rest)):
        if rest[j] == 0:
            continue
        lowered = rest[:j] + [rest[j] - 1] + rest[j + 1:]
        acc += string_recursion_point_correlator(tuple(sorted(lowered)))
    return acc
