"""Quantization of quadratic Hamiltonians on the Fock space.

Variables q_k^alpha are indexed by (k, flat basis index); polynomials carry
exact Scalar coefficients that are Laurent in hbar on a bounded window
(genus <= 1 terms: hbar^-1 through hbar^1 suffice for every identity here).
Operators are sums of the three Darboux shapes

    hbar^-1 q q,   q d/dq,   hbar d/dq d/dq,

exactly as produced by quantizing B z^m:

  m < 0:  (1/2h) sum_{0<=k<=-m-1} (-1)^{k+m} B_{ab} q_k^b q_{-1-k-m}^a
          - sum_{k>=-m} B^a_b q_k^b d/dq_{k+m}^a
  m > 0:  - sum_{k>=0} B^a_b q_k^b d/dq_{k+m}^a
          + (h/2) sum_{0<=k<=m-1} (-1)^k B^{ab} d/dq_k^b d/dq_{m-1-k}^a
  m = 0:  - sum_{k>=0} B^a_b q_k^b d/dq_k^a

(the m = 0 sign follows from h_A = (1/2) Omega(Af, f) and agrees with the
m -> 0 limits of the other two shapes).  Index sums are truncated at K.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    IndexOverflow,
    NotInfinitesimallySymplectic,
    TruncationTooNarrow,
)
from .exactalg import SCALAR_ONE, SCALAR_ZERO, Scalar, sc
from .linalg import (
    Matrix,
    gram_matrix,
    mat_inv,
    mat_is_zero,
    mat_mul,
    multiplication_matrix,
)
from .loopops import is_infinitesimally_symplectic
from .orbtarget import CohClass, TargetModel

Frac = Fraction
Var = Tuple[int, int]                  # (k, flat basis index)
Monomial = Tuple[Var, ...]             # sorted


class FockPolynomial:
    """Truncated polynomial in the q_k^alpha with hbar-Laurent Scalar coefficients."""

    __slots__ = ("target", "kmax", "degmax", "terms")

    def __init__(self, target: TargetModel, kmax: int, degmax: int,
                 terms: Optional[Dict[Monomial, Dict[int, Scalar]]] = None):
        self.target = target
        self.kmax = kmax
        self.degmax = degmax
        self.terms: Dict[Monomial, Dict[int, Scalar]] = {}
        if terms:
            for mono, coeffs in terms.items():
                for h, c in coeffs.items():
                    self.add_term(mono, h, c)

    def add_term(self, mono: Sequence[Var], hpow: int, coeff):
        coeff = sc(coeff)
        if coeff.is_zero:
            return
        mono = tuple(sorted(mono))
        if len(mono) > self.degmax:
            return
        for (k, a) in mono:
            if k > self.kmax or k < 0:
                raise IndexOverflow(f"variable index {k} outside [0, {self.kmax}]")
            if a >= len(self.target.flat_basis):
                raise IndexOverflow(f"basis index {a} out of range")
        bucket = self.terms.setdefault(mono, {})
        new = bucket.get(hpow, SCALAR_ZERO) + coeff
        if new.is_zero:
            bucket.pop(hpow, None)
            if not bucket:
                del self.terms[mono]
        else:
            bucket[hpow] = new

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o: "FockPolynomial") -> "FockPolynomial":
        out = FockPolynomial(self.target, min(self.kmax, o.kmax),
                             min(self.degmax, o.degmax))
        for mono, coeffs in self.terms.items():
            if len(mono) <= out.degmax:
                for h, c in coeffs.items():
                    out.add_term(mono, h, c)
        for mono, coeffs in o.terms.items():
            if len(mono) <= out.degmax:
                for h, c in coeffs.items():
                    out.add_term(mono, h, c)
        return out

    def scale(self, c) -> "FockPolynomial":
        c = sc(c)
        out = FockPolynomial(self.target, self.kmax, self.degmax)
        for mono, coeffs in self.terms.items():
            for h, x in coeffs.items():
                out.add_term(mono, h, x * c)
        return out

    def __sub__(self, o: "FockPolynomial") -> "FockPolynomial":
        return self + o.scale(sc(-1))

    def derivative(self, var: Var) -> "FockPolynomial":
        out = FockPolynomial(self.target, self.kmax, self.degmax)
        for mono, coeffs in self.terms.items():
            mult = mono.count(var)
            if not mult:
                continue
            reduced = list(mono)
            reduced.remove(var)
            for h, c in coeffs.items():
                out.add_term(tuple(reduced), h, c * sc(mult))
        return out

    def mul_var(self, var: Var) -> "FockPolynomial":
        out = FockPolynomial(self.target, self.kmax, self.degmax)
        for mono, coeffs in self.terms.items():
            if len(mono) + 1 > self.degmax:
                continue
            for h, c in coeffs.items():
                out.add_term(mono + (var,), h, c)
        return out

    def shift_hbar(self, dh: int) -> "FockPolynomial":
        out = FockPolynomial(self.target, self.kmax, self.degmax)
        for mono, coeffs in self.terms.items():
            for h, c in coeffs.items():
                out.add_term(mono, h + dh, c)
        return out

    def coeff(self, mono: Sequence[Var], hpow: int) -> Scalar:
        return self.terms.get(tuple(sorted(mono)), {}).get(hpow, SCALAR_ZERO)

    def __eq__(self, o) -> bool:
        if not isinstance(o, FockPolynomial):
            return NotImplemented
        return (self - o).is_zero

    def __repr__(self):
        rows = []
        for mono, coeffs in sorted(self.terms.items()):
            for h, c in sorted(coeffs.items()):
                rows.append(f"h^{h} {mono}: {c.to_obj()}")
        return "FockPolynomial(" + "; ".join(rows) + ")"


class FockOperator:
    """Sum of the three quantization shapes, with Scalar coefficients."""

    __slots__ = ("target", "kmax", "qq", "qd", "dd")

    def __init__(self, target: TargetModel, kmax: int):
        self.target = target
        self.kmax = kmax
        self.qq: Dict[Tuple[Var, Var], Scalar] = {}   # hbar^-1 q q
        self.qd: Dict[Tuple[Var, Var], Scalar] = {}   # q d
        self.dd: Dict[Tuple[Var, Var], Scalar] = {}   # hbar d d

    def _accum(self, bucket: Dict, key, coeff: Scalar):
        if coeff.is_zero:
            return
        new = bucket.get(key, SCALAR_ZERO) + coeff
        if new.is_zero:
            bucket.pop(key, None)
        else:
            bucket[key] = new

    def add_qq(self, v1: Var, v2: Var, coeff):
        self._accum(self.qq, tuple(sorted((v1, v2))), sc(coeff))

    def add_qd(self, qvar: Var, dvar: Var, coeff):
        self._accum(self.qd, (qvar, dvar), sc(coeff))

    def add_dd(self, v1: Var, v2: Var, coeff):
        self._accum(self.dd, tuple(sorted((v1, v2))), sc(coeff))

    def scale(self, c) -> "FockOperator":
        c = sc(c)
        out = FockOperator(self.target, self.kmax)
        for key, x in self.qq.items():
            out.qq[key] = x * c
        for key, x in self.qd.items():
            out.qd[key] = x * c
        for key, x in self.dd.items():
            out.dd[key] = x * c
        return out

    def __add__(self, o: "FockOperator") -> "FockOperator":
        out = FockOperator(self.target, min(self.kmax, o.kmax))
        for src in (self, o):
            for key, x in src.qq.items():
                out._accum(out.qq, key, x)
            for key, x in src.qd.items():
                out._accum(out.qd, key, x)
            for key, x in src.dd.items():
                out._accum(out.dd, key, x)
        return out

    def apply(self, p: FockPolynomial) -> FockPolynomial:
        out = FockPolynomial(p.target, p.kmax, p.degmax)
        for (v1, v2), c in self.qq.items():
            q = p.mul_var(v1).mul_var(v2).shift_hbar(-1).scale(c)
            out = out + q
        for (qv, dv), c in self.qd.items():
            out = out + p.derivative(dv).mul_var(qv).scale(c)
        for (v1, v2), c in self.dd.items():
            out = out + p.derivative(v1).derivative(v2).shift_hbar(1).scale(c)
        return out

    def to_obj(self) -> dict:
        def rows(bucket):
            return [
                {"vars": [list(v1), list(v2)], "coeff": c.to_obj()}
                for (v1, v2), c in sorted(bucket.items())
            ]
        return {"K": self.kmax, "qq_over_hbar": rows(self.qq),
                "q_d": rows(self.qd), "hbar_dd": rows(self.dd)}


def _as_matrix(t: TargetModel, B) -> Matrix:
    if isinstance(B, CohClass):
        return multiplication_matrix(t, B)
    return B


def quantize_monomial(t: TargetModel, B, m: int, K: int,
                      check: bool = True) -> FockOperator:
    """Quantization of the infinitesimally symplectic B z^m, indices <= K."""
    Bm = _as_matrix(t, B)
    if check and not is_infinitesimally_symplectic(t, Bm, m):
        raise NotInfinitesimallySymplectic(
            f"B z^{m} is not infinitesimally symplectic (need B* = (-1)^{m + 1} B)")
    g = gram_matrix(t)
    ginv = mat_inv(g)
    lower = mat_mul(g, Bm)     # B_{ab} = g_{ac} B^c_b
    upper = mat_mul(Bm, ginv)  # B^{ab} = B^a_c g^{cb}
    n = len(t.flat_basis)
    op = FockOperator(t, K)
    if m < 0:
        for k in range(0, -m):
            sign = sc((-1) ** ((k + m) % 2)) * sc(Frac(1, 2))
            k2 = -1 - k - m
            if k > K or k2 > K:
                continue
            for a in range(n):
                for b in range(n):
                    c = lower[a][b]
                    if not c.is_zero:
                        op.add_qq((k, b), (k2, a), sign * c)
        for k in range(-m, K + 1):
            for a in range(n):
                for b in range(n):
                    c = Bm[a][b]
                    if not c.is_zero:
                        op.add_qd((k, b), (k + m, a), -c)
    elif m > 0:
        for k in range(0, K - m + 1):
            for a in range(n):
                for b in range(n):
                    c = Bm[a][b]
                    if not c.is_zero:
                        op.add_qd((k, b), (k + m, a), -c)
        for k in range(0, m):
            k2 = m - 1 - k
            if k > K or k2 > K:
                continue
            sign = sc((-1) ** (k % 2)) * sc(Frac(1, 2))
            for a in range(n):
                for b in range(n):
                    c = upper[a][b]
                    if not c.is_zero:
                        op.add_dd((k, b), (k2, a), sign * c)
    else:
        for k in range(0, K + 1):
            for a in range(n):
                for b in range(n):
                    c = Bm[a][b]
                    if not c.is_zero:
                        op.add_qd((k, b), (k, a), -c)
    return op


def string_operator(t: TargetModel, K: int) -> FockOperator:
    """(1/z)^ = -(1/2h) q_0 g q_0 - sum_{k>=1} q_k d/dq_{k-1} (componentwise in the basis)."""
    return quantize_monomial(t, mat_eye_like(t), -1, K, check=True)


def mat_eye_like(t: TargetModel) -> Matrix:
    n = len(t.flat_basis)
    return [[SCALAR_ONE if i == j else SCALAR_ZERO for j in range(n)] for i in range(n)]


# -- cocycle ---------------------------------------------------------------------


def build_point_potential(t: TargetModel, nmax: int) -> FockPolynomial:
    """Genus-0 point potential F^0 truncated at n <= nmax insertions.

    Expressed in t-variables (the affine dilaton shift q_1 = t_1 - 1 is
    applied symbolically by the string-residual helper, never expanded);
    carried at the hbar^-1 level.
    """
    from .genus0.correlators import _compositions, point_correlators
    pot = FockPolynomial(t, nmax, nmax)
    for n in range(3, nmax + 1):
        for kp in _compositions(n - 3, n):
            value = point_correlators(n, list(kp))
            mults: Dict[int, int] = {}
            for k in kp:
                mults[k] = mults.get(k, 0) + 1
            denom = 1
            for mcount in mults.values():
                denom *= factorial(mcount)
            mono = tuple((k, 0) for k in kp)
            pot.add_term(mono, -1, sc(Frac(value, denom)))
    return pot


def string_residual(t: TargetModel, potential: FockPolynomial) -> FockPolynomial:
    """The hbar^-1 part of (1/z)^ D, for D = exp(hbar^-1 F^0), in t-variables:

        -(1/2) t_0^a g_{ab} t_0^b - sum_{k>=1} (t_k - delta_{k,1}) dF/dt_{k-1}.

    With the potential truncated at n <= N the residual vanishes in all
    degrees < N; the top degree is a truncation boundary artifact, so the
    result is truncated one degree below the potential.
    """
    g = gram_matrix(t)
    nb = len(t.flat_basis)
    out = FockPolynomial(t, potential.kmax, potential.degmax - 1)
    for a in range(nb):
        for b in range(nb):
            if not g[a][b].is_zero:
                out.add_term(((0, a), (0, b)), -1, g[a][b] * sc(Frac(-1, 2)))
    # - sum_{k>=1} t_k dF/dt_{k-1} through a shape-conforming operator
    op = FockOperator(t, potential.kmax)
    for k in range(1, potential.kmax + 1):
        for a in range(nb):
            op.add_qd((k, a), (k - 1, a), sc(-1))
    shifted = op.apply(potential)
    # + dF/dt_0^{unit} from the dilaton slot t_1 = q_1 + 1 along the unit direction
    unit_idx = t.flat_index[("0", 0)]
    shifted = shifted + potential.derivative((0, unit_idx))
    wide = out + shifted
    final = FockPolynomial(t, potential.kmax, potential.degmax - 1)
    for mono, coeffs in wide.terms.items():
        if len(mono) <= final.degmax:
            for h, c in coeffs.items():
                final.add_term(mono, h, c)
    return final


def hamiltonian_cocycle(opA: FockOperator, opB: FockOperator) -> Scalar:
    """Closed form: C(pp, qq) = 1 + delta on matching index pairs.

    The dd coefficients of an operator are the pp coefficients of its
    Hamiltonian, the hbar^-1 qq coefficients are the qq ones, so
    C(h_A, h_B) = sum_pairs (ppA * qqB - qqA * ppB) (1 + delta_pair).
    """
    out = SCALAR_ZERO
    for key, c in opA.dd.items():
        other = opB.qq.get(key)
        if other is not None:
            delta = 1 if key[0] == key[1] else 0
            out = out + c * other * sc(1 + delta)
    for key, c in opA.qq.items():
        other = opB.dd.get(key)
        if other is not None:
            delta = 1 if key[0] == key[1] else 0
            out = out - c * other * sc(1 + delta)
    return out


def commutator_cocycle(t: TargetModel, A: Tuple, B: Tuple, K: int) -> Scalar:
    """Scalar part of [A^, B^] - {A, B}^ for A = (B_1, m_1), B = (B_2, m_2).

    Evaluated on the basis polynomials 1, q_v, q_v q_w with indices small
    enough that index truncation cannot leak in; a non-scalar residual raises
    TruncationTooNarrow.
    """
    (B1, m1), (B2, m2) = A, B
    if K < abs(m1) + abs(m2) + 2:
        raise TruncationTooNarrow(f"need K >= |m|+|m'|+2 = {abs(m1) + abs(m2) + 2}")
    op1 = quantize_monomial(t, B1, m1, K)
    op2 = quantize_monomial(t, B2, m2, K)
    M1, M2 = _as_matrix(t, B1), _as_matrix(t, B2)
    LC = [[sum((M1[i][k] * M2[k][j] for k in range(len(M1))), SCALAR_ZERO)
           - sum((M2[i][k] * M1[k][j] for k in range(len(M1))), SCALAR_ZERO)
           for j in range(len(M1))] for i in range(len(M1))]
    bracket = None
    if not mat_is_zero(LC):
        bracket = quantize_monomial(t, LC, m1 + m2, K, check=False)

    ksafe = K - abs(m1) - abs(m2)
    nb = len(t.flat_basis)
    degmax = 4

    def residual(p: FockPolynomial) -> FockPolynomial:
        r = op1.apply(op2.apply(p)) - op2.apply(op1.apply(p))
        if bracket is not None:
            r = r - bracket.apply(p)
        return r

    one = FockPolynomial(t, K, degmax)
    one.add_term((), 0, SCALAR_ONE)
    scalar = residual(one).coeff((), 0)
    # the residual minus scalar*id must kill every small test polynomial
    probes: List[FockPolynomial] = []
    for k in range(0, max(ksafe, 1)):
        for a in range(nb):
            p = FockPolynomial(t, K, degmax)
            p.add_term(((k, a),), 0, SCALAR_ONE)
            probes.append(p)
    for k in range(0, max(ksafe - 1, 1)):
        for a in range(nb):
            p = FockPolynomial(t, K, degmax)
            p.add_term(((k, a), (k + 1, a)), 0, SCALAR_ONE)
            probes.append(p)
    for p in probes:
        if not (residual(p) - p.scale(scalar)).is_zero:
            raise TruncationTooNarrow(
                "commutator residual is not scalar on the safe index range")
    return scalar
