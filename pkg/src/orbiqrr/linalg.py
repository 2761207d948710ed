"""Small exact matrices of Scalars over a target's flat cohomology basis."""

from __future__ import annotations

from typing import List

from .errors import NonInvertible
from .exactalg import SCALAR_ONE, SCALAR_ZERO, Scalar, sc
from .orbtarget import CohClass, TargetModel

Matrix = List[List[Scalar]]


def mat_eye(n: int) -> Matrix:
    return [[SCALAR_ONE if i == j else SCALAR_ZERO for j in range(n)] for i in range(n)]


def mat_zero(n: int) -> Matrix:
    return [[SCALAR_ZERO] * n for _ in range(n)]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Scalar) -> Matrix:
    return [[x * c for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b[0])
    k = len(b)
    out = [[SCALAR_ZERO] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x.is_zero:
                continue
            row_b = b[t]
            row_o = out[i]
            for j in range(m):
                y = row_b[j]
                if not y.is_zero:
                    row_o[j] = row_o[j] + x * y
    return out


def mat_transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero for row in a for x in row)


def mat_inv(a: Matrix) -> Matrix:
    """Gauss-Jordan over the scalar field; entries must be log-free."""
    n = len(a)
    m = [[x for x in row] + [SCALAR_ONE if i == j else SCALAR_ZERO for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero), None)
        if piv is None:
            raise NonInvertible("singular matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def class_to_vector(t: TargetModel, cls: CohClass) -> List[Scalar]:
    v = [SCALAR_ZERO] * len(t.flat_basis)
    for key, c in cls.terms.items():
        v[t.flat_index[key]] = c
    return v


def vector_to_class(t: TargetModel, v: List[Scalar]) -> CohClass:
    return CohClass(t, {t.flat_basis[i]: c for i, c in enumerate(v) if not c.is_zero})


def mat_apply_class(t: TargetModel, m: Matrix, cls: CohClass) -> CohClass:
    v = class_to_vector(t, cls)
    out = [SCALAR_ZERO] * len(v)
    for j, x in enumerate(v):
        if x.is_zero:
            continue
        for i in range(len(v)):
            y = m[i][j]
            if not y.is_zero:
                out[i] = out[i] + y * x
    return vector_to_class(t, out)


def multiplication_matrix(t: TargetModel, cls: CohClass) -> Matrix:
    """Matrix of ordinary multiplication by cls on the flat basis (block diagonal)."""
    n = len(t.flat_basis)
    out = [[SCALAR_ZERO] * n for _ in range(n)]
    for j, (cid, beta) in enumerate(t.flat_basis):
        comp = t.by_id[cid]
        for (cid2, alpha), c in cls.terms.items():
            if cid2 != cid:
                continue
            for gamma, w in comp.product(alpha, beta).items():
                if w:
                    i = t.flat_index[(cid, gamma)]
                    out[i][j] = out[i][j] + c * sc(w)
    return out


def gram_matrix(t: TargetModel) -> Matrix:
    return t.gram()
