"""Loop-group machinery: the Bernoulli-weighted classes A_m, log Delta, Delta,
Euler-class s-values, adjoints, and symplectomorphism checks.

A LoopOperator is a z-Laurent window of endomorphisms of H^*(IX).  Operators
built from ordinary multiplication keep their multiplier classes (cheap,
commutative, exact exp); composition and adjoints fall back to matrices over
the flat basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bernoulli import bernoulli_value
from .errors import TruncationTooNarrow
from .exactalg import SCALAR_ONE, SCALAR_ZERO, Scalar, sc
from .givental import GiventalElement
from .linalg import (
    Matrix,
    gram_matrix,
    mat_apply_class,
    mat_eye,
    mat_inv,
    mat_is_zero,
    mat_mul,
    mat_transpose,
    multiplication_matrix,
)
from .orbtarget import BundleModel, CohClass, TargetModel

Frac = Fraction


class LoopOperator:
    """Window [zmin, zmax] of endomorphism blocks; exactly zero below zmin.

    ``exact=True`` asserts the operator has no tail above zmax either (its
    support is completely listed), which widens the reliable windows of sums
    and compositions.  Truncations of genuinely infinite series (like Delta)
    are exact=False: their blocks above zmax are unknown.
    """

    __slots__ = ("target", "zmin", "zmax", "blocks", "mult_classes", "exact")

    def __init__(self, target: TargetModel, zmin: int, zmax: int,
                 blocks: Optional[Dict[int, Matrix]] = None,
                 mult_classes: Optional[Dict[int, CohClass]] = None,
                 exact: bool = False):
        if zmin > zmax:
            raise ValueError("zmin > zmax")
        self.target = target
        self.zmin = zmin
        self.zmax = zmax
        self.exact = exact
        if mult_classes is not None:
            self.mult_classes = {n: c for n, c in mult_classes.items() if not c.is_zero}
            self.blocks = blocks or {
                n: multiplication_matrix(target, c) for n, c in self.mult_classes.items()
            }
        else:
            self.mult_classes = None
            self.blocks = {n: b for n, b in (blocks or {}).items()}
        for n in self.blocks:
            if not (zmin <= n <= zmax):
                raise ValueError(f"block at z^{n} outside window")

    @staticmethod
    def identity(target: TargetModel, zmin: int = 0, zmax: int = 0) -> "LoopOperator":
        return LoopOperator(target, zmin, zmax,
                            mult_classes={0: target.unit_everywhere()}, exact=True)

    @staticmethod
    def from_classes(target: TargetModel, classes: Dict[int, CohClass],
                     zmin: int, zmax: int, exact: bool = False) -> "LoopOperator":
        return LoopOperator(target, zmin, zmax, mult_classes=classes, exact=exact)

    def block(self, n: int) -> Matrix:
        size = len(self.target.flat_basis)
        return self.blocks.get(n, [[SCALAR_ZERO] * size for _ in range(size)])

    @property
    def is_multiplication(self) -> bool:
        return self.mult_classes is not None

    # -- algebra

    def __add__(self, o: "LoopOperator") -> "LoopOperator":
        zmin = min(self.zmin, o.zmin)
        if self.exact and o.exact:
            zmax = max(self.zmax, o.zmax)
        elif self.exact:
            zmax = o.zmax      # the exact side contributes known zeros above its window
        elif o.exact:
            zmax = self.zmax
        else:
            zmax = min(self.zmax, o.zmax)
        blocks = {}
        for n in range(zmin, zmax + 1):
            m = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.block(n), o.block(n))]
            if not mat_is_zero(m):
                blocks[n] = m
        mult = None
        if self.is_multiplication and o.is_multiplication:
            mult = {}
            for n in range(zmin, zmax + 1):
                c = self.mult_classes.get(n, self.target.zero_class()) + \
                    o.mult_classes.get(n, self.target.zero_class())
                if not c.is_zero:
                    mult[n] = c
        return LoopOperator(self.target, zmin, zmax, blocks=blocks, mult_classes=mult,
                            exact=self.exact and o.exact)

    def scale(self, c: Scalar) -> "LoopOperator":
        c = sc(c)
        blocks = {n: [[x * c for x in row] for row in b] for n, b in self.blocks.items()}
        mult = None
        if self.is_multiplication:
            mult = {n: cls.scale(c) for n, cls in self.mult_classes.items()}
        return LoopOperator(self.target, self.zmin, self.zmax, blocks=blocks,
                            mult_classes=mult, exact=self.exact)

    def compose(self, o: "LoopOperator") -> "LoopOperator":
        """(self . o)(z): blocks C_n = sum_{a+b=n} A_a B_b.

        For a pair of exact operators the full product window is exact; with
        unknown tails the result is reliable only where neither tail can
        contribute.
        """
        zmin = self.zmin + o.zmin
        caps = []
        if not self.exact:
            caps.append(self.zmax + o.zmin)   # self's unknown tail times o's floor
        if not o.exact:
            caps.append(o.zmax + self.zmin)
        zmax = min(caps) if caps else self.zmax + o.zmax
        if zmin > zmax:
            raise TruncationTooNarrow("composition window is empty")
        blocks: Dict[int, Matrix] = {}
        for a, ba in self.blocks.items():
            for b, bb in o.blocks.items():
                n = a + b
                if not (zmin <= n <= zmax):
                    continue
                prod = mat_mul(ba, bb)
                if n in blocks:
                    blocks[n] = [[x + y for x, y in zip(r1, r2)]
                                 for r1, r2 in zip(blocks[n], prod)]
                else:
                    blocks[n] = prod
        blocks = {n: b for n, b in blocks.items() if not mat_is_zero(b)}
        return LoopOperator(self.target, zmin, zmax, blocks=blocks,
                            exact=self.exact and o.exact)

    def flip_z(self) -> "LoopOperator":
        """M(z) -> M(-z): blocks keep their exponent, odd ones change sign."""
        blocks = {}
        mult = {} if self.is_multiplication else None
        for n, b in self.blocks.items():
            blocks[n] = [[x if n % 2 == 0 else -x for x in row] for row in b]
        if mult is not None:
            for n, c in self.mult_classes.items():
                mult[n] = c if n % 2 == 0 else c.scale(sc(-1))
        return LoopOperator(self.target, self.zmin, self.zmax, blocks=blocks,
                            mult_classes=mult, exact=self.exact)

    def sub_identity(self) -> "LoopOperator":
        """self - 1, for residual reporting."""
        eye = mat_eye(len(self.target.flat_basis))
        blocks = {n: [row[:] for row in b] for n, b in self.blocks.items()}
        zero_blk = blocks.setdefault(0, [[SCALAR_ZERO] * len(eye) for _ in range(len(eye))])
        blocks[0] = [[x - e for x, e in zip(r1, r2)] for r1, r2 in zip(zero_blk, eye)]
        if mat_is_zero(blocks[0]):
            del blocks[0]
        return LoopOperator(self.target, self.zmin, self.zmax, blocks=blocks,
                            exact=self.exact)

    def apply(self, e: GiventalElement) -> GiventalElement:
        zmin = e.zmin + self.zmin
        caps = [e.zmax + self.zmin]
        if not self.exact:
            caps.append(self.zmax + e.zmin)
        zmax = min(caps)
        if zmin > zmax:
            raise TruncationTooNarrow("operator application window is empty")
        out = GiventalElement(self.target, zmin, zmax, e.dmax)
        for (n, d), cls in e.data.items():
            for a, blk in self.blocks.items():
                m = n + a
                if zmin <= m <= zmax:
                    out.add_to(m, d, mat_apply_class(self.target, blk, cls))
        return out


# -- adjoints ------------------------------------------------------------------


def adjoint(t: TargetModel, M: LoopOperator,
            gram: Optional[Matrix] = None) -> LoopOperator:
    """Blockwise adjoint with respect to the orbifold pairing (or a supplied Gram matrix).

    Multiplication operators stay multiplication operators: the adjoint of
    multiplication by a class is multiplication by its involution transport.
    """
    if gram is None and M.is_multiplication:
        mult = {n: t.involution_transport(c) for n, c in M.mult_classes.items()}
        return LoopOperator(t, M.zmin, M.zmax, mult_classes=mult, exact=M.exact)
    g = gram if gram is not None else gram_matrix(t)
    g_inv = mat_inv(g)
    blocks = {n: mat_mul(g_inv, mat_mul(mat_transpose(b), g)) for n, b in M.blocks.items()}
    return LoopOperator(t, M.zmin, M.zmax, blocks=blocks, exact=M.exact)


def twisted_gram(t: TargetModel, F: BundleModel, s_values: Sequence[Scalar]) -> Matrix:
    """Gram matrix of the twisted pairing (a, b)_{(c,F)} on the flat basis."""
    tw = F.twist_class([sc(x) for x in s_values])
    return _twisted_gram_direct(t, tw)


def _twisted_gram_direct(t: TargetModel, tw: CohClass) -> Matrix:
    n = len(t.flat_basis)
    out = [[SCALAR_ZERO] * n for _ in range(n)]
    for i, (cid_a, ai) in enumerate(t.flat_basis):
        a = CohClass(t, {(cid_a, ai): SCALAR_ONE})
        a_tw = a.mul(tw)
        for j, (cid_b, bi) in enumerate(t.flat_basis):
            b = CohClass(t, {(cid_b, bi): SCALAR_ONE})
            val = t.orbifold_pairing(a_tw, b)
            if not val.is_zero:
                out[i][j] = val
    return out


def _residual_report(t: TargetModel, prod: LoopOperator, lo: int, hi: int) -> dict:
    bad = {}
    for n in range(lo, hi + 1):
        blk = prod.block(n)
        if not mat_is_zero(blk):
            entries = []
            for i, row in enumerate(blk):
                for j, x in enumerate(row):
                    if not x.is_zero:
                        entries.append({
                            "row": "/".join(map(str, t.flat_basis[i])),
                            "col": "/".join(map(str, t.flat_basis[j])),
                            "value": x.to_obj(),
                        })
            bad[n] = entries
    return {
        "symplectic": not bad,
        "checked_range": [lo, hi],
        "max_clean_degree": (min(bad) - 1) if bad else hi,
        "offending_blocks": bad,
    }


def check_symplectomorphism(t: TargetModel, M: LoopOperator,
                            zcheck: Optional[Tuple[int, int]] = None) -> dict:
    """Report on M*(-z) M(z) - 1 for an operator with completely known support."""
    prod = adjoint(t, M).flip_z().compose(M).sub_identity()
    lo = zcheck[0] if zcheck else prod.zmin
    hi = zcheck[1] if zcheck else prod.zmax
    if lo < prod.zmin or hi > prod.zmax:
        raise TruncationTooNarrow(
            f"requested z-range [{lo},{hi}] exceeds reliable [{prod.zmin},{prod.zmax}]")
    return _residual_report(t, prod, lo, hi)


def check_delta_symplectomorphism(t: TargetModel, F: BundleModel,
                                  s_values: Sequence[Scalar], zmax: int) -> dict:
    """Verify Delta*(-z) Delta(z) = 1 through z-degree zmax by direct product.

    Delta is built with enough z-headroom that the composition window of the
    truncations covers [zmin, zmax].  The report also notes whether the
    infinitesimal identity log Delta*(-z) + log Delta(z) = 0 held on the
    built window (it implies the product identity to all orders, since the
    multiplication blocks commute).
    """
    depth = max(c.dim for c in t.components) + 1
    d = delta_operator(t, F, s_values, zmax + depth)
    prod = adjoint(t, d).flip_z().compose(d)
    report = _residual_report(t, prod.sub_identity(), prod.zmin, min(zmax, prod.zmax))
    if prod.zmax < zmax:
        raise TruncationTooNarrow(
            f"product reliable only to z^{prod.zmax}, needed z^{zmax}")
    L = log_delta(t, F, s_values, zmax + depth)
    resid = adjoint(t, L).flip_z() + L
    report["log_residual_zero"] = all(
        mat_is_zero(resid.block(n)) for n in range(resid.zmin, resid.zmax + 1))
    return report


def _exp_classes(t: TargetModel, logs: Dict[int, CohClass],
                 zmin: int, zmax: int) -> Dict[int, CohClass]:
    """exp of commuting multiplication blocks, componentwise (no scalar head split:
    callers must ensure the (z^0, degree-0) part is exp-able)."""
    out: Dict[int, CohClass] = {}
    for comp in t.components:
        cid = comp.cid
        head = SCALAR_ZERO
        rest: Dict[int, CohClass] = {}
        for n, cls in logs.items():
            on_i = cls.restrict(cid)
            if on_i.is_zero:
                continue
            if n == 0:
                c0 = on_i.coeff(cid, 0)
                head = head + c0
                on_i = on_i - CohClass(t, {(cid, 0): c0})
            if not on_i.is_zero:
                rest[n] = rest.get(n, t.zero_class()) + on_i
        scalar_factor = head.exp()
        acc = {0: t.unit(cid)}
        term = {0: t.unit(cid)}
        j = 0
        while term:
            j += 1
            term = _zpoly_mul(t, term, rest, zmin, zmax)
            term = {n: c.scale(Frac(1, j)) for n, c in term.items() if not c.is_zero}
            for n, c in term.items():
                acc[n] = acc.get(n, t.zero_class()) + c
            if j > 4 * (t.dim + zmax - zmin + 2):
                raise TruncationTooNarrow("exp series failed to terminate")
        for n, c in acc.items():
            c = c.scale(scalar_factor)
            if not c.is_zero:
                out[n] = out.get(n, t.zero_class()) + c
    return out


def is_infinitesimally_symplectic(t: TargetModel, B: Matrix, m: int,
                                  gram: Optional[Matrix] = None) -> bool:
    """B z^m is infinitesimally symplectic iff B* = (-1)^(m+1) B."""
    g = gram if gram is not None else gram_matrix(t)
    badj = mat_mul(mat_inv(g), mat_mul(mat_transpose(B), g))
    sign = sc((-1) ** (m + 1))
    diff = [[x - y * sign for x, y in zip(r1, r2)] for r1, r2 in zip(badj, B)]
    return mat_is_zero(diff)


# -- the Bernoulli-weighted classes and log Delta --------------------------------


def class_Am(t: TargetModel, F: BundleModel, m: int) -> CohClass:
    """A_m restricted to X_i is sum_{0<=l<r_i} ch(F_i^(l)) B_m(l / r_i)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    out = t.zero_class()
    for comp in t.components:
        for l in range(comp.r):
            cls = F.eigen_class(comp.cid, l)
            if cls.is_zero:
                continue
            w = bernoulli_value(m, Frac(l, comp.r))
            if w:
                out = out + cls.scale(sc(w))
    return out


def class_Am_degree(t: TargetModel, F: BundleModel, m: int, h: int) -> CohClass:
    """(A_m)_h: the real-degree-2h part."""
    return class_Am(t, F, m).degree_part(2 * h)


def euler_s_values(kmax: int, include_log: bool = True) -> List[Scalar]:
    """Euler-class specialization: s_0 = ln(lambda), s_k = (-1)^(k-1) (k-1)! / lambda^k.

    With include_log=False the s_0 slot is zero (cone-level work where it
    only contributes scalar factors).
    """
    out = [Scalar.log_lambda() if include_log else SCALAR_ZERO]
    fact = 1
    for k in range(1, kmax + 1):
        if k >= 2:
            fact *= (k - 1)
        out.append(sc(Frac((-1) ** (k - 1) * fact)) * Scalar.lam(-k))
    return out


def log_delta_classes(t: TargetModel, F: BundleModel, s_values: Sequence[Scalar],
                      zmax: int, include_z_inverse: bool = True) -> Dict[int, CohClass]:
    """Multiplier classes of log Delta per z-power.

    z^(m-1) block (m >= 1): sum_k s_k (A_m)_{k+1-m} / m!;
    z^0 additionally gains sum_k s_k ch_k(F^(0)) / 2;
    z^(-1) block: sum_k s_k (A_0)_{k+1}  (included by default).
    """
    s = [sc(x) for x in s_values]
    dim = t.dim
    blocks: Dict[int, CohClass] = {}

    def add(n: int, cls: CohClass):
        if cls.is_zero:
            return
        blocks[n] = blocks.get(n, t.zero_class()) + cls

    fact = 1
    for m in range(1, zmax + 2):
        fact *= m
        n = m - 1
        if n > zmax:
            break
        for h in range(0, dim + 1):
            k = m + h - 1
            if k >= len(s) or s[k].is_zero:
                continue
            part = class_Am_degree(t, F, m, h)
            if not part.is_zero:
                add(n, part.scale(s[k] * sc(Frac(1, fact))))
    inv = F.invariant_part()
    for k, sk in enumerate(s):
        if sk.is_zero:
            continue
        part = inv.degree_part(2 * k)
        if not part.is_zero:
            add(0, part.scale(sk * sc(Frac(1, 2))))
    if include_z_inverse:
        a0 = class_Am(t, F, 0)
        for k, sk in enumerate(s):
            if sk.is_zero:
                continue
            part = a0.degree_part(2 * (k + 1))
            if not part.is_zero:
                add(-1, part.scale(sk))
    return blocks


def log_delta(t: TargetModel, F: BundleModel, s_values: Sequence[Scalar],
              zmax: int, include_z_inverse: bool = True) -> LoopOperator:
    """log Delta as a multiplication-type loop operator.

    For a finite s-list every block above z^(len(s)-1) vanishes, so the
    operator support is completely known (exact) whenever zmax clears that
    bound; Euler-specialized lists are finite truncations, and callers
    compare their blocks coefficientwise.
    """
    classes = log_delta_classes(t, F, s_values, zmax, include_z_inverse)
    kmax = len(list(s_values)) - 1
    exact = zmax >= kmax  # z^(m-1) blocks need s_{m+h-1}, so support stops at z^kmax
    zmin = min(-1, *classes) if classes else -1
    return LoopOperator.from_classes(t, classes, zmin, zmax, exact=exact)


def delta_operator(t: TargetModel, F: BundleModel, s_values: Sequence[Scalar],
                   zmax: int, include_z_inverse: bool = True) -> LoopOperator:
    """Delta = exp(log Delta), computed per component in the commutative
    multiplier ring H^*(X_i)[z, 1/z] with exact scalar exponentials for the
    (z^0, degree-0) part.

    The log is expanded with z-headroom dim(X): products of high blocks with
    nilpotent z^(-1) blocks can step back down at most dim(X) times, so every
    emitted block <= zmax is exact.  Delta itself keeps an unknown upward
    tail (exact=False).
    """
    zmax_work = zmax + t.dim
    logs = log_delta_classes(t, F, s_values, zmax_work, include_z_inverse)
    zmin_out = -max(c.dim for c in t.components) - 1
    exp_classes = _exp_classes(t, logs, zmin_out, zmax_work)
    out_classes = {n: c for n, c in exp_classes.items() if n <= zmax}
    zmin = min([zmin_out] + list(out_classes))
    return LoopOperator.from_classes(t, out_classes, zmin, zmax, exact=False)


def _zpoly_mul(t: TargetModel, a: Dict[int, CohClass], b: Dict[int, CohClass],
               zmin: int, zmax: int) -> Dict[int, CohClass]:
    out: Dict[int, CohClass] = {}
    for na, ca in a.items():
        for nb, cb in b.items():
            n = na + nb
            if not (zmin <= n <= zmax):
                continue
            prod = ca.mul(cb)
            if not prod.is_zero:
                out[n] = out.get(n, t.zero_class()) + prod
    return {n: c for n, c in out.items() if not c.is_zero}


def delta_inverse(t: TargetModel, F: BundleModel, s_values: Sequence[Scalar],
                  zmax: int, include_z_inverse: bool = True) -> LoopOperator:
    neg = [-sc(x) for x in s_values]
    return delta_operator(t, F, neg, zmax, include_z_inverse)


def genus1_prefactor_symbol(t: TargetModel, F: BundleModel) -> str:
    """The descendant-level scalar prefactor, carried as an uninterpreted symbol.

    Its exponent mixes s_0 with the target's genus-1 constants, which have no
    closed form here; nothing ever evaluates it.
    """
    psibar = t.genus1_constants["psibar_110"]
    c1f = t.genus1_constants["c1F_110"]
    return f"exp(-(s_0/2) rank(F={F.name}) {psibar} + s_0 {c1f})"
