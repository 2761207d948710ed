"""The symplectic space of cohomology-valued z-Laurent series at finite truncation.

Elements store a sparse map (z-exponent, Novikov degree) -> CohClass inside an
explicit window.  Below zmin the element is exactly zero; above zmax and past
dmax it is unknown.  The symplectic form is the residue pairing
Omega(f, g) = Res_{z=0} (f(-z), g(z))_orb dz, and raises TruncationTooNarrow
when the windows cannot certify all potentially contributing cross terms.

Darboux coordinates are read off the polarization, never materialized: the
q-part is the z >= 0 slice, and p_k = (-1)^(k+1) * (coefficient of z^(-k-1)).
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .errors import NonUnitTwist, TruncationTooNarrow
from .exactalg import SCALAR_ZERO, Scalar, sc
from .orbtarget import BundleModel, CohClass, TargetModel

Deg = Tuple[int, ...]


class GiventalElement:
    __slots__ = ("target", "zmin", "zmax", "dmax", "data")

    def __init__(self, target: TargetModel, zmin: int, zmax: int, dmax: int,
                 data: Optional[Dict[Tuple[int, Deg], CohClass]] = None):
        if zmin > zmax:
            raise ValueError("zmin > zmax")
        self.target = target
        self.zmin = zmin
        self.zmax = zmax
        self.dmax = dmax
        self.data: Dict[Tuple[int, Deg], CohClass] = {}
        if data:
            for (n, d), cls in data.items():
                self.set(n, d, cls)

    # -- plumbing

    def inside(self, n: int, d: Deg) -> bool:
        return self.zmin <= n <= self.zmax and sum(d) <= self.dmax

    def set(self, n: int, d: Deg, cls: CohClass):
        if not self.inside(n, d):
            raise ValueError(f"(z^{n}, Q^{d}) outside window")
        if cls.is_zero:
            self.data.pop((n, d), None)
        else:
            self.data[(n, d)] = cls

    def add_to(self, n: int, d: Deg, cls: CohClass):
        cur = self.data.get((n, d))
        self.set(n, d, cls if cur is None else cur + cls)

    def get(self, n: int, d: Deg) -> CohClass:
        return self.data.get((n, d), self.target.zero_class())

    @property
    def is_zero(self) -> bool:
        return not self.data

    def copy_window(self, zmin: int, zmax: int, dmax: int) -> "GiventalElement":
        out = GiventalElement(self.target, zmin, zmax, dmax)
        for (n, d), cls in self.data.items():
            if out.inside(n, d):
                out.set(n, d, cls)
        return out

    # -- linear structure

    def __add__(self, o: "GiventalElement") -> "GiventalElement":
        out = GiventalElement(self.target, min(self.zmin, o.zmin),
                              min(self.zmax, o.zmax), min(self.dmax, o.dmax))
        for (n, d), cls in self.data.items():
            if out.inside(n, d):
                out.add_to(n, d, cls)
        for (n, d), cls in o.data.items():
            if out.inside(n, d):
                out.add_to(n, d, cls)
        return out

    def __neg__(self) -> "GiventalElement":
        out = GiventalElement(self.target, self.zmin, self.zmax, self.dmax)
        for (n, d), cls in self.data.items():
            out.set(n, d, -cls)
        return out

    def __sub__(self, o: "GiventalElement") -> "GiventalElement":
        return self + (-o)

    def scale(self, c) -> "GiventalElement":
        c = sc(c)
        out = GiventalElement(self.target, self.zmin, self.zmax, self.dmax)
        for (n, d), cls in self.data.items():
            out.set(n, d, cls.scale(c))
        return out

    def mul_class(self, cls: CohClass) -> "GiventalElement":
        """Multiply by a z-free, Novikov-free class (ordinary componentwise product)."""
        out = GiventalElement(self.target, self.zmin, self.zmax, self.dmax)
        for (n, d), c in self.data.items():
            out.set(n, d, c.mul(cls))
        return out

    def flip_z(self) -> "GiventalElement":
        """f(z) -> f(-z): coefficients keep their exponent, odd ones change sign."""
        out = GiventalElement(self.target, self.zmin, self.zmax, self.dmax)
        for (n, d), cls in self.data.items():
            out.set(n, d, cls if n % 2 == 0 else cls.scale(sc(-1)))
        return out

    def nonequiv_limit(self) -> "GiventalElement":
        out = GiventalElement(self.target, self.zmin, self.zmax, self.dmax)
        for (n, d), cls in self.data.items():
            out.set(n, d, cls.nonequiv_limit())
        return out

    def __eq__(self, o) -> bool:
        if not isinstance(o, GiventalElement):
            return NotImplemented
        return (self - o).is_zero

    def __repr__(self):
        rows = ", ".join(f"z^{n} Q^{list(d)}: {cls!r}" for (n, d), cls in sorted(self.data.items()))
        return f"GiventalElement[{self.zmin}..{self.zmax}, d<={self.dmax}]({rows})"

    # -- polarization views

    def q_part(self, k: int) -> CohClass:
        """Coefficient q_k: the z^k slice at Novikov degree 0, k >= 0."""
        return self.get(k, self._d0())

    def _d0(self) -> Deg:
        return (0,) * _rank(self)

    def p_part(self, k: int) -> CohClass:
        """Darboux p_k = (-1)^(k+1) * coefficient of z^(-k-1) at Novikov degree 0."""
        cls = self.get(-k - 1, self._d0())
        return cls.scale(sc((-1) ** (k + 1)))


def _rank(e: GiventalElement) -> int:
    for (_n, d) in e.data:
        return len(d)
    return e.target.curve_rank


def element_from_class(t: TargetModel, cls: CohClass, zpow: int = 0,
                       zmin: int = -4, zmax: int = 4, dmax: int = 0,
                       rank: Optional[int] = None) -> GiventalElement:
    rank = t.curve_rank if rank is None else rank
    e = GiventalElement(t, zmin, zmax, dmax)
    if not cls.is_zero:
        e.set(zpow, (0,) * rank, cls)
    return e


def symplectic_form(t: TargetModel, f: GiventalElement, g: GiventalElement) -> Scalar:
    """Omega(f, g) = sum_{m+n=-1} (-1)^m (f_m, g_n)_orb, over matching Novikov degrees.

    Cross terms live at pairs (m, -1-m) with m in [f.zmin, -1-g.zmin]; raises
    TruncationTooNarrow unless both windows cover that whole range.
    """
    lo, hi = f.zmin, -1 - g.zmin
    if lo > hi:
        return SCALAR_ZERO
    if hi > f.zmax:
        raise TruncationTooNarrow(
            f"residue needs f up to z^{hi} but window stops at z^{f.zmax}")
    if -1 - lo > g.zmax:
        raise TruncationTooNarrow(
            f"residue needs g up to z^{-1 - lo} but window stops at z^{g.zmax}")
    out = SCALAR_ZERO
    for (m, _d1), cls1 in f.data.items():
        for (n, _d2), cls2 in g.data.items():
            if m + n != -1:
                continue
            val = t.orbifold_pairing(cls1, cls2)
            if not val.is_zero:
                out = out + (val if m % 2 == 0 else -val)
    return out


def dilaton_shift(t: TargetModel, tvec: GiventalElement,
                  bundle: Optional[BundleModel] = None,
                  s_values: Optional[Sequence[Scalar]] = None) -> GiventalElement:
    """q(z) = t(z) - 1z, twisted to q(z) = sqrt(c((q^*F)^inv)) (t(z) - 1z).

    The square root is exp of half the log of the twist, so it exists exactly
    when the constant part exponentiates (s_0 in Q * ln lambda); a twisted
    shift under the Euler specialization introduces lambda^(1/2) factors,
    visible as lam_den == 2 on the scalars of the result.
    """
    rank = _rank(tvec)
    zmax = max(tvec.zmax, 1)
    shifted = GiventalElement(t, tvec.zmin, zmax, tvec.dmax)
    for (n, d), cls in tvec.data.items():
        shifted.add_to(n, d, cls)
    shifted.add_to(1, (0,) * rank, t.unit().scale(sc(-1)))
    if bundle is None or s_values is None:
        return shifted
    try:
        root = bundle.sqrt_twist_class([sc(x) for x in s_values])
    except Exception as e:
        raise NonUnitTwist(f"twist class has no square root: {e}")
    return shifted.mul_class(root)
