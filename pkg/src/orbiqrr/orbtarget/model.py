"""Combinatorial model of a smooth DM-stack target.

A target is a finite list of inertia components, each carrying an
automorphism order r_i, an age, an involution partner, a graded cohomology
basis with an explicit (ordinary, per-component) multiplication table, and a
pairing matrix realizing int_{X_i} a wedge I_i^* b against the partner
component.  Bundles are stored through their eigen-decomposition: for each
component i and 0 <= l < r_i the full Chern character of F_i^(l) as a class
on X_i (degree-0 part = rank).

Only even cohomological degrees are supported.  Ordinary products never mix
components; Chen-Ruan products are not modeled beyond multiplication by
untwisted-sector classes, which acts through the stored restriction maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import BasisMismatch, IndexOutOfRange, InvariantViolation
from ..exactalg import SCALAR_ONE, SCALAR_ZERO, Scalar, sc

Frac = Fraction


@dataclass(frozen=True)
class BasisClass:
    name: str
    degree: int                      # real (even) cohomological degree
    curve_pairing: Tuple[Frac, ...] = ()   # <c_1 of this class, generator_j>, degree-2 classes only


@dataclass
class Component:
    cid: str
    r: int
    age: Frac
    involution: str
    basis: List[BasisClass]
    pairing: List[List[Frac]]        # rows: own basis, cols: partner basis
    mult: Dict[Tuple[int, int], Dict[int, Frac]] = field(default_factory=dict)
    untwisted_restriction: Optional[List[List[Frac]]] = None  # untwisted basis -> own basis

    @property
    def dim(self) -> int:
        return max(b.degree for b in self.basis) // 2

    def basis_index(self, name: str) -> int:
        for i, b in enumerate(self.basis):
            if b.name == name:
                return i
        raise BasisMismatch(f"component {self.cid} has no basis class {name!r}")

    def product(self, a: int, b: int) -> Dict[int, Frac]:
        key = (a, b) if (a, b) in self.mult else (b, a)
        if key in self.mult:
            return self.mult[key]
        if a == 0:
            return {b: Frac(1)}
        if b == 0:
            return {a: Frac(1)}
        if self.basis[a].degree + self.basis[b].degree > 2 * self.dim:
            return {}  # forced to vanish above the top degree
        raise BasisMismatch(
            f"component {self.cid}: no product rule for basis entries {a}, {b}")


class TargetModel:
    def __init__(self, name: str, dim: int, curve_rank: int,
                 components: Sequence[Component],
                 c1_tangent_pairing: Tuple[Frac, ...] = (),
                 jfunction_file: Optional[str] = None,
                 validate: bool = True):
        self.name = name
        self.dim = dim
        self.curve_rank = curve_rank
        self.components = list(components)
        self.by_id = {c.cid: c for c in self.components}
        self.c1_tangent_pairing = tuple(c1_tangent_pairing) or (Frac(0),) * curve_rank
        self.jfunction_file = jfunction_file
        # opaque genus-1 constants; carried symbolically and never evaluated
        self.genus1_constants = {
            "psibar_110": f"<psibar>_110[{name}]",
            "c1F_110": f"<c1F>_110[{name}]",
        }
        self.flat_basis: List[Tuple[str, int]] = [
            (c.cid, i) for c in self.components for i in range(len(c.basis))
        ]
        self.flat_index = {key: n for n, key in enumerate(self.flat_basis)}
        if validate:
            self.validate()

    # -- validation ---------------------------------------------------------

    def validate(self):
        ids = [c.cid for c in self.components]
        if len(set(ids)) != len(ids):
            raise InvariantViolation("component ids", "duplicate component id")
        if "0" not in self.by_id:
            raise InvariantViolation("distinguished component", "no component with id '0'")
        c0 = self.by_id["0"]
        if c0.r != 1 or c0.age != 0 or c0.involution != "0":
            raise InvariantViolation("distinguished component",
                                     "component '0' must have r=1, age=0, involution '0'")
        for c in self.components:
            if c.involution not in self.by_id:
                raise InvariantViolation("involution", f"missing partner {c.involution}")
            p = self.by_id[c.involution]
            if p.involution != c.cid:
                raise InvariantViolation("involution involutive",
                                         f"({c.cid}^I)^I != {c.cid}")
            if p.r != c.r:
                raise InvariantViolation("involution order", f"r_{c.cid} != r_{p.cid}")
            if c.age + p.age != self.dim - c.dim:
                raise InvariantViolation(
                    "age reciprocity",
                    f"age({c.cid}) + age({p.cid}) != dim X - dim X_{c.cid}")
            for b in c.basis:
                if b.degree % 2 or b.degree < 0:
                    raise InvariantViolation("even degrees",
                                             f"odd/negative degree class {b.name} on {c.cid}")
            if c.basis[0].degree != 0:
                raise InvariantViolation("unit class",
                                         f"first basis entry of {c.cid} must have degree 0")
            if len(c.pairing) != len(c.basis) or any(len(row) != len(p.basis) for row in c.pairing):
                raise InvariantViolation("pairing dimensions",
                                         f"pairing of {c.cid} has wrong shape")
            if _det([row[:] for row in c.pairing]) == 0:
                raise InvariantViolation("pairing nondegenerate",
                                         f"pairing of {c.cid} is degenerate")
            for a in range(len(c.basis)):
                for b_ in range(len(p.basis)):
                    if c.pairing[a][b_] != p.pairing[b_][a]:
                        raise InvariantViolation("pairing symmetry",
                                                 f"pairing of {c.cid}/{p.cid} not symmetric")

    # -- classes -------------------------------------------------------------

    def zero_class(self) -> "CohClass":
        return CohClass(self, {})

    def unit(self, cid: str = "0") -> "CohClass":
        return CohClass(self, {(cid, 0): SCALAR_ONE})

    def unit_everywhere(self) -> "CohClass":
        return CohClass(self, {(c.cid, 0): SCALAR_ONE for c in self.components})

    def basis_class(self, cid: str, name: str) -> "CohClass":
        comp = self.component(cid)
        return CohClass(self, {(cid, comp.basis_index(name)): SCALAR_ONE})

    def component(self, cid: str) -> Component:
        try:
            return self.by_id[cid]
        except KeyError:
            raise BasisMismatch(f"no component {cid!r} in target {self.name}")

    # -- pairings -------------------------------------------------------------

    def gram(self) -> List[List[Scalar]]:
        """Orbifold Poincare pairing on the flat basis."""
        n = len(self.flat_basis)
        g = [[SCALAR_ZERO] * n for _ in range(n)]
        for a, (cid, ai) in enumerate(self.flat_basis):
            comp = self.by_id[cid]
            partner = comp.involution
            for bi in range(len(self.by_id[partner].basis)):
                b = self.flat_index[(partner, bi)]
                g[a][b] = sc(comp.pairing[ai][bi])
        return g

    def orbifold_pairing(self, a: "CohClass", b: "CohClass") -> Scalar:
        self._check_class(a)
        self._check_class(b)
        out = SCALAR_ZERO
        for (cid, ai), ca in a.terms.items():
            comp = self.by_id[cid]
            partner = comp.involution
            for bi in range(len(self.by_id[partner].basis)):
                cb = b.terms.get((partner, bi))
                if cb is None:
                    continue
                w = comp.pairing[ai][bi]
                if w:
                    out = out + ca * cb * sc(w)
        return out

    def twisted_pairing(self, bundle: "BundleModel", s_values: Sequence[Scalar],
                        a: "CohClass", b: "CohClass") -> Scalar:
        """(a, b)_{(c,F)} with c = exp(sum_k s_k ch_k); reduces to orbifold pairing at s = 0."""
        tw = bundle.twist_class(s_values)
        return self.orbifold_pairing(a.mul(tw), b)

    def involution_transport(self, a: "CohClass") -> "CohClass":
        """I^* a, with the basis-aligned transport (basis entries correspond by index)."""
        self._check_class(a)
        terms = {}
        for (cid, ai), c in a.terms.items():
            partner = self.by_id[cid].involution
            if ai >= len(self.by_id[partner].basis):
                raise BasisMismatch(
                    f"involution transport: basis length mismatch {cid} -> {partner}")
            terms[(partner, ai)] = terms.get((partner, ai), SCALAR_ZERO) + c
        return CohClass(self, terms)

    def _check_class(self, a: "CohClass"):
        if a.target is not self:
            raise BasisMismatch("class belongs to a different target")

    # -- misc ------------------------------------------------------------------

    def orbdeg(self, cid: str, idx: int) -> Frac:
        comp = self.by_id[cid]
        return comp.basis[idx].degree + 2 * comp.age

    def __eq__(self, other) -> bool:
        if not isinstance(other, TargetModel):
            return NotImplemented
        from .config import target_to_obj
        return target_to_obj(self, []) == target_to_obj(other, [])


class CohClass:
    """Sparse class in H^*(IX): map (component id, basis index) -> Scalar."""

    __slots__ = ("target", "terms")

    def __init__(self, target: TargetModel, terms: Dict[Tuple[str, int], Scalar]):
        self.target = target
        self.terms = {k: v for k, v in terms.items() if not sc(v).is_zero}
        for (cid, idx) in self.terms:
            comp = target.by_id.get(cid)
            if comp is None or idx >= len(comp.basis):
                raise BasisMismatch(f"unknown basis slot ({cid}, {idx})")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o: "CohClass") -> "CohClass":
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms.get(k, SCALAR_ZERO) + v
        return CohClass(self.target, terms)

    def __neg__(self) -> "CohClass":
        return CohClass(self.target, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o: "CohClass") -> "CohClass":
        return self + (-o)

    def scale(self, c) -> "CohClass":
        c = sc(c)
        return CohClass(self.target, {k: v * c for k, v in self.terms.items()})

    def mul(self, o: "CohClass") -> "CohClass":
        """Ordinary cup product: componentwise, through the stored tables."""
        out: Dict[Tuple[str, int], Scalar] = {}
        for (cid, ai), ca in self.terms.items():
            comp = self.target.by_id[cid]
            for bi in range(len(comp.basis)):
                cb = o.terms.get((cid, bi))
                if cb is None:
                    continue
                for gi, w in comp.product(ai, bi).items():
                    if w:
                        key = (cid, gi)
                        out[key] = out.get(key, SCALAR_ZERO) + ca * cb * sc(w)
        return CohClass(self.target, out)

    def degree_part(self, degree: int) -> "CohClass":
        """Terms of real cohomological degree `degree` (use 2k for ch_k)."""
        return CohClass(self.target, {
            (cid, idx): v for (cid, idx), v in self.terms.items()
            if self.target.by_id[cid].basis[idx].degree == degree
        })

    def restrict(self, cid: str) -> "CohClass":
        return CohClass(self.target, {k: v for k, v in self.terms.items() if k[0] == cid})

    def coeff(self, cid: str, idx: int) -> Scalar:
        return self.terms.get((cid, idx), SCALAR_ZERO)

    def exp(self) -> "CohClass":
        """exp of the class, componentwise: exp(c0) * sum nil^j / j!.

        The degree-0 part must be exp-able as a Scalar (zero or a rational
        multiple of ln lambda); positive-degree parts are nilpotent.
        """
        out: Dict[Tuple[str, int], Scalar] = {}
        for comp in self.target.components:
            cid = comp.cid
            c0 = self.terms.get((cid, 0), SCALAR_ZERO)
            head = c0.exp()
            nil = CohClass(self.target, {
                (cid, i): v for (cid2, i), v in self.terms.items()
                if cid2 == cid and i != 0
            })
            term = CohClass(self.target, {(cid, 0): SCALAR_ONE})
            acc = term
            fact = 1
            for j in range(1, comp.dim + 1):
                term = term.mul(nil)
                if term.is_zero:
                    break
                fact *= j
                acc = acc + term.scale(Frac(1, fact))
            for k, v in acc.scale(head).terms.items():
                out[k] = out.get(k, SCALAR_ZERO) + v
        return CohClass(self.target, out)

    def nonequiv_limit(self) -> "CohClass":
        return CohClass(self.target, {k: v.nonequiv_limit() for k, v in self.terms.items()})

    def __eq__(self, o) -> bool:
        if not isinstance(o, CohClass):
            return NotImplemented
        return (self - o).is_zero

    def __repr__(self):
        body = ", ".join(
            f"{self.target.by_id[cid].basis[idx].name}@{cid}: {v.to_obj()}"
            for (cid, idx), v in sorted(self.terms.items())
        )
        return f"CohClass({body})"


class BundleModel:
    """Eigen-decomposition data of a bundle on the inertia stack."""

    def __init__(self, name: str, target: TargetModel,
                 eigen: Dict[Tuple[str, int], CohClass],
                 pulled_back: bool = False,
                 c1_pairing: Tuple[Frac, ...] = (),
                 lines: Optional[List[Tuple[Tuple[Frac, ...], CohClass]]] = None,
                 validate: bool = True):
        self.name = name
        self.target = target
        self.eigen = {k: v for k, v in eigen.items() if not v.is_zero}
        self.pulled_back = pulled_back
        self.c1_pairing = tuple(Frac(x) for x in c1_pairing) or (Frac(0),) * target.curve_rank
        self.lines = lines
        if validate:
            self.validate()

    # -- accessors -------------------------------------------------------------

    def eigen_class(self, cid: str, l: int) -> CohClass:
        comp = self.target.component(cid)
        if not (0 <= l < comp.r):
            raise IndexOutOfRange(f"eigenvalue index {l} outside [0, {comp.r}) on {cid}")
        return self.eigen.get((cid, l), self.target.zero_class())

    def eigen_rank(self, cid: str, l: int) -> Frac:
        c0 = self.eigen_class(cid, l).degree_part(0).coeff(cid, 0)
        if c0.is_zero:
            return Frac(0)
        return c0.as_fraction()

    def eigen_chern(self, cid: str, l: int, k: int) -> CohClass:
        """ch_k(F_i^(l)) as a class on component cid."""
        return self.eigen_class(cid, l).degree_part(2 * k)

    @property
    def rank(self) -> Frac:
        comp = self.target.components[0]
        return sum((self.eigen_rank(comp.cid, l) for l in range(comp.r)), Frac(0))

    def invariant_part(self) -> CohClass:
        """ch((q^*F)^inv): the l = 0 Chern characters, summed over components."""
        out = self.target.zero_class()
        for comp in self.target.components:
            out = out + self.eigen_class(comp.cid, 0)
        return out

    def full_chern(self) -> CohClass:
        """ch(q^*F) = sum over all eigenvalue indices."""
        out = self.target.zero_class()
        for (cid, l), c in self.eigen.items():
            out = out + c
        return out

    def age_on(self, cid: str) -> Frac:
        comp = self.target.component(cid)
        return sum((Frac(l, comp.r) * self.eigen_rank(cid, l) for l in range(1, comp.r)), Frac(0))

    def moving_rank(self, cid: str) -> Frac:
        comp = self.target.component(cid)
        return sum((self.eigen_rank(cid, l) for l in range(1, comp.r)), Frac(0))

    def twist_class(self, s_values: Sequence[Scalar]) -> CohClass:
        """c((q^*F)^inv) = exp(sum_k s_k ch_k(F^(0))) as a class on IX."""
        log = self.target.zero_class()
        inv = self.invariant_part()
        for k, s_k in enumerate(s_values):
            s_k = sc(s_k)
            if s_k.is_zero:
                continue
            log = log + inv.degree_part(2 * k).scale(s_k)
        return log.exp()

    def sqrt_twist_class(self, s_values: Sequence[Scalar]) -> CohClass:
        """sqrt(c((q^*F)^inv)) = exp of half the log; may introduce lambda^(1/2)."""
        log = self.target.zero_class()
        inv = self.invariant_part()
        for k, s_k in enumerate(s_values):
            s_k = sc(s_k)
            if s_k.is_zero:
                continue
            log = log + inv.degree_part(2 * k).scale(s_k * sc(Frac(1, 2)))
        return log.exp()

    # -- validation --------------------------------------------------------------

    def validate(self):
        t = self.target
        ranks = {}
        for (cid, l), c in self.eigen.items():
            comp = t.component(cid)
            if not (0 <= l < comp.r):
                raise IndexOutOfRange(f"eigen index {l} outside [0, {comp.r}) on {cid}")
            for (cid2, _i) in c.terms:
                if cid2 != cid:
                    raise InvariantViolation("eigen support",
                                             f"eigen class for {cid} has terms on {cid2}")
        for comp in t.components:
            total = sum((self.eigen_rank(comp.cid, l) for l in range(comp.r)), Frac(0))
            ranks[comp.cid] = total
        if len(set(ranks.values())) > 1:
            raise InvariantViolation("rank sum", f"component ranks disagree: {ranks}")
        if self.pulled_back:
            for (cid, l) in self.eigen:
                if l != 0:
                    raise InvariantViolation(
                        "pulled back eigenvalues",
                        f"pulled-back bundle has nonzero F^({l}) on {cid}")
        for comp in t.components:
            partner = comp.involution
            for l in range(comp.r):
                mine = self.eigen_class(comp.cid, l)
                other_l = 0 if l == 0 else comp.r - l
                theirs = self.eigen_class(partner, other_l)
                if t.involution_transport(theirs) != mine:
                    raise InvariantViolation(
                        "eigenbundle involution",
                        f"I^*F_{partner}^({other_l}) != F_{comp.cid}^({l})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleModel):
            return NotImplemented
        if self.target.by_id.keys() != other.target.by_id.keys():
            return False
        if self.pulled_back != other.pulled_back or self.c1_pairing != other.c1_pairing:
            return False
        keys = set(self.eigen) | set(other.eigen)
        return all(self.eigen_class(*k) == other.eigen_class(*k) for k in keys)


# -- small exact linear algebra over Fractions --------------------------------

def _det(m: List[List[Frac]]) -> Frac:
    n = len(m)
    if n == 0:
        return Frac(1)
    m = [[Frac(x) for x in row] for row in m]
    det = Frac(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Frac(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def orbifold_pairing(t: TargetModel, a: CohClass, b: CohClass) -> Scalar:
    return t.orbifold_pairing(a, b)


def twisted_pairing(t: TargetModel, F: BundleModel, s_values, a: CohClass, b: CohClass) -> Scalar:
    return t.twisted_pairing(F, s_values, a, b)


def eigen_chern(t: TargetModel, F: BundleModel, cid: str, l: int, k: int) -> CohClass:
    return F.eigen_chern(cid, l, k)


def age_of_bundle(t: TargetModel, F: BundleModel, cid: str) -> Frac:
    return F.age_on(cid)
