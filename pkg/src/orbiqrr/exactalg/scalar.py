"""The scalar ring Q(zeta_N)(lambda^(1/m))[l], l = ln(lambda) a formal symbol.

A Scalar is a polynomial in the formal symbol ``l`` whose coefficients are
reduced fractions of polynomials in an internal variable u = lambda^(1/m).
Plain rationals are the m = 1, l-free, zeta-free special case and round-trip
unchanged.  Fractional lambda powers (from square roots of Euler twists and
from exp(l * (l_i/r_i - 1/2)) factors) are absorbed by lifting m; the root
index is reduced back out during normalization, so a quantity whose final
value is a genuine rational function of lambda reports lam_den == 1.

Canonical form: denominators are monic, num/den coprime, trailing zero
l-coefficients stripped, root index minimal.  Equality is syntactic on the
canonical form (after lifting both sides to a common root index and
cyclotomic order).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from ..errors import ExpObstruction, LogObstruction, NonInvertible, PoleAtZero
from .cyclotomic import CYC_ONE, CYC_ZERO, Cyc

Frac = Fraction

# ---------------------------------------------------------------------------
# dense polynomials over Cyc in the lambda-root variable, lowest degree first


def _cstrip(p: List[Cyc]) -> List[Cyc]:
    while p and p[-1].is_zero:
        p.pop()
    return p


def _cadd(a: Sequence[Cyc], b: Sequence[Cyc]) -> List[Cyc]:
    n = max(len(a), len(b))
    out = [CYC_ZERO] * n
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _cstrip(out)


def _cneg(a: Sequence[Cyc]) -> List[Cyc]:
    return [-c for c in a]


def _cmul(a: Sequence[Cyc], b: Sequence[Cyc]) -> List[Cyc]:
    if not a or not b:
        return []
    out = [CYC_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca.is_zero:
            continue
        for j, cb in enumerate(b):
            if cb.is_zero:
                continue
            out[i + j] = out[i + j] + ca * cb
    return _cstrip(out)


def _cdivmod(a: Sequence[Cyc], b: Sequence[Cyc]) -> Tuple[List[Cyc], List[Cyc]]:
    b = _cstrip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = _cstrip(list(a))
    q = [CYC_ZERO] * max(0, len(r) - len(b) + 1)
    inv_lead = b[-1].inverse()
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        k = len(r) - len(b)
        q[k] = c
        for i, cb in enumerate(b):
            r[k + i] = r[k + i] - c * cb
        _cstrip(r)
        if not r:
            break
    return _cstrip(q), r


def _cgcd(a: Sequence[Cyc], b: Sequence[Cyc]) -> List[Cyc]:
    r0, r1 = _cstrip(list(a)), _cstrip(list(b))
    while r1:
        _, r = _cdivmod(r0, r1)
        r0, r1 = r1, r
    if r0:
        inv_lead = r0[-1].inverse()
        r0 = [c * inv_lead for c in r0]
    return r0


def _cstretch(p: Sequence[Cyc], k: int) -> List[Cyc]:
    """p(u) -> p(u^k)."""
    if k == 1:
        return list(p)
    out = [CYC_ZERO] * (k * (len(p) - 1) + 1) if p else []
    for i, c in enumerate(p):
        out[i * k] = c
    return _cstrip(out)


class RatFunc:
    """Reduced fraction of Cyc-polynomials; denominator monic and coprime to the numerator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[Cyc], den: Sequence[Cyc], _reduced: bool = False):
        if _reduced:
            self.num = tuple(num)
            self.den = tuple(den)
            return
        num = _cstrip(list(num))
        den = _cstrip(list(den))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = (), (CYC_ONE,)
            return
        g = _cgcd(num, den)
        if len(g) > 1:
            num, _ = _cdivmod(num, g)
            den, _ = _cdivmod(den, g)
        inv_lead = den[-1].inverse()
        self.num = tuple(c * inv_lead for c in num)
        self.den = tuple(c * inv_lead for c in den)

    @staticmethod
    def const(c: Cyc) -> "RatFunc":
        if c.is_zero:
            return RF_ZERO
        return RatFunc((c,), (CYC_ONE,), _reduced=True)

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, o: "RatFunc") -> "RatFunc":
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        return RatFunc(
            _cadd(_cmul(self.num, o.den), _cmul(o.num, self.den)),
            _cmul(self.den, o.den),
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(tuple(-c for c in self.num), self.den, _reduced=True)

    def __sub__(self, o: "RatFunc") -> "RatFunc":
        return self + (-o)

    def __mul__(self, o: "RatFunc") -> "RatFunc":
        if self.is_zero or o.is_zero:
            return RF_ZERO
        return RatFunc(_cmul(self.num, o.num), _cmul(self.den, o.den))

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise NonInvertible("division by zero")
        return RatFunc(self.den, self.num)

    def stretch(self, k: int) -> "RatFunc":
        if k == 1:
            return self
        return RatFunc(_cstretch(self.num, k), _cstretch(self.den, k), _reduced=True)

    def eval_at_zero(self) -> Cyc:
        """Value at u = 0; raises PoleAtZero when u divides the denominator."""
        den0 = self.den[0] if self.den else CYC_ZERO
        if den0.is_zero:
            raise PoleAtZero("pole at lambda = 0")
        num0 = self.num[0] if self.num else CYC_ZERO
        return num0 * den0.inverse()

    def __eq__(self, o) -> bool:
        if not isinstance(o, RatFunc):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))


RF_ZERO = RatFunc((), (CYC_ONE,), _reduced=True)
RF_ONE = RatFunc((CYC_ONE,), (CYC_ONE,), _reduced=True)


class Scalar:
    """Element of Q(zeta)(lambda^(1/lam_den))[l]."""

    __slots__ = ("lam_den", "ell")

    def __init__(self, ell: Sequence[RatFunc], lam_den: int = 1, _norm: bool = False):
        if _norm:
            self.ell = tuple(ell)
            self.lam_den = lam_den
            return
        parts = list(ell)
        while parts and parts[-1].is_zero:
            parts.pop()
        # minimize the root index: gcd of all u-exponents present
        if lam_den > 1:
            g = lam_den
            for rf in parts:
                for poly in (rf.num, rf.den):
                    for i, c in enumerate(poly):
                        if i and not c.is_zero:
                            g = gcd(g, i)
                            if g == 1:
                                break
                    if g == 1:
                        break
                if g == 1:
                    break
            if g > 1:
                new = []
                for rf in parts:
                    num = [rf.num[i] for i in range(0, len(rf.num), g)] if rf.num else []
                    den = [rf.den[i] for i in range(0, len(rf.den), g)]
                    new.append(RatFunc(num, den, _reduced=True))
                parts = new
                lam_den //= g
        self.ell = tuple(parts)
        self.lam_den = lam_den

    # -- constructors

    @staticmethod
    def from_fraction(x) -> "Scalar":
        x = Frac(x)
        if x == 0:
            return SCALAR_ZERO
        return Scalar((RatFunc.const(Cyc.from_fraction(x)),), 1, _norm=True)

    @staticmethod
    def from_cyc(c: Cyc) -> "Scalar":
        if c.is_zero:
            return SCALAR_ZERO
        return Scalar((RatFunc.const(c),), 1, _norm=True)

    @staticmethod
    def lam(power=1) -> "Scalar":
        """lambda**power for a rational power."""
        power = Frac(power)
        if power == 0:
            return SCALAR_ONE
        den = power.denominator
        exp = power.numerator  # exponent of u = lambda^(1/den)
        if exp >= 0:
            rf = RatFunc([CYC_ZERO] * exp + [CYC_ONE], (CYC_ONE,), _reduced=True)
        else:
            rf = RatFunc((CYC_ONE,), [CYC_ZERO] * (-exp) + [CYC_ONE], _reduced=True)
        return Scalar((rf,), den)

    @staticmethod
    def log_lambda() -> "Scalar":
        """The formal symbol l = ln(lambda)."""
        return Scalar((RF_ZERO, RF_ONE), 1, _norm=True)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Scalar":
        return Scalar.from_cyc(Cyc.root_of_unity(n, k))

    # -- structure

    @property
    def is_zero(self) -> bool:
        return not self.ell

    @property
    def ell_degree(self) -> int:
        return len(self.ell) - 1

    @property
    def is_invertible(self) -> bool:
        return len(self.ell) == 1

    def is_one(self) -> bool:
        return len(self.ell) == 1 and self.ell[0] == RF_ONE

    def is_rational(self) -> bool:
        if self.is_zero:
            return True
        if len(self.ell) != 1:
            return False
        rf = self.ell[0]
        return (
            self.lam_den == 1
            and len(rf.den) == 1
            and len(rf.num) <= 1
            and all(c.is_rational for c in rf.num)
            and rf.den[0].is_rational
        )

    def as_fraction(self) -> Frac:
        if self.is_zero:
            return Frac(0)
        if not self.is_rational():
            raise ValueError(f"not a plain rational: {self!r}")
        rf = self.ell[0]
        return rf.num[0].as_fraction() / rf.den[0].as_fraction()

    def lift_root(self, m: int) -> "Scalar":
        """Reexpress with root index m (lam_den | m required)."""
        if m == self.lam_den:
            return self
        if m % self.lam_den:
            raise ValueError("root index lift must be a multiple")
        k = m // self.lam_den
        return Scalar(tuple(rf.stretch(k) for rf in self.ell), m, _norm=True)

    @staticmethod
    def _common(a: "Scalar", b: "Scalar") -> Tuple["Scalar", "Scalar"]:
        if a.lam_den == b.lam_den:
            return a, b
        m = a.lam_den * b.lam_den // gcd(a.lam_den, b.lam_den)
        return a.lift_root(m), b.lift_root(m)

    # -- arithmetic

    def __add__(self, o: "Scalar") -> "Scalar":
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        a, b = Scalar._common(self, o)
        n = max(len(a.ell), len(b.ell))
        parts = []
        for i in range(n):
            x = a.ell[i] if i < len(a.ell) else RF_ZERO
            y = b.ell[i] if i < len(b.ell) else RF_ZERO
            parts.append(x + y)
        return Scalar(parts, a.lam_den)

    def __neg__(self) -> "Scalar":
        return Scalar(tuple(-rf for rf in self.ell), self.lam_den, _norm=True)

    def __sub__(self, o: "Scalar") -> "Scalar":
        return self + (-o)

    def __mul__(self, o: "Scalar") -> "Scalar":
        if self.is_zero or o.is_zero:
            return SCALAR_ZERO
        a, b = Scalar._common(self, o)
        parts = [RF_ZERO] * (len(a.ell) + len(b.ell) - 1)
        for i, x in enumerate(a.ell):
            if x.is_zero:
                continue
            for j, y in enumerate(b.ell):
                if y.is_zero:
                    continue
                parts[i + j] = parts[i + j] + x * y
        return Scalar(parts, a.lam_den)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise NonInvertible("division by zero scalar")
        if len(self.ell) != 1:
            raise NonInvertible("scalar with log-lambda terms is not invertible")
        return Scalar((self.ell[0].inverse(),), self.lam_den)

    def __truediv__(self, o: "Scalar") -> "Scalar":
        return self * o.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = SCALAR_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, Fraction)):
            o = Scalar.from_fraction(o)
        if not isinstance(o, Scalar):
            return NotImplemented
        a, b = Scalar._common(self, o)
        return a.ell == b.ell

    def __hash__(self):
        return hash((self.lam_den, self.ell))

    # -- limits and special maps

    def nonequiv_limit(self) -> "Scalar":
        """Substitute lambda = 0 exactly."""
        if self.is_zero:
            return self
        if len(self.ell) > 1:
            raise LogObstruction("ln(lambda) survives at lambda = 0")
        return Scalar.from_cyc(self.ell[0].eval_at_zero())

    def exp(self) -> "Scalar":
        """exp(self), defined for rational multiples of l = ln(lambda): exp(a*l) = lambda^a."""
        if self.is_zero:
            return SCALAR_ONE
        if len(self.ell) > 2:
            raise ExpObstruction("exp only defined for a * ln(lambda)")
        if not self.ell[0].is_zero:
            raise ExpObstruction("exp of a nonzero constant is transcendental")
        coeff = Scalar((self.ell[1],), self.lam_den)
        if not coeff.is_rational():
            raise ExpObstruction("exp needs a rational multiple of ln(lambda)")
        return Scalar.lam(coeff.as_fraction())

    # -- serialization

    def _rf_obj(self, rf: RatFunc):
        def cyc_obj(c: Cyc):
            if c.is_rational:
                return str(c.as_fraction())
            return {"zeta": c.order, "c": [str(x) for x in c.coeffs]}

        return {"num": [cyc_obj(c) for c in rf.num], "den": [cyc_obj(c) for c in rf.den]}

    def to_obj(self):
        """Canonical JSON-ready form; plain rationals collapse to 'p/q' strings."""
        if self.is_rational():
            return str(self.as_fraction())
        if len(self.ell) == 1:
            obj = self._rf_obj(self.ell[0])
            if self.lam_den != 1:
                obj["lam_den"] = self.lam_den
            return obj
        obj = {"ell": [self._rf_obj(rf) for rf in self.ell]}
        if self.lam_den != 1:
            obj["lam_den"] = self.lam_den
        return obj

    def __repr__(self) -> str:
        return f"Scalar({self.to_obj()!r})"


SCALAR_ZERO = Scalar((), 1, _norm=True)
SCALAR_ONE = Scalar((RF_ONE,), 1, _norm=True)


def sc(x) -> Scalar:
    """Coerce ints/Fractions/Scalars to Scalar."""
    if isinstance(x, Scalar):
        return x
    return Scalar.from_fraction(x)


def root_of_unity(n: int, k: int) -> Scalar:
    """zeta_n^k in canonical cyclotomic form."""
    return Scalar.zeta(n, k)


def nonequiv_limit_scalar(a: Scalar) -> Scalar:
    return a.nonequiv_limit()


# -- parsing -----------------------------------------------------------------

def _parse_cyc(obj) -> Cyc:
    if isinstance(obj, str):
        return Cyc.from_fraction(Frac(obj))
    if isinstance(obj, dict) and "zeta" in obj:
        return Cyc(int(obj["zeta"]), [Frac(x) for x in obj["c"]])
    raise ValueError(f"bad cyclotomic literal: {obj!r}")


def _parse_rf(obj) -> RatFunc:
    if isinstance(obj, str):
        if "|" in obj:
            num_s, den_s = obj.split("|", 1)
            num = [Cyc.from_fraction(Frac(t)) for t in num_s.split(",") if t.strip()]
            den = [Cyc.from_fraction(Frac(t)) for t in den_s.split(",") if t.strip()]
            return RatFunc(num, den)
        return RatFunc.const(Cyc.from_fraction(Frac(obj)))
    if isinstance(obj, dict):
        return RatFunc([_parse_cyc(c) for c in obj["num"]], [_parse_cyc(c) for c in obj["den"]])
    raise ValueError(f"bad rational-function literal: {obj!r}")


def parse_scalar(obj) -> Scalar:
    """Parse 'p/q', 'n0,n1,...|d0,d1,...' (lambda polys, lowest first), or the to_obj() form."""
    if isinstance(obj, Scalar):
        return obj
    if isinstance(obj, int):
        return Scalar.from_fraction(obj)
    if isinstance(obj, str):
        return Scalar((_parse_rf(obj),), 1)
    if isinstance(obj, dict):
        if "ell" in obj:
            return Scalar([_parse_rf(rf) for rf in obj["ell"]], int(obj.get("lam_den", 1)))
        return Scalar((_parse_rf(obj),), int(obj.get("lam_den", 1)))
    raise ValueError(f"cannot parse scalar: {obj!r}")
