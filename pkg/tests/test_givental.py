import random
from fractions import Fraction

import pytest

from orbiqrr.errors import TruncationTooNarrow
from orbiqrr.exactalg import SCALAR_ONE, Scalar, sc
from orbiqrr.givental import (
    GiventalElement,
    dilaton_shift,
    element_from_class,
    symplectic_form,
)
from orbiqrr.orbtarget import bmu, bmu_character, point, trivial_bundle

from helpers import random_class

Frac = Fraction


def _elem(t, entries, zmin=-5, zmax=5):
    e = GiventalElement(t, zmin, zmax, 0)
    for zpow, cls in entries:
        e.add_to(zpow, (0,), cls)
    return e


class TestSymplecticForm:
    def test_residue_selects_minus_one(self):
        t = point()
        one = t.unit()
        a = _elem(t, [(0, one)])
        b = _elem(t, [(-1, one)])
        assert symplectic_form(t, a, b) == SCALAR_ONE      # Omega(a, b z^-1) = (a,b)
        assert symplectic_form(t, _elem(t, [(1, one)]), b).is_zero

    def test_z_z_minus_2(self):
        t = point()
        one = t.unit()
        a = _elem(t, [(1, one)])
        b = _elem(t, [(-2, one)])
        assert symplectic_form(t, a, b) == sc(-1)          # (-z)^1 sign

    def test_antisymmetry(self):
        rng = random.Random(2)
        t = bmu(2)
        for _ in range(15):
            f = _elem(t, [(k, random_class(t, rng)) for k in range(-3, 3)])
            g = _elem(t, [(k, random_class(t, rng)) for k in range(-3, 3)])
            assert symplectic_form(t, f, g) == -symplectic_form(t, g, f)

    def test_halves_are_lagrangian(self):
        rng = random.Random(9)
        t = bmu(3)
        for _ in range(50):
            fplus = _elem(t, [(k, random_class(t, rng)) for k in range(0, 4)])
            gplus = _elem(t, [(k, random_class(t, rng)) for k in range(0, 4)])
            assert symplectic_form(t, fplus, gplus).is_zero
            fminus = _elem(t, [(k, random_class(t, rng)) for k in range(-4, 0)])
            gminus = _elem(t, [(k, random_class(t, rng)) for k in range(-4, 0)])
            assert symplectic_form(t, fminus, gminus).is_zero

    def test_truncation_too_narrow(self):
        t = point()
        one = t.unit()
        f = _elem(t, [(-3, one)], zmin=-3, zmax=0)
        g = _elem(t, [(0, one)], zmin=0, zmax=1)   # needs g up to z^2
        with pytest.raises(TruncationTooNarrow):
            symplectic_form(t, f, g)

    def test_twisted_pairing_transport(self):
        # the map a -> a * sqrt(c(F^(0))) carries the twisted form to the plain one
        rng = random.Random(4)
        t = bmu(2)
        F = bmu_character(t, 1)
        s = [sc(0), sc(Frac(1, 2)), sc(Frac(-1, 3))]
        root = F.sqrt_twist_class(s)
        tw = F.twist_class(s)
        for _ in range(10):
            a, b = random_class(t, rng), random_class(t, rng)
            lhs = t.orbifold_pairing(a.mul(tw), b)
            rhs = t.orbifold_pairing(a.mul(root), b.mul(root))
            assert lhs == rhs
        # and at the symplectic-form level: Omega_(c,F)(f, g) = Omega(root f, root g)
        for _ in range(5):
            f = _elem(t, [(k, random_class(t, rng)) for k in range(-2, 3)])
            g = _elem(t, [(k, random_class(t, rng)) for k in range(-2, 3)])
            twisted = symplectic_form(t, f.mul_class(tw), g)
            plain = symplectic_form(t, f.mul_class(root), g.mul_class(root))
            assert twisted == plain


class TestDilatonShift:
    def test_untwisted(self):
        t = point()
        zero = GiventalElement(t, 0, 1, 0)
        q = dilaton_shift(t, zero)
        assert q.get(1, (0,)) == t.unit().scale(sc(-1))
        assert q.get(0, (0,)).is_zero

    def test_twisted_at_s_zero_matches_untwisted(self):
        rng = random.Random(6)
        t = bmu(2)
        F = bmu_character(t, 1)
        tvec = _elem(t, [(0, random_class(t, rng)), (1, random_class(t, rng))], zmin=0, zmax=2)
        assert dilaton_shift(t, tvec, F, [sc(0), sc(0)]) == dilaton_shift(t, tvec)

    def test_twisted_euler_point_sqrt_lambda(self):
        t = point()
        F = trivial_bundle(t, 1)
        tvec = GiventalElement(t, 0, 1, 0)
        q = dilaton_shift(t, tvec, F, [Scalar.log_lambda()])
        c = q.get(1, (0,)).coeff("0", 0)
        # q = sqrt(lambda) * (t - 1z): the z-slot coefficient is -lambda^(1/2)
        assert c == Scalar.lam(Frac(1, 2)) * sc(-1)
        assert c.lam_den == 2

    def test_non_exp_able_twist_rejected(self):
        from orbiqrr.errors import NonUnitTwist
        t = point()
        F = trivial_bundle(t, 1)
        tvec = GiventalElement(t, 0, 1, 0)
        with pytest.raises(NonUnitTwist):
            dilaton_shift(t, tvec, F, [sc(3)])   # exp(3/2) is not representable

    def test_p_q_views(self):
        t = point()
        one = t.unit()
        e = _elem(t, [(2, one), (-1, one), (-2, one.scale(sc(3)))])
        assert e.q_part(2) == one
        assert e.p_part(0) == one.scale(sc(-1))    # (-1)^(0+1) * coeff(z^-1)
        assert e.p_part(1) == one.scale(sc(3))     # (-1)^2 * 3
