import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqrr.errors import (
    IndexOutOfRange,
    InvalidParams,
    InvariantViolation,
    SchemaError,
)
from orbiqrr.exactalg import SCALAR_ONE, Scalar, sc
from orbiqrr.orbtarget import (
    bmu,
    bmu_character,
    dump_target,
    line_bundle_On,
    load_target,
    point,
    projective_space,
    target_to_obj,
    trivial_bundle,
    weighted_projective,
    wps_pullback_line,
)

from helpers import random_bundle, random_class

Frac = Fraction


class TestBuilders:
    def test_point(self):
        t = point()
        assert len(t.components) == 1
        c = t.components[0]
        assert (c.r, c.age) == (1, 0)
        assert t.orbifold_pairing(t.unit(), t.unit()) == SCALAR_ONE

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            bmu(0)
        with pytest.raises(InvalidParams):
            projective_space(0)
        with pytest.raises(InvalidParams):
            weighted_projective([1, -2])

    def test_bmu2_pairing(self):
        t = bmu(2)
        one_tw = t.unit("1")
        assert t.orbifold_pairing(one_tw, one_tw) == sc(Frac(1, 2))
        assert t.orbifold_pairing(t.unit("0"), one_tw).is_zero

    def test_bmu_orders_are_element_orders(self):
        t = bmu(4)
        orders = {c.cid: c.r for c in t.components}
        assert orders == {"0": 1, "1": 4, "2": 2, "3": 4}
        assert t.by_id["1"].involution == "3"
        assert t.by_id["2"].involution == "2"

    def test_p1_pairing(self):
        t = projective_space(1)
        one = t.unit()
        pt = t.basis_class("0", "p")
        assert t.orbifold_pairing(one, pt) == SCALAR_ONE
        assert t.orbifold_pairing(one, one).is_zero

    def test_wps112_sectors(self):
        t = weighted_projective([1, 1, 2])
        assert {c.cid for c in t.components} == {"0", "1/2"}
        tw = t.by_id["1/2"]
        assert tw.age == 1
        assert tw.r == 2
        assert tw.dim == 0
        # stacky integrals: int h^2 = 1/2 untwisted, int 1 = 1/2 on the point sector
        assert t.by_id["0"].pairing[0][2] == Frac(1, 2)
        assert tw.pairing[0][0] == Frac(1, 2)

    def test_age_reciprocity_wps(self):
        t = weighted_projective([1, 2, 3])
        for c in t.components:
            p = t.by_id[c.involution]
            assert c.age + p.age == t.dim - c.dim


class TestBundles:
    def test_bmu3_character_eigendata(self):
        t = bmu(3)
        F = bmu_character(t, 1)
        assert F.eigen_rank("1", 1) == 1          # sector u: eigen index l = 1
        assert F.eigen_rank("1", 0) == 0
        assert F.eigen_chern("1", 1, 0).coeff("1", 0) == SCALAR_ONE
        assert F.age_on("1") == Frac(1, 3)
        assert F.age_on("0") == 0

    def test_eigen_index_bounds(self):
        t = bmu(3)
        F = bmu_character(t, 1)
        with pytest.raises(IndexOutOfRange):
            F.eigen_class("1", 3)

    def test_pulled_back_is_invariant_everywhere(self):
        t = weighted_projective([1, 1, 2])
        F = wps_pullback_line(t, 3)
        for comp in t.components:
            for l in range(1, comp.r):
                assert F.eigen_class(comp.cid, l).is_zero

    def test_o5_chern_character(self):
        t = projective_space(4)
        F = line_bundle_On(t, 5)
        assert F.rank == 1
        # ch_k = 5^k p^k / k!
        assert F.eigen_chern("0", 0, 2).coeff("0", 2) == sc(Frac(25, 2))
        assert F.c1_pairing == (Frac(5),)

    def test_rank_sum_violation(self):
        t = bmu(2)
        from orbiqrr.orbtarget import BundleModel, CohClass
        eigen = {
            ("0", 0): CohClass(t, {("0", 0): sc(2)}),
            ("1", 0): CohClass(t, {("1", 0): sc(1)}),
        }
        with pytest.raises(InvariantViolation, match="rank sum"):
            BundleModel("bad", t, eigen)

    def test_involution_violation(self):
        t = bmu(3)
        from orbiqrr.orbtarget import BundleModel, CohClass
        # char-like data but sector u^2 carries the wrong eigen index
        eigen = {
            ("0", 0): CohClass(t, {("0", 0): sc(1)}),
            ("1", 1): CohClass(t, {("1", 0): sc(1)}),
            ("2", 1): CohClass(t, {("2", 0): sc(1)}),
        }
        with pytest.raises(InvariantViolation, match="eigenbundle involution"):
            BundleModel("bad", t, eigen)


class TestPairings:
    def test_twisted_pairing_reduces_at_s_zero(self):
        rng = random.Random(7)
        for t in (bmu(2), weighted_projective([1, 1, 2])):
            F = random_bundle(t, rng)
            for _ in range(20):
                a, b = random_class(t, rng), random_class(t, rng)
                assert t.twisted_pairing(F, [sc(0)] * 3, a, b) == t.orbifold_pairing(a, b)

    def test_twisted_pairing_euler_point(self):
        t = point()
        F = trivial_bundle(t, 1)
        # Euler twist: c(F) = exp(ln(lambda) * 1) = lambda on a point
        s = [Scalar.log_lambda()]
        val = t.twisted_pairing(F, s, t.unit(), t.unit())
        assert val == Scalar.lam(1)

    def test_twisted_pairing_bmu2_twisted_sector_unchanged(self):
        t = bmu(2)
        F = bmu_character(t, 1)
        s = [Scalar.log_lambda(), Scalar.lam(-1)]
        a = t.unit("1")
        assert t.twisted_pairing(F, s, a, a) == sc(Frac(1, 2))

    def test_involution_isometry(self):
        rng = random.Random(3)
        for t in (bmu(4), weighted_projective([1, 1, 2])):
            for _ in range(20):
                a, b = random_class(t, rng), random_class(t, rng)
                lhs = t.orbifold_pairing(a, b)
                rhs = t.orbifold_pairing(t.involution_transport(b), t.involution_transport(a))
                assert lhs == rhs

    def test_pairing_is_symmetric(self):
        rng = random.Random(11)
        t = bmu(3)
        for _ in range(20):
            a, b = random_class(t, rng), random_class(t, rng)
            assert t.orbifold_pairing(a, b) == t.orbifold_pairing(b, a)

    def test_untwisted_multiplication_is_diagonal(self):
        # multiplication by a class pulled back from the untwisted sector
        # stays block-diagonal over the components
        t = weighted_projective([1, 1, 2])
        h = t.basis_class("0", "h")
        rng = random.Random(5)
        b = random_class(t, rng)
        # restrict h through the stored untwisted restriction, then multiply
        for comp in t.components:
            restr = comp.untwisted_restriction
            h_on = t.zero_class()
            for j in range(len(t.by_id["0"].basis)):
                coeff = h.coeff("0", j)
                if coeff.is_zero:
                    continue
                for k, w in enumerate(restr[j]):
                    if w:
                        h_on = h_on + t.basis_class(comp.cid, comp.basis[k].name).scale(coeff * sc(w))
            prod = h_on.mul(b)
            for (cid, _i) in prod.terms:
                assert cid == comp.cid


_coeffs = st.lists(st.fractions(min_value=-8, max_value=8, max_denominator=6),
                   min_size=4, max_size=4)
_bmu4 = bmu(4)


@settings(max_examples=40, deadline=None)
@given(_coeffs, _coeffs, st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_pairing_bilinearity(avals, bvals, w):
    from orbiqrr.orbtarget import CohClass
    t = _bmu4
    a = CohClass(t, {(str(i), 0): sc(v) for i, v in enumerate(avals) if v})
    b = CohClass(t, {(str(i), 0): sc(v) for i, v in enumerate(bvals) if v})
    c = t.unit("2")
    lhs = t.orbifold_pairing(a.scale(sc(w)) + b, c)
    rhs = t.orbifold_pairing(a, c) * sc(w) + t.orbifold_pairing(b, c)
    assert lhs == rhs
    assert t.orbifold_pairing(a, b) == t.orbifold_pairing(b, a)


class TestConfig:
    def test_round_trip_builtins(self):
        for t, bundles in (
            (point(), [trivial_bundle(point(), 1)]),
            (bmu(3), []),
            (projective_space(2), []),
            (weighted_projective([1, 1, 2]), []),
        ):
            text = dump_target(t, [])
            t2, _ = load_target(text)
            assert t2 == t
            assert dump_target(t2, []) == text

    def test_bundle_round_trip(self):
        t = projective_space(4)
        F = line_bundle_On(t, 5)
        text = dump_target(t, [F])
        t2, bundles = load_target(text)
        assert "O5" in bundles
        assert bundles["O5"].c1_pairing == (Frac(5),)
        assert bundles["O5"].eigen_chern("0", 0, 3).coeff("0", 3) == sc(Frac(125, 6))

    def test_hand_written_point_config(self):
        cfg = {
            "name": "point", "dim": 0, "curve_rank": 1,
            "c1_tangent_pairing": ["0"],
            "components": [{
                "id": "0", "r": 1, "age": "0", "involution": "0",
                "basis": [{"name": "1", "degree": 0}],
                "pairing": [["1"]],
                "mult": [[0, 0, 0, "1"]],
                "untwisted_restriction": [["1"]],
            }],
            "bundles": [],
        }
        t, _ = load_target(json.dumps(cfg))
        assert t == point()

    def test_age_reciprocity_rejected(self):
        obj = target_to_obj(weighted_projective([1, 1, 2]), [])
        for c in obj["components"]:
            if c["id"] == "1/2":
                c["age"] = "1/2"
        with pytest.raises(InvariantViolation, match="age reciprocity"):
            load_target(json.dumps(obj))

    def test_schema_error_paths(self):
        with pytest.raises(SchemaError, match=r"\$"):
            load_target("not json")
        with pytest.raises(SchemaError, match="components"):
            load_target(json.dumps({"name": "x", "dim": 0, "curve_rank": 1}))
        obj = target_to_obj(point(), [])
        obj["components"][0]["basis"][0]["degree"] = 3
        with pytest.raises(SchemaError, match="odd-degree"):
            load_target(json.dumps(obj))

    def test_wps_config_reproduces_builtin(self):
        t = weighted_projective([1, 1, 2])
        t2, _ = load_target(dump_target(t, []))
        assert t2 == t
        assert [c.cid for c in t2.components] == [c.cid for c in t.components]
