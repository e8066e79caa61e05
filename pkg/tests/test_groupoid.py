"""Structure tests: composition, inversion, orbits, validation."""

import cmath
import math

import pytest

from cartan.builders import build_full_relation, coboundary_cocycle
from cartan.groupoid import (
    Arrow,
    CompositionError,
    FiniteTwistedGroupoid,
    PartialBijection,
    UnitSpace,
    UnknownPointError,
    validate,
)


def discrete(points):
    us = UnitSpace(tuple(points))
    return FiniteTwistedGroupoid(us, frozenset(Arrow(p, p) for p in points))


def blocks(*groups):
    points = tuple(p for group in groups for p in group)
    arrows = frozenset(Arrow(r, s) for group in groups for r in group for s in group)
    return FiniteTwistedGroupoid(UnitSpace(points), arrows)


class TestCompose:
    def test_transitivity(self):
        g = build_full_relation(3)
        assert g.compose(Arrow("1", "2"), Arrow("2", "3")) == Arrow("1", "3")

    def test_unit_is_identity(self):
        g = build_full_relation(2)
        a = Arrow("1", "2")
        assert g.compose(Arrow("1", "1"), a) == a
        assert g.compose(a, Arrow("2", "2")) == a

    def test_non_composable_pair(self):
        g = build_full_relation(3)
        with pytest.raises(CompositionError):
            g.compose(Arrow("1", "2"), Arrow("3", "1"))

    def test_exhaustive_associativity(self):
        g = build_full_relation(3)
        for a, b in g.composable_pairs():
            ab = g.compose(a, b)
            for c in g.arrows_with_range(b.source):
                assert g.compose(ab, c) == g.compose(a, g.compose(b, c))


class TestInverse:
    def test_swaps_endpoints(self):
        g = build_full_relation(2)
        assert g.inverse(Arrow("1", "2")) == Arrow("2", "1")
        assert g.inverse(Arrow("1", "1")) == Arrow("1", "1")

    def test_involutive(self):
        g = build_full_relation(3)
        for a in g.sorted_arrows:
            assert g.inverse(g.inverse(a)) == a

    def test_composes_to_unit(self):
        g = build_full_relation(3)
        for a in g.sorted_arrows:
            assert g.compose(a, g.inverse(a)) == Arrow(a.range, a.range)


class TestOrbits:
    def test_full_relation(self):
        g = build_full_relation(3)
        assert g.orbit("2") == ("1", "2", "3")

    def test_discrete(self):
        g = discrete(["1", "2", "3"])
        assert g.orbit("2") == ("2",)

    def test_two_blocks_matches_brute_closure(self):
        g = blocks(["1", "2"], ["3"])
        # brute-force transitive closure over the arrows
        def closure(x):
            reached = {x}
            while True:
                step = {
                    q
                    for a in g.arrows
                    for q in (a.range, a.source)
                    if a.range in reached or a.source in reached
                }
                if step <= reached:
                    return reached
                reached |= step

        assert set(g.orbit("3")) == closure("3") == {"3"}
        assert set(g.orbit("1")) == closure("1") == {"1", "2"}

    def test_orbits_partition_unit_space(self):
        g = blocks(["1", "3"], ["2", "4", "5"])
        orbits = g.orbits()
        flat = [p for orbit in orbits for p in orbit]
        assert sorted(flat) == sorted(g.units.points)
        for orbit in orbits:
            for p in orbit:
                assert g.orbit(p) == orbit

    def test_unknown_point(self):
        g = build_full_relation(2)
        with pytest.raises(UnknownPointError):
            g.orbit("9")


class TestValidate:
    def test_full_relation_valid(self):
        assert validate(build_full_relation(3)).ok

    def test_missing_symmetry_pair_is_named(self):
        us = UnitSpace(("1", "2"))
        g = FiniteTwistedGroupoid(
            us, frozenset({Arrow("1", "1"), Arrow("2", "2"), Arrow("1", "2")})
        )
        report = validate(g)
        assert "symmetry" in report.kinds()
        [violation] = [v for v in report.violations if v.kind == "symmetry"]
        assert "(1<-2)" in violation.witnesses

    def test_missing_unit_reported(self):
        us = UnitSpace(("1", "2"))
        g = FiniteTwistedGroupoid(us, frozenset({Arrow("1", "1")}))
        report = validate(g)
        assert "reflexivity" in report.kinds()

    def test_missing_transitive_product(self):
        g = blocks(["1", "2", "3"])
        trimmed = FiniteTwistedGroupoid(g.units, g.arrows - {Arrow("1", "3"), Arrow("3", "1")})
        report = validate(trimmed)
        assert "transitivity" in report.kinds()
        assert "symmetry" not in report.kinds()

    def test_cocycle_modulus_violation(self):
        g0 = build_full_relation(2)
        g = FiniteTwistedGroupoid(
            g0.units, g0.arrows, {(Arrow("1", "2"), Arrow("2", "1")): 2.0}
        )
        report = validate(g)
        assert "cocycle-modulus" in report.kinds()

    def test_cocycle_normalization_violation(self):
        g0 = build_full_relation(2)
        g = FiniteTwistedGroupoid(
            g0.units, g0.arrows, {(Arrow("1", "1"), Arrow("1", "2")): -1.0}
        )
        assert "cocycle-normalization" in validate(g).kinds()

    def test_cocycle_identity_violation(self):
        g0 = build_full_relation(2)
        # a single -1 off the coboundary class breaks the identity
        g = FiniteTwistedGroupoid(
            g0.units, g0.arrows, {(Arrow("1", "2"), Arrow("2", "1")): -1.0}
        )
        assert "cocycle-identity" in validate(g).kinds()

    def test_coboundary_cocycle_valid(self):
        g0 = build_full_relation(4)
        g = FiniteTwistedGroupoid(g0.units, g0.arrows, coboundary_cocycle(g0, seed=3))
        assert validate(g).ok

    def test_cocycle_identity_exhaustive_on_twisted_fixture(self, twisted4):
        g = twisted4.groupoid
        count = 0
        for a, b in g.composable_pairs():
            ab = g.compose(a, b)
            for c in g.arrows_with_range(b.source):
                bc = g.compose(b, c)
                lhs = g.twist(a, b) * g.twist(ab, c)
                rhs = g.twist(b, c) * g.twist(a, bc)
                assert abs(lhs - rhs) <= 1e-12
                count += 1
        assert count == 4**4

    def test_construction_rejects_unknown_endpoint(self):
        with pytest.raises(UnknownPointError):
            FiniteTwistedGroupoid(UnitSpace(("1",)), frozenset({Arrow("1", "2")}))

    def test_construction_rejects_noncomposable_cocycle_key(self):
        g0 = build_full_relation(2)
        with pytest.raises(ValueError):
            FiniteTwistedGroupoid(
                g0.units, g0.arrows, {(Arrow("1", "2"), Arrow("1", "2")): 1.0}
            )


class TestPartialBijection:
    def test_rejects_double_source(self):
        with pytest.raises(ValueError):
            PartialBijection(frozenset({("1", "2"), ("3", "2")}))

    def test_rejects_double_range(self):
        with pytest.raises(ValueError):
            PartialBijection(frozenset({("1", "2"), ("1", "3")}))

    def test_apply_and_inverse(self):
        swap = PartialBijection(frozenset({("1", "2"), ("2", "1")}))
        assert swap.apply("1") == "2"
        assert swap.inverse().apply("2") == "1"
        assert swap.compose(swap).apply("1") == "1"

    def test_compose_restricts_domain(self):
        f = PartialBijection(frozenset({("2", "1")}))
        g = PartialBijection(frozenset({("3", "2")}))
        assert g.compose(f).pairs == frozenset({("3", "1")})
        assert f.compose(g).pairs == frozenset()
