"""Certificates and batch identity checkers."""

import random
from fractions import Fraction

import pytest

from tamearc.errors import InputError
from tamearc.gersten import (
    Certificate,
    HigherCycleRep,
    complex_check_q2,
    cycle_check,
    tame_boundary_certify,
    weil_check_p1,
)
from tamearc.geometry import A2, PrimeDivisor, ResidueFunc
from tamearc.ksymbols import MilnorSymbol, tame
from tamearc.poly import MultiPoly, RatFunc, VARS_T, VARS_XY

from test_geometry import V_X, V_Y, t, x, y
from test_ksymbols import ONE_T, ONE_XY, rand_linear_rational


def coprime_pool_pair(rng, max_each=2):
    """Coprime (f, g) built from vertical lines and unit parabolas.

    Every pairwise intersection of distinct pool members is rational, which
    keeps the point cycles exactly computable in all tests.
    """
    pool = []
    for c in rng.sample(range(-6, 7), 4):
        pool.append(MultiPoly.variable("x") - MultiPoly.const(VARS_XY, c))
    shapes = [(b, c) for b in range(-3, 4) for c in range(-3, 4)]
    for b, c in rng.sample(shapes, 4):
        X_ = MultiPoly.variable("x")
        Y_ = MultiPoly.variable("y")
        pool.append(Y_ - X_ ** 2 - b * X_ - MultiPoly.const(VARS_XY, c))
    rng.shuffle(pool)
    seen = []
    def take(k):
        out = RatFunc.from_const(VARS_XY, 1)
        for _ in range(k):
            p = pool.pop()
            seen.append(p)
            out = out * (RatFunc(p) ** rng.choice([1, -1]))
        return out
    f = take(rng.randint(1, max_each))
    g = take(rng.randint(1, max_each))
    return f, g


class TestCertificateType:
    def test_claim_kinds_enforced(self):
        with pytest.raises(InputError):
            Certificate(claim="Nonsense", verdict=True, inputs=(),
                        witness=(), provenance=())

    def test_render_is_stable(self):
        cert = cycle_check(HigherCycleRep(((V_X, ResidueFunc(V_X, y)),)))
        assert cert.render() == cert.render()
        lines = cert.render_lines()
        assert lines[0].startswith("claim:") and lines[1].startswith("verdict:")

    def test_rerun_reproduces_verdict(self):
        c = HigherCycleRep(((V_X, ResidueFunc(V_X, y)), (V_Y, ResidueFunc(V_Y, x ** -1))))
        first = cycle_check(c, seed=3)
        second = cycle_check(c, seed=3)
        assert first == second


class TestCycleCheck:
    def test_pinned_pass(self):
        c = HigherCycleRep(((V_X, ResidueFunc(V_X, y)), (V_Y, ResidueFunc(V_Y, x ** -1))))
        cert = cycle_check(c)
        assert cert.verdict
        assert dict(cert.witness)["total divisor"] == "0"

    def test_pinned_fail(self):
        cert = cycle_check(HigherCycleRep(((V_X, ResidueFunc(V_X, y)),)))
        assert not cert.verdict
        assert dict(cert.witness)["total divisor"] == "[(0, 0)]"

    def test_empty_passes(self):
        assert cycle_check(HigherCycleRep(())).verdict

    def test_additive(self):
        c1 = HigherCycleRep(((V_X, ResidueFunc(V_X, y)), (V_Y, ResidueFunc(V_Y, x ** -1))))
        curve = PrimeDivisor(A2, MultiPoly.variable("y") - MultiPoly.variable("x") ** 2)
        c2 = HigherCycleRep(((curve, ResidueFunc(curve, (y - ONE_XY) / y)),
                             (V_X, ResidueFunc(V_X, y / (y - ONE_XY))),))
        # c2 components: on the parabola div((y-1)/y) = [(1,1)]+[(-1,1)]-2[(0,0)];
        # on V(x): div(y/(y-1)) = [(0,0)] - [(0,1)] -- not a cycle by itself
        both = HigherCycleRep(c1.components + c2.components)
        if cycle_check(c1).verdict and cycle_check(c2).verdict:
            assert cycle_check(both).verdict

    def test_mismatched_component_rejected(self):
        with pytest.raises(InputError):
            HigherCycleRep(((V_X, ResidueFunc(V_Y, x)),))


class TestTameBoundaryCertify:
    def test_definitional_round_trip(self):
        image = tame(MilnorSymbol.of(x, y), A2)
        c = HigherCycleRep(tuple(image.terms))
        assert tame_boundary_certify(c, MilnorSymbol.of(x, y)).verdict

    def test_componentwise_mismatch_fails(self):
        c = HigherCycleRep(((V_X, ResidueFunc(V_X, y)), (V_Y, ResidueFunc(V_Y, x ** -1))))
        cert = tame_boundary_certify(c, MilnorSymbol.of(x, y))
        assert not cert.verdict

    def test_axis_cycle_bounded_by_coordinate_symbol(self):
        # the {y, x} symbol exhibits {(V(x), y), (V(y), 1/x)} as a boundary
        c = HigherCycleRep(((V_X, ResidueFunc(V_X, y)), (V_Y, ResidueFunc(V_Y, x ** -1))))
        assert tame_boundary_certify(c, MilnorSymbol.of(y, x)).verdict

    def test_empty_zero(self):
        assert tame_boundary_certify(HigherCycleRep(()), MilnorSymbol(())).verdict

    def test_round_trip_randomized(self):
        rng = random.Random(51)
        done = 0
        while done < 10:
            f, g = coprime_pool_pair(rng)
            image = tame(MilnorSymbol.of(f, g), A2)
            c = HigherCycleRep(tuple(image.terms))
            assert tame_boundary_certify(c, MilnorSymbol.of(f, g)).verdict
            done += 1


class TestComplexSquareZero:
    def test_pinned(self):
        assert complex_check_q2(x, y).verdict
        assert complex_check_q2(x - y, x + y).verdict
        five = RatFunc.from_const(VARS_XY, 5)
        seven = RatFunc.from_const(VARS_XY, 7)
        assert complex_check_q2(five, seven).verdict

    def test_randomized_30(self):
        rng = random.Random(52)
        for trial in range(30):
            f, g = coprime_pool_pair(rng)
            cert = complex_check_q2(f, g, seed=trial)
            assert cert.verdict, (f.render(), g.render(), trial)


class TestWeilReciprocity:
    def test_pinned(self):
        two = RatFunc.from_const(VARS_T, 2)
        assert weil_check_p1(t, t - two).verdict
        assert weil_check_p1(t, ONE_T - t).verdict
        assert weil_check_p1(t, t).verdict

    def test_component_values_worked_instance(self):
        cert = weil_check_p1(t, t - RatFunc.from_const(VARS_T, 2))
        norms = dict(cert.witness)["component norms"]
        assert norms == "0 -> -1/2; 2 -> 2; INF -> -1"

    def test_randomized_30(self):
        rng = random.Random(53)
        for _ in range(30):
            f = rand_linear_rational(rng)
            g = rand_linear_rational(rng)
            assert weil_check_p1(f, g).verdict, (f.render(), g.render())

    def test_quadratic_point_norms(self):
        # zeros at irrational points exercise the residue-field norms
        f = t ** 2 - RatFunc.from_const(VARS_T, 2)
        g = t ** 2 - RatFunc.from_const(VARS_T, 3)
        assert weil_check_p1(f, g).verdict
