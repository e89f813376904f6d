"""Milnor symbols, the tame symbol, arcs, and the eps boundary."""

import random
from fractions import Fraction

import pytest

from tamearc.errors import (
    EpsDatumIrregular,
    InputError,
    NotAUnitAlongY,
    ScopeError,
)
from tamearc.geometry import A2, P1, ClosedPoint, PrimeDivisor, ResidueFunc
from tamearc.ksymbols import (
    DualMilnorSymbol,
    GGArc,
    K1Cycle,
    MilnorSymbol,
    arc_as_double_ses,
    arc_specialize,
    d_eps,
    div_k1,
    p1_component_norm,
    specialize_arcs,
    tame,
)
from tamearc.poly import DualRatFunc, RatFunc, VARS_T, VARS_XY

import frozen

from test_poly import T, X, Y
from test_geometry import V_X, V_Y, rand_ratfunc, t, x, y

ONE_T = RatFunc.from_const(VARS_T, 1)
ZERO_T = RatFunc.from_const(VARS_T, 0)
ONE_XY = RatFunc.from_const(VARS_XY, 1)
ZERO_XY = RatFunc.from_const(VARS_XY, 0)


def rand_linear_rational(rng, max_factors=3):
    """Nonzero element of Q(t) with rational zeros and poles."""
    f = RatFunc.from_const(VARS_T, Fraction(rng.choice([1, 2, 3, -1, -2])))
    for _ in range(rng.randint(1, max_factors)):
        a = RatFunc.from_const(VARS_T, rng.randint(-4, 4))
        f = f * ((t - a) ** rng.choice([1, -1]))
    return f


class TestTameP1:
    def test_worked_instance_frozen(self):
        cycle = tame(MilnorSymbol.of(t, t - RatFunc.from_const(VARS_T, 2)))
        got = {}
        for point, val in cycle.terms:
            key = "INF" if point.at_infinity else int(-point.poly.dense_fractions("t")[0])
            got[key] = Fraction(val) if point.at_infinity else val[0]
        assert got == frozen.TAME_T_TMINUS2

    def test_steinberg_trivial(self):
        cycle = tame(MilnorSymbol.of(t, ONE_T - t))
        assert cycle.is_trivial()
        for key, expected in frozen.TAME_STEINBERG_T.items():
            assert expected == 1  # the frozen oracle agrees the components are 1

    def test_constants_trivial(self):
        two = RatFunc.from_const(VARS_T, 2)
        three = RatFunc.from_const(VARS_T, 3)
        assert tame(MilnorSymbol.of(two, three)).is_trivial()

    def test_steinberg_randomized(self):
        rng = random.Random(41)
        done = 0
        while done < 50:
            f = rand_linear_rational(rng)
            if f.is_zero() or (ONE_T - f).is_zero():
                continue
            assert tame(MilnorSymbol.of(f, ONE_T - f)).is_trivial()
            done += 1

    def test_antisymmetry_randomized(self):
        # tame({f,g}) * tame({g,f}) = 1
        rng = random.Random(42)
        for _ in range(30):
            f = rand_linear_rational(rng)
            g = rand_linear_rational(rng)
            c1 = tame(MilnorSymbol.of(f, g))
            c2 = tame(MilnorSymbol.of(g, f))
            assert (c1 * c2).is_trivial()

    def test_bimultiplicative_randomized(self):
        rng = random.Random(43)
        for _ in range(30):
            f1 = rand_linear_rational(rng)
            f2 = rand_linear_rational(rng)
            g = rand_linear_rational(rng)
            lhs = tame(MilnorSymbol.of(f1 * f2, g))
            rhs = tame(MilnorSymbol.of(f1, g)) * tame(MilnorSymbol.of(f2, g))
            assert lhs.same_cycle(rhs) or (lhs * rhs.power(-1)).is_trivial()

    def test_coefficient_is_power(self):
        s2 = MilnorSymbol.of(t, t - RatFunc.from_const(VARS_T, 2), coeff=2)
        s1 = MilnorSymbol.of(t, t - RatFunc.from_const(VARS_T, 2))
        assert tame(s2).same_cycle(tame(s1).power(2))

    def test_norm_product_is_one(self):
        cycle = tame(MilnorSymbol.of(t, t - RatFunc.from_const(VARS_T, 2)))
        product = Fraction(1)
        for point, val in cycle.terms:
            product *= p1_component_norm(point, val)
        assert product == 1


class TestTameA2:
    def test_pinned_xy(self):
        cycle = tame(MilnorSymbol.of(x, y))
        got = {prime.render(): rf for prime, rf in cycle.terms}
        assert set(got) == {"V(x)", "V(y)"}
        assert got["V(x)"].same_class(ResidueFunc(V_X, y ** -1))
        assert got["V(y)"].same_class(ResidueFunc(V_Y, x))

    def test_div_k1_of_tame_is_zero(self):
        cycle = tame(MilnorSymbol.of(x, y))
        assert div_k1(cycle).is_zero()

    def test_div_k1_single_component(self):
        c = K1Cycle.build(A2, [(V_X, ResidueFunc(V_X, y))])
        assert {pt.render(): n for pt, n in div_k1(c).terms} == {"(0, 0)": 1}

    def test_div_k1_rejects_p1(self):
        cycle = tame(MilnorSymbol.of(t, t - RatFunc.from_const(VARS_T, 2)))
        with pytest.raises(ScopeError):
            div_k1(cycle)

    def test_zero_entry_rejected(self):
        with pytest.raises(InputError):
            MilnorSymbol.of(x, ZERO_XY)


class TestK1Cycle:
    def test_identity_components_dropped(self):
        c = K1Cycle.build(A2, [(V_X, ResidueFunc(V_X, y)),
                               (V_X, ResidueFunc(V_X, y ** -1))])
        assert c.is_trivial()

    def test_merge_multiplies(self):
        c = K1Cycle.build(A2, [(V_X, ResidueFunc(V_X, y)),
                               (V_X, ResidueFunc(V_X, y + ONE_XY))])
        assert len(c.terms) == 1
        assert c.terms[0][1].same_class(ResidueFunc(V_X, y * (y + ONE_XY)))

    def test_p1_values_mod_u(self):
        point = ClosedPoint(P1, T * T - 2)
        c = K1Cycle.build(P1, [(point, (Fraction(0), Fraction(1))),
                               (point, (Fraction(0), Fraction(1)))])
        # theta * theta = 2 in Q[t]/(t^2 - 2)
        assert c.terms[0][1] == (Fraction(2),)

    def test_immutable(self):
        c = K1Cycle.trivial(A2)
        with pytest.raises(AttributeError):
            c.terms = ()


class TestDEps:
    def test_pinned_x_eps_y(self):
        s = DualMilnorSymbol.of(DualRatFunc(x, ONE_XY), DualRatFunc(y, ZERO_XY))
        arcs = d_eps(s)
        assert [a.render() for a in arcs] == [
            "arc(V(x), datum 1, unit y, sign +1)",
            "arc(V(y), datum 0, unit x + eps, sign -1)",
        ]

    def test_degenerate_shared_component(self):
        s = DualMilnorSymbol.of(DualRatFunc(x, ONE_XY), DualRatFunc(x, ZERO_XY))
        assert d_eps(s) == []

    def test_pinned_both_deformed(self):
        s = DualMilnorSymbol.of(DualRatFunc(x, ONE_XY), DualRatFunc(y, ONE_XY))
        arcs = d_eps(s)
        assert [a.render() for a in arcs] == [
            "arc(V(x), datum 1, unit y + eps, sign +1)",
            "arc(V(y), datum 1, unit x + eps, sign -1)",
        ]

    def test_per_component_datum(self):
        F = x * (x - ONE_XY)
        s = DualMilnorSymbol.of(DualRatFunc(F, ONE_XY), DualRatFunc(y, ZERO_XY))
        data = {a.curve.poly.render(): a.datum.render() for a in d_eps(s)}
        assert data == {"x": "1/(x - 1)", "x - 1": "1/x", "y": "0"}

    def test_datum_regularity_guard(self):
        s = DualMilnorSymbol.of(DualRatFunc(x * x, ONE_XY), DualRatFunc(y, ZERO_XY))
        with pytest.raises(EpsDatumIrregular):
            d_eps(s)

    def test_repeated_component_copies(self):
        s = DualMilnorSymbol.of(DualRatFunc(x * x, x), DualRatFunc(y, ZERO_XY))
        arcs = d_eps(s)
        on_x = [a for a in arcs if a.curve == V_X]
        assert len(on_x) == 2
        assert all(a.datum == RatFunc.from_const(VARS_XY, Fraction(1, 2))
                   for a in on_x)

    def test_denominator_component_sign(self):
        s = DualMilnorSymbol.of(DualRatFunc(x / y, ONE_XY), DualRatFunc(
            x - y - ONE_XY, ZERO_XY))
        arcs = d_eps(s)
        signs = {a.curve.poly.render(): a.sign for a in arcs
                 if a.unit.body == x - y - ONE_XY}
        assert signs == {"x": 1, "y": -1}

    def test_p1_requires_finite_chart(self):
        s = DualMilnorSymbol.of(
            DualRatFunc(t, ONE_T),
            DualRatFunc(t - RatFunc.from_const(VARS_T, 1), ZERO_T))
        with pytest.raises(ScopeError):
            d_eps(s)

    def test_p1_finite_chart_works(self):
        f = t / (t - RatFunc.from_const(VARS_T, 1))
        g = (t - RatFunc.from_const(VARS_T, 2)) / (t - RatFunc.from_const(VARS_T, 3))
        s = DualMilnorSymbol.of(DualRatFunc(f, ONE_T), DualRatFunc(g, ZERO_T))
        arcs = d_eps(s)
        assert len(arcs) == 4
        cycle = specialize_arcs(arcs, P1)
        assert cycle.same_cycle(tame(s.specialize()))


class TestArcSpecialize:
    def test_inverse_for_positive_sign(self):
        a = GGArc(curve=V_X, datum=ONE_XY, unit=DualRatFunc(y, ZERO_XY), sign=1)
        cycle = arc_specialize(a)
        assert cycle.terms[0][1].same_class(ResidueFunc(V_X, y ** -1))

    def test_direct_for_negative_sign(self):
        a = GGArc(curve=V_Y, datum=ZERO_XY, unit=DualRatFunc(x, ZERO_XY), sign=-1)
        cycle = arc_specialize(a)
        assert cycle.terms[0][1].same_class(ResidueFunc(V_Y, x))

    def test_naturality_randomized(self):
        # sum of arc specializations equals tame of the specialized symbol
        rng = random.Random(44)
        done = 0
        while done < 25:
            exps = [rng.choice([1, -1]) for _ in range(2)]
            F = ((x - RatFunc.from_const(VARS_XY, rng.randint(-3, 3))) ** exps[0]
                 * (y - x ** 2) ** exps[1])
            G = y - RatFunc.from_const(VARS_XY, rng.randint(4, 9))
            F1 = x * y if rng.random() < 0.5 else ONE_XY
            G1 = x if rng.random() < 0.5 else ZERO_XY
            s = DualMilnorSymbol.of(DualRatFunc(F, F1), DualRatFunc(G, G1))
            arcs = d_eps(s)
            assert specialize_arcs(arcs, A2).same_cycle(tame(s.specialize()))
            done += 1


class TestGGArcValidation:
    def test_unit_condition(self):
        with pytest.raises(NotAUnitAlongY):
            GGArc(curve=V_X, datum=ONE_XY, unit=DualRatFunc(x, ZERO_XY), sign=1)

    def test_sign_values(self):
        with pytest.raises(InputError):
            GGArc(curve=V_X, datum=ONE_XY, unit=DualRatFunc(y, ZERO_XY), sign=2)

    def test_datum_pole_rejected(self):
        with pytest.raises(EpsDatumIrregular):
            GGArc(curve=V_X, datum=x ** -1, unit=DualRatFunc(y, ZERO_XY), sign=1)

    def test_unit_eps_pole_rejected(self):
        with pytest.raises(EpsDatumIrregular):
            GGArc(curve=V_X, datum=ONE_XY,
                  unit=DualRatFunc(y, x ** -1), sign=1)

    def test_arc_at_infinity_rejected(self):
        with pytest.raises(ScopeError):
            GGArc(curve=PrimeDivisor.infinity(), datum=RatFunc.from_const(VARS_T, 1),
                  unit=DualRatFunc(RatFunc.from_const(VARS_T, 1),
                                   RatFunc.from_const(VARS_T, 0)), sign=1)


class TestDoubleSES:
    def test_round_trip(self):
        a = GGArc(curve=V_X, datum=ONE_XY, unit=DualRatFunc(y, ZERO_XY), sign=1)
        ses = arc_as_double_ses(a)
        assert ses.localized_at == X
        assert ses.relation.body == x and ses.relation.eps == ONE_XY
        assert ses.automorphism == a.unit
        assert ses.as_arc() == a

    def test_round_trip_negative_sign(self):
        a = GGArc(curve=V_Y, datum=x, unit=DualRatFunc(x + ONE_XY, x), sign=-1)
        assert arc_as_double_ses(a).as_arc() == a
