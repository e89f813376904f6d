"""Milnor symbols, the tame symbol, deformation arcs, and their boundaries.

The tame symbol follows Tame({f,g}) = sum_y (-1)^(m n) (f^n / g^m)|_y with
m = nu_y(f), n = nu_y(g); the exponent combination makes every component a
unit along its prime, so restriction is always defined.  Arcs specialize at
eps = 0 to (g|_Y)^(-sign), which is exactly the tame component of the
specialized symbol; the boundary d_eps attaches to each irreducible component
p^m of a divisor the first-order datum (p*f1)/(m*f), the polar coefficient of
f1/f along that component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EpsDatumIrregular,
    InputError,
    NotAUnitAlongY,
    RestrictionUndefined,
    ScopeError,
)
from .factor import DEFAULT_DEGREE_BOUND, factor_plane_curve, factor_univariate
from .geometry import (
    A2,
    P1,
    ClosedPoint,
    ClosedPointCycle,
    PrimeDivisor,
    ResidueFunc,
    Y_inf_valuation,
    _f_inv,
    _f_mul,
    _f_pow,
    div_on_curve,
    p1_residue,
    restrict,
    valuation,
)
from .poly import (
    DualRatFunc,
    MultiPoly,
    RatFunc,
    VARS_T,
    VARS_XY,
    poly_gcd,
    uresultant,
    utrim,
)

_ONE = Fraction(1)


def _variety_of(vars):
    return P1 if vars == VARS_T else A2


@dataclass(frozen=True)
class MilnorSymbol:
    """Z-linear combination of ordered pairs {f, g} of nonzero RatFunc."""

    terms: tuple  # of (f, g, coeff)

    @classmethod
    def of(cls, f, g, coeff=1):
        return cls(((f, g, coeff),))

    def __post_init__(self):
        for f, g, coeff in self.terms:
            if f.is_zero() or g.is_zero():
                raise InputError("symbol entries must be nonzero")
            if f.vars != g.vars:
                raise InputError("symbol entries live on different varieties")

    @property
    def vars(self):
        return self.terms[0][0].vars

    def __add__(self, other):
        return MilnorSymbol(self.terms + other.terms)

    def render(self):
        parts = []
        for f, g, coeff in self.terms:
            body = f"{{{f.render()}, {g.render()}}}"
            if abs(coeff) != 1:
                body = f"{abs(coeff)}*{body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if coeff > 0 else '-'} {body}")
        return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DualMilnorSymbol:
    """Z-linear combination of pairs {u, v} of units of k(X)[eps]."""

    terms: tuple  # of (u, v, coeff)

    @classmethod
    def of(cls, u, v, coeff=1):
        return cls(((u, v, coeff),))

    def __post_init__(self):
        for u, v, coeff in self.terms:
            if u.body.is_zero() or v.body.is_zero():
                raise InputError("dual symbol entries must have nonzero body")
            if u.vars != v.vars:
                raise InputError("dual symbol entries live on different varieties")

    @property
    def vars(self):
        return self.terms[0][0].vars

    def specialize(self):
        """The eps = 0 symbol."""
        return MilnorSymbol(tuple(
            (u.body, v.body, coeff) for u, v, coeff in self.terms))

    def render(self):
        parts = []
        for u, v, coeff in self.terms:
            body = f"{{{u.render()}, {v.render()}}}"
            if abs(coeff) != 1:
                body = f"{abs(coeff)}*{body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if coeff > 0 else '-'} {body}")
        return " ".join(parts) if parts else "0"


class K1Cycle:
    """Finite formal product of K1 classes indexed by codimension-1 points.

    On A2 each component is a ResidueFunc on its curve; on P1 it is a value
    in the residue field of the point (a dense tuple mod u, or a Fraction
    at INF).  Identity components are dropped.
    """

    __slots__ = ("variety", "terms")

    def __init__(self, variety, terms):
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, name, value):
        raise AttributeError("K1Cycle is immutable")

    @classmethod
    def trivial(cls, variety):
        return cls(variety, ())

    @classmethod
    def build(cls, variety, components):
        if variety.kind == "A2":
            acc = {}
            for prime, rf in components:
                acc[prime] = acc[prime] * rf if prime in acc else rf
            terms = [(p, rf) for p, rf in acc.items() if not rf.is_one()]
            terms.sort(key=lambda item: item[0].sort_key())
        else:
            acc = {}
            for point, val in components:
                if point in acc:
                    acc[point] = _p1_value_mul(point, acc[point], val)
                else:
                    acc[point] = _p1_value(point, val)
            terms = [(pt, v) for pt, v in acc.items() if not _p1_value_is_one(v)]
            terms.sort(key=lambda item: item[0].sort_key())
        return cls(variety, terms)

    def __mul__(self, other):
        if self.variety != other.variety:
            raise ValueError("cycles on different varieties")
        return K1Cycle.build(self.variety, list(self.terms) + list(other.terms))

    def power(self, n):
        if n == 0:
            return K1Cycle.trivial(self.variety)
        out = []
        for key, val in self.terms:
            if self.variety.kind == "A2":
                out.append((key, val ** n))
            else:
                out.append((key, _p1_value_pow(key, val, n)))
        return K1Cycle.build(self.variety, out)

    def is_trivial(self):
        return not self.terms

    def same_cycle(self, other):
        if self.variety != other.variety or len(self.terms) != len(other.terms):
            return False
        for (k1, v1), (k2, v2) in zip(self.terms, other.terms):
            if k1 != k2:
                return False
            if self.variety.kind == "A2":
                if not v1.same_class(v2):
                    return False
            elif v1 != v2:
                return False
        return True

    def render(self):
        if not self.terms:
            return "1"
        parts = []
        for key, val in self.terms:
            if self.variety.kind == "A2":
                parts.append(f"({val.rep.render()} at {key.render()})")
            else:
                parts.append(f"({_p1_value_render(val)} at {key.render()})")
        return " * ".join(parts)


def _p1_value(point, val):
    """Normalize a residue-field value at a P1 point."""
    if point.at_infinity:
        return Fraction(val)
    return tuple(utrim(list(val)))


def _p1_value_mul(point, a, b):
    if point.at_infinity:
        return Fraction(a) * Fraction(b)
    u = point.poly.dense_fractions("t")
    return tuple(_f_mul(list(a), list(b), u))


def _p1_value_pow(point, a, n):
    if point.at_infinity:
        return Fraction(a) ** n
    u = point.poly.dense_fractions("t")
    base = list(a)
    if n < 0:
        base = _f_inv(base, u)
        n = -n
    return tuple(_f_pow(base, n, u))


def _p1_value_is_one(v):
    if isinstance(v, Fraction):
        return v == 1
    return list(v) == [_ONE]


def _p1_value_render(v):
    if isinstance(v, Fraction):
        return str(v)
    return MultiPoly.from_dense(VARS_T, "t", list(v)).render()


def p1_component_norm(point, val):
    """Norm of a residue-field value down to Q."""
    if point.at_infinity:
        return Fraction(val)
    u = point.poly.dense_fractions("t")
    return uresultant(u, list(val))


def _prime_orders(f, g, variety, hints, bound):
    """Map prime -> (nu(f), nu(g)) from the four factorizations."""
    orders = {}

    def _absorb(func, slot):
        for part, sign in ((func.num, 1), (func.den, -1)):
            if variety.kind == "P1":
                fac = factor_univariate(part, bound=bound, hints=hints)
            else:
                fac = factor_plane_curve(part, hints=hints)
            for term in fac.factors:
                prime = (PrimeDivisor(P1, term.poly) if variety.kind == "P1"
                         else PrimeDivisor(A2, term.poly, term.certificate))
                m, n = orders.get(prime, (0, 0))
                delta = sign * term.multiplicity
                orders[prime] = (m + delta, n) if slot == 0 else (m, n + delta)

    _absorb(f, 0)
    _absorb(g, 1)
    if variety.kind == "P1":
        m, n = Y_inf_valuation(f), Y_inf_valuation(g)
        if m or n:
            orders[PrimeDivisor.infinity()] = (m, n)
    return orders


def _tame_component(f, g, m, n):
    """(-1)^(mn) f^n / g^m, always a unit along the prime in question."""
    h = (f ** n) / (g ** m)
    if (m * n) % 2:
        h = h * Fraction(-1)
    return h


def tame(s, X=None, hints=None, bound=DEFAULT_DEGREE_BOUND, seed=0):
    """Tame symbol of a Milnor symbol: a K1Cycle over the primes of X."""
    variety = X if X is not None else _variety_of(s.vars)
    components = []
    for f, g, coeff in s.terms:
        orders = _prime_orders(f, g, variety, hints, bound)
        for prime in sorted(orders, key=lambda p: p.sort_key()):
            m, n = orders[prime]
            if m == 0 and n == 0:
                continue
            h = _tame_component(f, g, m, n)
            try:
                if variety.kind == "P1":
                    point = _point_of(prime)
                    val = _p1_value(point, p1_residue(h, prime))
                    if coeff != 1:
                        val = _p1_value_pow(point, val, coeff)
                    components.append((point, val))
                else:
                    rf = restrict(h, prime) ** coeff
                    components.append((prime, rf))
            except NotAUnitAlongY as exc:
                raise RestrictionUndefined(str(exc)) from exc
    return K1Cycle.build(variety, components)


def _point_of(prime):
    if prime.at_infinity:
        return ClosedPoint.p1_infinity()
    return ClosedPoint(P1, prime.poly)


def div_k1(c, seed=0, hints=None):
    """The next Gersten differential: sum of div_on_curve over components."""
    if c.variety.kind != "A2":
        raise ScopeError("div_k1 applies to K1 cycles on the plane")
    total = ClosedPointCycle.zero(A2)
    for prime, rf in c.terms:
        total = total + div_on_curve(rf, seed=seed, hints=hints)
    return total


@dataclass(frozen=True)
class GGArc:
    """First-order deformation arc supported on one curve component.

    curve: the supporting prime divisor; datum: the first-order displacement
    of the defining equation (regular along the curve); unit: g + eps*g1 with
    g a unit along the curve; sign: +1 or -1.
    """

    curve: PrimeDivisor
    datum: RatFunc
    unit: DualRatFunc
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("arc sign must be +1 or -1")
        if self.unit.body.is_zero():
            raise InputError("arc unit must have nonzero body")
        p = self.curve.poly
        if p is None:
            raise ScopeError("arcs at infinity are outside the affine chart")
        if valuation(self.unit.body, self.curve) != 0:
            raise NotAUnitAlongY(
                f"{self.unit.body.render()} is not a unit along V({p.render()})")
        mixed = self.unit.body.num * self.unit.body.den
        if poly_gcd(p, mixed).degree() > 0:
            raise InputError(
                "arc unit shares a curve component with the supporting divisor")
        if not self.datum.is_zero() and valuation(self.datum, self.curve) < 0:
            raise EpsDatumIrregular(
                f"datum {self.datum.render()} has a pole along V({p.render()})")
        if not self.unit.eps.is_zero() and valuation(self.unit.eps, self.curve) < 0:
            raise EpsDatumIrregular(
                f"unit eps part {self.unit.eps.render()} has a pole along "
                f"V({p.render()})")

    def render(self):
        return (f"arc(V({self.curve.poly.render()}), datum {self.datum.render()}, "
                f"unit {self.unit.render()}, sign {self.sign:+d})")


def _component_arcs(this, other, family_sign, hints, bound):
    """Arcs for every irreducible component of div(body of this)."""
    F = this.body
    F1 = this.eps
    variety = _variety_of(F.vars)
    arcs = []
    for part, part_sign in ((F.num, 1), (F.den, -1)):
        if variety.kind == "P1":
            fac = factor_univariate(part, bound=bound, hints=hints)
        else:
            fac = factor_plane_curve(part, hints=hints)
        for term in fac.factors:
            p = term.poly
            m = part_sign * term.multiplicity
            prime = (PrimeDivisor(P1, p) if variety.kind == "P1"
                     else PrimeDivisor(A2, p, term.certificate))
            datum = (RatFunc(p) * F1) / (RatFunc.from_const(F.vars, m) * F)
            if not datum.is_zero() and valuation(datum, prime) < 0:
                raise EpsDatumIrregular(
                    f"eps datum for component V({p.render()}) is irregular: "
                    f"nu({F1.render()}) < {abs(m) - 1} along the component")
            sign = family_sign if m > 0 else -family_sign
            for _ in range(abs(m)):
                arcs.append(GGArc(curve=prime, datum=datum, unit=other, sign=sign))
    return arcs


def d_eps(s, hints=None, bound=DEFAULT_DEGREE_BOUND):
    """Green-Griffiths arcs of a dual symbol, one per component of each body divisor.

    Terms whose two bodies share a curve component contribute nothing.
    """
    arcs = []
    for u, v, coeff in s.terms:
        F, G = u.body, v.body
        if _variety_of(F.vars).kind == "P1":
            if Y_inf_valuation(F) != 0 or Y_inf_valuation(G) != 0:
                raise ScopeError(
                    "d_eps on P1 requires both bodies to be units at INF; "
                    "move the symbol into the finite chart")
        shared = poly_gcd(F.num * F.den, G.num * G.den)
        if shared.degree() > 0:
            continue
        term_arcs = (_component_arcs(u, v, 1, hints, bound)
                     + _component_arcs(v, u, -1, hints, bound))
        if coeff < 0:
            term_arcs = [GGArc(a.curve, a.datum, a.unit, -a.sign) for a in term_arcs]
        arcs.extend(term_arcs * abs(coeff))
    return arcs


def arc_specialize(a):
    """The eps = 0 image of an arc: (g restricted to the curve)^(-sign)."""
    variety = a.curve.variety
    body = a.unit.body
    if variety.kind == "A2":
        rf = restrict(body, a.curve) ** (-a.sign)
        return K1Cycle.build(A2, [(a.curve, rf)])
    point = ClosedPoint(P1, a.curve.poly)
    val = p1_residue(body, a.curve)
    val = _p1_value_pow(point, _p1_value(point, val), -a.sign)
    return K1Cycle.build(P1, [(point, val)])


def specialize_arcs(arcs, variety):
    """Product of the eps = 0 images of a family of arcs."""
    total = K1Cycle.trivial(variety)
    for a in arcs:
        total = total * arc_specialize(a)
    return total


@dataclass(frozen=True)
class DoubleSES:
    """Transcription of the pair of short exact sequences presenting an arc.

    The module is the localization of the coordinate ring at powers of the
    supporting equation, with eps adjoined, modulo the deformed equation; the
    two sequences carry the identity and multiplication by the unit.
    """

    localized_at: MultiPoly
    relation: DualRatFunc
    automorphism: DualRatFunc
    sign: int

    def as_arc(self):
        vars = self.localized_at.vars
        variety = _variety_of(vars)
        prime = (PrimeDivisor(P1, self.localized_at) if variety.kind == "P1"
                 else PrimeDivisor(A2, self.localized_at))
        return GGArc(curve=prime, datum=self.relation.eps,
                     unit=self.automorphism, sign=self.sign)

    def render(self):
        return (f"module: ({self.localized_at.render()})-local [eps] / "
                f"({self.relation.render()}); maps: id, *({self.automorphism.render()}); "
                f"sign {self.sign:+d}")


def arc_as_double_ses(a):
    """The Nenashev-style presentation of an arc as a pair of sequences."""
    return DoubleSES(
        localized_at=a.curve.poly,
        relation=DualRatFunc(RatFunc(a.curve.poly), a.datum),
        automorphism=a.unit,
        sign=a.sign,
    )
