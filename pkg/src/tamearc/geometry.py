"""Varieties P1 and A2, prime divisors, valuations, and 0-cycle arithmetic.

Intersection cycles on plane curves are computed through a sheared resultant:
after a change of coordinates x -> x + lam*y that puts both curves in shape
position, the order of each irreducible factor of Res_y equals the local
intersection multiplicity at the single fiber point, which is recovered
exactly from the fiber gcd.  Every cycle is recomputed under an independent
second projection; disagreement is an error, never a silent answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZero,
    NotAUnitAlongY,
    ProjectionDisagreement,
)
from .factor import (
    DEFAULT_DEGREE_BOUND,
    INTERNAL_DEGREE_BOUND,
    PROVED,
    factor_plane_curve,
    factor_univariate,
)
from .poly import (
    MultiPoly,
    RatFunc,
    VARS_T,
    VARS_XY,
    resultant,
    uadd,
    udeg,
    uderiv,
    udivmod,
    umul,
    uscale,
    usub,
    utrim,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Variety:
    kind: str

    def __post_init__(self):
        if self.kind not in ("P1", "A2"):
            raise ValueError(f"unknown variety kind {self.kind!r}")

    def render(self):
        return self.kind


P1 = Variety("P1")
A2 = Variety("A2")


class PrimeDivisor:
    """Codimension-1 point: V(p) on P1 or A2, or the point at infinity of P1."""

    __slots__ = ("variety", "poly", "certificate", "_hash")

    def __init__(self, variety, poly, certificate=PROVED):
        if variety.kind == "P1":
            if poly is not None:
                if poly.vars != VARS_T or poly.degree() < 1:
                    raise ValueError("P1 prime needs a non-constant polynomial in t")
                poly = poly * (1 / poly.lc())
            certificate = PROVED
        else:
            if poly is None:
                raise ValueError("A2 has no point at infinity in this chart")
            if poly.vars != VARS_XY or poly.degree() < 1:
                raise ValueError("A2 prime needs a non-constant polynomial in x, y")
            poly = poly.primitive()
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "certificate", certificate)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeDivisor is immutable")

    @classmethod
    def infinity(cls):
        return cls(P1, None)

    @property
    def at_infinity(self):
        return self.poly is None

    def degree(self):
        return 1 if self.at_infinity else self.poly.degree()

    def sort_key(self):
        if self.at_infinity:
            return (1, ())
        return (0, self.poly.sort_key())

    def __eq__(self, other):
        return (isinstance(other, PrimeDivisor)
                and self.variety == other.variety and self.poly == other.poly)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.variety.kind, self.poly)))
        return self._hash

    def __repr__(self):
        return f"PrimeDivisor({self.render()})"

    def render(self):
        if self.at_infinity:
            return "INF"
        if self.variety.kind == "P1" and self.poly.degree() == 1:
            a = -self.poly.dense_fractions("t")[0]
            return str(a)
        return f"V({self.poly.render()})"


class ClosedPoint:
    """Codimension-top point: on P1 a closed point, on A2 a maximal ideal (u0, v0)."""

    __slots__ = ("variety", "poly", "u0", "v0", "residue_degree", "_hash")

    def __init__(self, variety, poly=None, u0=None, v0=None):
        if variety.kind == "P1":
            if poly is not None:
                poly = poly * (1 / poly.lc())
                degree = poly.degree()
            else:
                degree = 1
            object.__setattr__(self, "poly", poly)
            object.__setattr__(self, "u0", None)
            object.__setattr__(self, "v0", None)
        else:
            if u0 is None or v0 is None:
                raise ValueError("A2 closed point needs generators (u0, v0)")
            degree = u0.deg_in("x") * v0.deg_in("y")
            object.__setattr__(self, "poly", None)
            object.__setattr__(self, "u0", u0)
            object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "residue_degree", degree)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ClosedPoint is immutable")

    @classmethod
    def p1_infinity(cls):
        return cls(P1, None)

    @classmethod
    def rational(cls, a, b):
        x = MultiPoly.variable("x")
        y = MultiPoly.variable("y")
        return cls(A2, u0=x - MultiPoly.const(VARS_XY, a),
                   v0=y - MultiPoly.const(VARS_XY, b))

    @property
    def at_infinity(self):
        return self.variety.kind == "P1" and self.poly is None

    def is_rational(self):
        if self.variety.kind == "P1":
            return self.at_infinity or self.poly.degree() == 1
        return self.residue_degree == 1

    def rational_values(self):
        """The (a, b) coordinates of a degree-1 point on A2."""
        a = -self.u0.dense_in("x")[0].const_value()
        b = -self.v0.dense_in("y")[0].const_value()
        return a, b

    def sort_key(self):
        if self.variety.kind == "P1":
            if self.at_infinity:
                return (1, ())
            return (0, self.poly.sort_key())
        return (0, self.u0.sort_key(), self.v0.sort_key())

    def __eq__(self, other):
        return (isinstance(other, ClosedPoint)
                and self.variety == other.variety
                and self.poly == other.poly
                and self.u0 == other.u0 and self.v0 == other.v0)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.variety.kind, self.poly, self.u0, self.v0)))
        return self._hash

    def __repr__(self):
        return f"ClosedPoint({self.render()})"

    def render(self):
        if self.variety.kind == "P1":
            if self.at_infinity:
                return "INF"
            if self.poly.degree() == 1:
                return str(-self.poly.dense_fractions("t")[0])
            return f"V({self.poly.render()})"
        if self.residue_degree == 1:
            a, b = self.rational_values()
            return f"({a}, {b})"
        return f"({self.u0.render()}, {self.v0.render()})"


def _merge_terms(pairs):
    acc = {}
    for item, n in pairs:
        if n == 0:
            continue
        acc[item] = acc.get(item, 0) + n
    return tuple(sorted(
        ((item, n) for item, n in acc.items() if n != 0),
        key=lambda kv: kv[0].sort_key()))


def _render_terms(terms):
    if not terms:
        return "0"
    parts = []
    for item, n in terms:
        mag = abs(n)
        body = f"[{item.render()}]" if mag == 1 else f"{mag}*[{item.render()}]"
        if not parts:
            parts.append(body if n > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if n > 0 else '-'} {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class DivisorCycle:
    variety: Variety
    terms: tuple

    @classmethod
    def build(cls, variety, pairs):
        return cls(variety, _merge_terms(pairs))

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return sum(n * y.degree() for y, n in self.terms)

    def __add__(self, other):
        if self.variety != other.variety:
            raise ValueError("cycles on different varieties")
        return DivisorCycle.build(self.variety, list(self.terms) + list(other.terms))

    def __neg__(self):
        return DivisorCycle(self.variety, tuple((y, -n) for y, n in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def render(self):
        return _render_terms(self.terms)


@dataclass(frozen=True)
class ClosedPointCycle:
    variety: Variety
    terms: tuple

    @classmethod
    def build(cls, variety, pairs):
        return cls(variety, _merge_terms(pairs))

    @classmethod
    def zero(cls, variety):
        return cls(variety, ())

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return sum(n * pt.residue_degree for pt, n in self.terms)

    def __add__(self, other):
        if self.variety != other.variety:
            raise ValueError("cycles on different varieties")
        return ClosedPointCycle.build(
            self.variety, list(self.terms) + list(other.terms))

    def __neg__(self):
        return ClosedPointCycle(self.variety, tuple((p, -n) for p, n in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        if k == 0:
            return ClosedPointCycle.zero(self.variety)
        return ClosedPointCycle(self.variety, _merge_terms(
            (p, n * k) for p, n in self.terms))

    def render(self):
        return _render_terms(self.terms)


def cycle_add(c1, c2):
    return c1 + c2


def cycle_is_zero(c):
    return c.is_zero()


@dataclass(frozen=True)
class ResidueFunc:
    """A unit of the function field of a curve V(p) in A2, up to the ideal (p)."""

    curve: PrimeDivisor
    rep: RatFunc

    def __post_init__(self):
        p = self.curve.poly
        if p.divides(self.rep.num) or p.divides(self.rep.den):
            raise NotAUnitAlongY(
                f"{self.rep.render()} is not a unit along V({p.render()})")

    def same_class(self, other):
        if self.curve != other.curve:
            return False
        cross = self.rep.num * other.rep.den - other.rep.num * self.rep.den
        return cross.is_zero() or self.curve.poly.divides(cross)

    def is_one(self):
        diff = self.rep.num - self.rep.den
        return diff.is_zero() or self.curve.poly.divides(diff)

    def __mul__(self, other):
        if self.curve != other.curve:
            raise ValueError("residue functions on different curves")
        return ResidueFunc(self.curve, self.rep * other.rep)

    def inverse(self):
        return ResidueFunc(self.curve, self.rep ** -1)

    def __pow__(self, n):
        return ResidueFunc(self.curve, self.rep ** n)

    def render(self):
        return f"{self.rep.render()} on V({self.curve.poly.render()})"


def valuation(f, Y):
    """Order of vanishing of the rational function f along the prime Y."""
    if f.is_zero():
        raise DivisionByZero("the zero function has no valuation")
    if Y.at_infinity:
        return Y_inf_valuation(f)
    p = Y.poly
    count = 0
    work = f.num
    while True:
        q = work.div_exact(p)
        if q is None:
            break
        work = q
        count += 1
    work = f.den
    while True:
        q = work.div_exact(p)
        if q is None:
            break
        work = q
        count -= 1
    return count


def Y_inf_valuation(f):
    return f.den.degree() - f.num.degree()


def div_codim1(f, X, hints=None, bound=DEFAULT_DEGREE_BOUND):
    """The divisor of zeros and poles of f on X, as a DivisorCycle."""
    if f.is_zero():
        raise DivisionByZero("the zero function has no divisor")
    pairs = []
    if X.kind == "P1":
        for part, sign in ((f.num, 1), (f.den, -1)):
            for term in factor_univariate(part, bound=bound, hints=hints).factors:
                pairs.append((PrimeDivisor(P1, term.poly), sign * term.multiplicity))
        nu = Y_inf_valuation(f)
        if nu:
            pairs.append((PrimeDivisor.infinity(), nu))
    else:
        for part, sign in ((f.num, 1), (f.den, -1)):
            for term in factor_plane_curve(part, hints=hints).factors:
                pairs.append((PrimeDivisor(A2, term.poly, term.certificate),
                              sign * term.multiplicity))
    return DivisorCycle.build(X, pairs)


def restrict(g, Y):
    """The class of g in the function field of the curve Y = V(p) in A2."""
    if Y.variety.kind != "A2":
        raise ValueError("restrict expects a curve in A2")
    nu = valuation(g, Y)
    if nu != 0:
        raise NotAUnitAlongY(
            f"{g.render()} has valuation {nu} along V({Y.poly.render()})")
    return ResidueFunc(Y, g)


def p1_residue(f, Y):
    """Value of f at the P1 point Y: a dense list mod u, or a Fraction at INF."""
    if Y.at_infinity:
        if Y_inf_valuation(f) != 0:
            raise NotAUnitAlongY(f"{f.render()} is not a unit at INF")
        return f.num.lc() / f.den.lc()
    u = Y.poly.dense_fractions("t")
    num = udivmod(f.num.dense_fractions("t"), u)[1]
    den = udivmod(f.den.dense_fractions("t"), u)[1]
    if not num or not den:
        raise NotAUnitAlongY(
            f"{f.render()} is not a unit at V({Y.poly.render()})")
    return _f_mul(num, _f_inv(den, u), u)


# arithmetic in F = Q[theta]/(u), dense lowest-first Fraction lists

def _f_mul(a, b, u):
    return udivmod(umul(a, b), u)[1]


def _f_inv(a, u):
    r0, r1 = list(u), list(a)
    t0, t1 = [], [_ONE]
    while utrim(list(r1)):
        q, r = udivmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, usub(t0, umul(q, t1))
    if udeg(r0) != 0:
        raise DivisionByZero("non-invertible element in the residue field")
    return utrim(uscale(t0, 1 / r0[0]))


def _f_pow(a, n, u):
    result = [_ONE]
    base = list(a)
    while n:
        if n & 1:
            result = _f_mul(result, base, u)
        base = _f_mul(base, base, u)
        n >>= 1
    return result


# polynomials in w over F, as lists of F-elements (lowest first)

def _fw_trim(A):
    while A and not utrim(list(A[-1])):
        A.pop()
    return A


def _fw_divmod(A, B, u):
    A = [list(c) for c in A]
    inv = _f_inv(B[-1], u)
    quot = [[] for _ in range(max(0, len(A) - len(B) + 1))]
    while len(A) >= len(B):
        c = _f_mul(A[-1], inv, u)
        shift = len(A) - len(B)
        quot[shift] = c
        for i, b in enumerate(B):
            A[shift + i] = utrim(usub(A[shift + i], _f_mul(c, b, u)))
        A = _fw_trim(A)
        if not A:
            break
    return _fw_trim(quot), A


def _fw_gcd(A, B, u):
    A = _fw_trim([utrim(list(c)) for c in A])
    B = _fw_trim([utrim(list(c)) for c in B])
    while B:
        A, B = B, _fw_divmod(A, B, u)[1]
    inv = _f_inv(A[-1], u)
    return [_f_mul(c, inv, u) for c in A]


def _fw_deriv(A):
    return _fw_trim([uscale(A[i], Fraction(i)) for i in range(1, len(A))])


def _to_fw(p, u):
    """Reduce a bivariate polynomial to F[w]: coefficients in y, each mod u."""
    out = []
    for c in p.dense_in("y"):
        out.append(udivmod(c.dense_fractions("x"), u)[1])
    return _fw_trim(out)


# canonical presentation of a closed point from residue-field data

def _solve_linear(columns, target):
    """Solve sum c_i * columns[i] = target over Q; None if inconsistent."""
    rows = len(target)
    n = len(columns)
    M = [[columns[j][i] if i < len(columns[j]) else _ZERO for j in range(n)]
         + [target[i] if i < len(target) else _ZERO]
         for i in range(rows)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, rows) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][col] != 0:
                factor = M[i][col]
                M[i] = [a - factor * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if M[i][n] != 0:
            return None
    sol = [_ZERO] * n
    for i, col in enumerate(pivots):
        sol[col] = M[i][n]
    return sol


def _vec(a, k):
    a = list(a)
    return a + [_ZERO] * (k - len(a))


def canonical_point(u, a_val, b_val):
    """Closed point of A2 with x = a_val, y = b_val in F = Q[theta]/(u).

    Returns the unique presentation (u0 monic irreducible in x, v0 monic in y
    with coefficients reduced mod u0), provided Q(a_val, b_val) = F.
    """
    k = udeg(u)
    # minimal polynomial of a_val over Q
    pows = [[_ONE]]
    for _ in range(k):
        pows.append(_f_mul(pows[-1], a_val, u))
    k0 = None
    u0_coeffs = None
    for d in range(1, k + 1):
        sol = _solve_linear([_vec(pows[i], k) for i in range(d)], _vec(pows[d], k))
        if sol is not None:
            k0 = d
            u0_coeffs = sol
            break
    u0 = MultiPoly.from_dense(VARS_XY, "x",
                              [-c for c in u0_coeffs] + [_ONE])
    # minimal polynomial of b_val over Q(a_val), coefficients in the x-basis
    j_max = k // k0
    b_pows = [[_ONE]]
    for _ in range(j_max):
        b_pows.append(_f_mul(b_pows[-1], b_val, u))
    for J in range(1, j_max + 1):
        columns = []
        labels = []
        for j in range(J):
            for i in range(k0):
                columns.append(_vec(_f_mul(b_pows[j], pows[i], u), k))
                labels.append((i, j))
        sol = _solve_linear(columns, _vec(b_pows[J], k))
        if sol is None:
            continue
        terms = {(0, J): _ONE}
        for (i, j), c in zip(labels, sol):
            if c != 0:
                terms[(i, j)] = terms.get((i, j), _ZERO) - c
        v0 = MultiPoly(VARS_XY, terms)
        point = ClosedPoint(A2, u0=u0, v0=v0)
        if point.residue_degree != k:
            raise ProjectionDisagreement(
                "fiber data does not generate the residue field")
        return point
    raise ProjectionDisagreement("no minimal polynomial found for the fiber value")


_SHEAR_BASE = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 7, -7, 11, -11, 13, -13]


def _shear_candidates(seed):
    lams = [Fraction(c) for c in _SHEAR_BASE]
    if seed:
        from random import Random
        Random(seed).shuffle(lams)
    return lams


def _swap_xy(p):
    x = MultiPoly.variable("x")
    y = MultiPoly.variable("y")
    return p.subst({"x": y, "y": x})


def _intersection_points(p, h, seed, swap):
    """Intersection cycle of V(p) and V(h) as {ClosedPoint: multiplicity}."""
    if swap:
        p = _swap_xy(p)
        h = _swap_xy(h)
    x = MultiPoly.variable("x")
    y = MultiPoly.variable("y")
    for lam in _shear_candidates(seed):
        p2 = p.subst({"x": x + lam * y, "y": y})
        h2 = h.subst({"x": x + lam * y, "y": y})
        if p2.deg_in("y") != p.degree() or h2.deg_in("y") != h.degree():
            continue
        R = resultant(p2, h2, "y")
        if R.is_const():
            return {}
        out = {}
        good = True
        for term in factor_univariate(R, bound=INTERNAL_DEGREE_BOUND).factors:
            u = term.poly.dense_fractions("x")
            u = [c / u[-1] for c in u]
            G = _fw_gcd(_to_fw(p2, u), _to_fw(h2, u), u)
            sqf = _fw_divmod(G, _fw_gcd(G, _fw_deriv(G), u), u)[0] if len(G) > 2 else G
            if len(sqf) != 2:
                good = False
                break
            c_val = utrim([-v for v in _f_mul(sqf[0], _f_inv(sqf[1], u), u)])
            a_val = udivmod(uadd(uscale(c_val, lam), [_ZERO, _ONE]), u)[1]
            b_val = c_val
            if swap:
                a_val, b_val = b_val, a_val
            pt = canonical_point(u, a_val, b_val)
            out[pt] = out.get(pt, 0) + term.multiplicity
        if good:
            return out
    raise ProjectionDisagreement(
        f"no shear put V({p.render()}) and V({h.render()}) in shape position")


def intersection_cycle(p, h, seed=0):
    """Certified intersection cycle of the coprime curves V(p), V(h)."""
    first = _intersection_points(p, h, seed, swap=False)
    second = _intersection_points(p, h, seed, swap=True)
    if first != second:
        raise ProjectionDisagreement(
            f"projections disagree for V({p.render()}) . V({h.render()})")
    return first


def div_on_curve(g, seed=0, hints=None, bound=DEFAULT_DEGREE_BOUND):
    """Zeros minus poles of g on its curve, as a certified ClosedPointCycle."""
    if isinstance(g, RatFunc):
        if g.vars != VARS_T:
            raise ValueError("direct div_on_curve input must live on P1")
        return _p1_point_cycle(g, hints, bound)
    p = g.curve.poly
    pairs = []
    for part, sign in ((g.rep.num, 1), (g.rep.den, -1)):
        for term in factor_plane_curve(part, hints=hints).factors:
            pts = intersection_cycle(p, term.poly, seed)
            for pt, mult in pts.items():
                pairs.append((pt, sign * term.multiplicity * mult))
    return ClosedPointCycle.build(A2, pairs)


def _p1_point_cycle(f, hints, bound):
    if f.is_zero():
        raise DivisionByZero("the zero function has no divisor")
    pairs = []
    for part, sign in ((f.num, 1), (f.den, -1)):
        for term in factor_univariate(part, bound=bound, hints=hints).factors:
            pairs.append((ClosedPoint(P1, term.poly), sign * term.multiplicity))
    nu = Y_inf_valuation(f)
    if nu:
        pairs.append((ClosedPoint.p1_infinity(), nu))
    return ClosedPointCycle.build(P1, pairs)
