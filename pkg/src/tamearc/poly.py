"""Multivariate polynomials, rational functions, and dual numbers over Q.

Exact arithmetic only. Coefficients are fractions.Fraction; the term order is
graded lexicographic with x > y > t; rational functions are kept in a unique
normal form (reduced, denominator integer-primitive with positive leading
coefficient), so equality is structural everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

from .errors import DivisionByZero, NotAUnit

VARS_T = ("t",)
VARS_XY = ("x", "y")

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class MultiPoly:
    """Sparse polynomial over Q in variables ('t',) or ('x', 'y')."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms):
        vars = tuple(vars)
        if vars not in (VARS_T, VARS_XY):
            raise ValueError(f"unsupported variable set {vars!r}")
        clean = {}
        width = len(vars)
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != width or any(e < 0 or not isinstance(e, int) for e in exps):
                raise ValueError(f"bad exponent vector {exps!r} for vars {vars!r}")
            c = _as_fraction(c)
            if c != 0:
                clean[exps] = clean.get(exps, _ZERO) + c
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # construction helpers

    @classmethod
    def zero(cls, vars):
        return cls(vars, {})

    @classmethod
    def const(cls, vars, c):
        c = _as_fraction(c)
        return cls(vars, {} if c == 0 else {(0,) * len(vars): c})

    @classmethod
    def variable(cls, name):
        if name == "t":
            return cls(VARS_T, {(1,): _ONE})
        if name in VARS_XY:
            exps = tuple(1 if v == name else 0 for v in VARS_XY)
            return cls(VARS_XY, {exps: _ONE})
        raise ValueError(f"unknown variable {name!r}")

    # predicates and views

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def const_value(self):
        if not self.terms:
            return _ZERO
        [(exps, c)] = self.terms.items()
        if any(e != 0 for e in exps):
            raise ValueError("not a constant")
        return c

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def deg_in(self, var):
        if not self.terms:
            return -1
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def lead(self):
        """Leading (exponents, coefficient) in graded-lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda exps: (sum(exps), exps))
        return e, self.terms[e]

    def lc(self):
        return self.lead()[1]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def sort_key(self):
        return (self.degree(), tuple(self.sorted_terms()))

    # ring operations

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("mixed variable sets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, _ZERO) + c
        return MultiPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, _ZERO) + c1 * c2
        return MultiPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take non-negative integers")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.vars, frozenset(self.terms.items()))))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.render()})"

    # division and derivatives

    def div_exact(self, divisor):
        """Return self / divisor when the division is exact, else None."""
        self._check(divisor)
        if divisor.is_zero():
            return None
        if self.is_zero():
            return self
        rem = dict(self.terms)
        quot = {}
        de, dc = divisor.lead()
        while rem:
            re = max(rem, key=lambda exps: (sum(exps), exps))
            qe = tuple(a - b for a, b in zip(re, de))
            if any(e < 0 for e in qe):
                return None
            qc = rem[re] / dc
            quot[qe] = quot.get(qe, _ZERO) + qc
            for e2, c2 in divisor.terms.items():
                e = tuple(a + b for a, b in zip(qe, e2))
                c = rem.get(e, _ZERO) - qc * c2
                if c == 0:
                    rem.pop(e, None)
                else:
                    rem[e] = c
        return MultiPoly(self.vars, quot)

    def divides(self, other):
        return other.div_exact(self) is not None

    def derivative(self, var):
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = tuple(k - 1 if j == i else k for j, k in enumerate(e))
            terms[ne] = terms.get(ne, _ZERO) + c * e[i]
        return MultiPoly(self.vars, terms)

    def subst(self, assignments):
        """Substitute variables by polynomials (all over the same target vars)."""
        target = None
        for v in self.vars:
            if v not in assignments:
                raise ValueError(f"substitution missing variable {v!r}")
            if target is None:
                target = assignments[v].vars
            elif assignments[v].vars != target:
                raise ValueError("substitution images have mixed variable sets")
        result = MultiPoly.zero(target)
        pow_cache = {v: {0: MultiPoly.const(target, 1)} for v in self.vars}

        def power(v, n):
            cache = pow_cache[v]
            while n not in cache:
                k = max(cache)
                cache[k + 1] = cache[k] * assignments[v]
            return cache[n]

        for e, c in self.terms.items():
            term = MultiPoly.const(target, c)
            for v, n in zip(self.vars, e):
                if n:
                    term = term * power(v, n)
            result = result + term
        return result

    def eval_all(self, values):
        total = _ZERO
        for e, c in self.terms.items():
            v = c
            for name, n in zip(self.vars, e):
                if n:
                    v *= _as_fraction(values[name]) ** n
            total += v
        return total

    # content and normal forms

    def content(self):
        """Signed rational content: self / content() is integer-primitive with lc > 0."""
        if not self.terms:
            return _ONE
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _int_gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
        cont = Fraction(num_gcd, den_lcm)
        if self.lc() < 0:
            cont = -cont
        return cont

    def primitive(self):
        if not self.terms:
            return self
        return self * (1 / self.content())

    # univariate views

    def dense_in(self, var):
        """Dense coefficient list (lowest first); coefficients are MultiPoly in the rest."""
        i = self.vars.index(var)
        d = self.deg_in(var)
        if d < 0:
            return []
        coeffs = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            rest = tuple(0 if j == i else k for j, k in enumerate(e))
            coeffs[e[i]][rest] = c
        return [MultiPoly(self.vars, t) for t in coeffs]

    @classmethod
    def from_dense(cls, vars, var, coeffs):
        vars = tuple(vars)
        i = vars.index(var)
        terms = {}
        for n, c in enumerate(coeffs):
            if isinstance(c, MultiPoly):
                for e, k in c.terms.items():
                    ne = tuple(n if j == i else ej for j, ej in enumerate(e))
                    if e[i] != 0:
                        raise ValueError("dense coefficient involves the main variable")
                    terms[ne] = terms.get(ne, _ZERO) + k
            else:
                c = _as_fraction(c)
                if c != 0:
                    e = tuple(n if j == i else 0 for j in range(len(vars)))
                    terms[e] = terms.get(e, _ZERO) + c
        return cls(vars, terms)

    def dense_fractions(self, var):
        """Dense Fraction list (lowest first); requires the other variables absent."""
        out = []
        for c in self.dense_in(var):
            out.append(c.const_value())
        return out

    # rendering (canonical, parseable by tamearc.expr)

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)


# dense univariate helpers over Fraction (lowest-degree-first lists)

def utrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def udeg(f):
    return len(f) - 1


def umul(f, g):
    if not f or not g:
        return []
    out = [_ZERO] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] += a * b
    return utrim(out)


def uadd(f, g):
    out = [_ZERO] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] += b
    return utrim(out)


def uscale(f, c):
    if c == 0:
        return []
    return [a * c for a in f]


def usub(f, g):
    return uadd(f, [-b for b in g])


def uderiv(f):
    return utrim([i * f[i] for i in range(1, len(f))])


def udivmod(f, g):
    """Polynomial division over Q; returns (quotient, remainder)."""
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    f = list(f)
    q = [_ZERO] * max(0, len(f) - len(g) + 1)
    glc = g[-1]
    while len(f) >= len(g) and utrim(f):
        shift = len(f) - len(g)
        c = f[-1] / glc
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] -= c * b
        f = utrim(f)
    return utrim(q), f


def _int_primitive(f):
    """Clear denominators and strip integer content; f is a dense Fraction list."""
    den = 1
    for c in f:
        den = den * c.denominator // _int_gcd(den, c.denominator)
    out = [int(c.numerator * (den // c.denominator)) for c in f]
    cont = 0
    for v in out:
        cont = _int_gcd(cont, v)
    return [v // cont for v in out] if cont > 1 else out


def ugcd(f, g):
    """Monic gcd by primitive PRS over the integers; fractions only at the end."""
    f, g = utrim(list(f)), utrim(list(g))
    if not f and not g:
        return []
    if not f or not g:
        h = f or g
        return [c / h[-1] for c in h]
    a, b = _int_primitive(f), _int_primitive(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        dg = len(b) - 1
        blc = b[-1]
        r = list(a)
        while r and len(r) - 1 >= dg:
            shift = len(r) - 1 - dg
            rlc = r[-1]
            r = [c * blc for c in r]
            for i, c in enumerate(b):
                r[shift + i] -= rlc * c
            while r and r[-1] == 0:
                r.pop()
        cont = 0
        for v in r:
            cont = _int_gcd(cont, v)
        if cont > 1:
            r = [v // cont for v in r]
        a, b = b, r
    lc = Fraction(a[-1])
    return [c / lc for c in a]


def uresultant(f, g):
    """Scalar resultant of dense univariate polynomials over Q."""
    f, g = utrim(list(f)), utrim(list(g))
    if not f or not g:
        if not f and not g:
            return _ZERO
        other = f or g
        return _ONE if len(other) == 1 else _ZERO
    acc = _ONE
    while True:
        m, n = udeg(f), udeg(g)
        if n == 0:
            return acc * g[0] ** m
        if m == 0:
            return acc * f[0] ** n
        if m < n:
            if (m * n) % 2:
                acc = -acc
            f, g = g, f
            continue
        r = udivmod(f, g)[1]
        if not r:
            return _ZERO
        k = udeg(r)
        if (m * n) % 2:
            acc = -acc
        acc *= g[-1] ** (m - k)
        f, g = g, r


def _lagrange(points, values):
    """Dense coefficients of the interpolating polynomial through (points, values)."""
    n = len(points)
    coeffs = [_ZERO] * n
    for i in range(n):
        num = [_ONE]
        denom = _ONE
        for j in range(n):
            if j == i:
                continue
            num = umul(num, [-points[j], _ONE])
            denom *= points[i] - points[j]
        scale = values[i] / denom
        for k, c in enumerate(num):
            coeffs[k] += c * scale
    return utrim(coeffs)


# gcd and resultant over MultiPoly

def _gcd_univariate(a, b, var):
    fa = a.dense_fractions(var)
    fb = b.dense_fractions(var)
    g = ugcd(fa, fb)
    return MultiPoly.from_dense(a.vars, var, g).primitive()


def _content_in(p, var):
    """Content of p viewed in Q[other][var]: gcd of the coefficient polynomials."""
    other = next(v for v in p.vars if v != var)
    cont = MultiPoly.zero(p.vars)
    for c in p.dense_in(var):
        cont = poly_gcd(cont, c)
        if cont.is_const() and not cont.is_zero():
            break
    return cont


def _horner(dense, x0):
    acc = _ZERO
    for c in reversed(dense):
        acc = acc * x0 + c
    return acc


def _gcd_by_samples(f, g):
    """Gcd of y-primitive f, g from univariate gcds at sampled x; None on failure.

    At any x0 keeping both leading y-coefficients nonzero the specialized gcd
    contains the specialized true gcd, so its degree can only overshoot.
    Points achieving the minimal seen degree determine the candidate by
    interpolation; the exact divisions at the end reject a wrong guess.
    """
    fc = [c.dense_fractions("x") for c in f.dense_in("y")]
    gc = [c.dense_fractions("x") for c in g.dense_in("y")]
    gamma = ugcd(fc[-1], gc[-1])
    dx = min(f.deg_in("x"), g.deg_in("x")) + len(gamma) - 1
    points, samples = [], []
    best = None
    for k in range(6 * (dx + 3)):
        if len(points) > dx:
            break
        x0 = Fraction(k)
        fu = [_horner(c, x0) for c in fc]
        gu = [_horner(c, x0) for c in gc]
        if fu[-1] == 0 or gu[-1] == 0:
            continue
        h = ugcd(fu, gu)
        if len(h) == 1:
            return MultiPoly.const(f.vars, 1)
        if best is None or len(h) < best:
            best = len(h)
            points, samples = [], []
        if len(h) > best:
            continue
        scale = _horner(gamma, x0)
        points.append(x0)
        samples.append([c * scale for c in h])
    if len(points) <= dx:
        return None
    cand = MultiPoly.zero(f.vars)
    ypow = MultiPoly.const(f.vars, 1)
    yvar = MultiPoly(f.vars, {tuple(1 if v == "y" else 0 for v in f.vars): _ONE})
    for j in range(best):
        vals = [s[j] for s in samples]
        cand = cand + MultiPoly.from_dense(f.vars, "x", _lagrange(points, vals)) * ypow
        ypow = ypow * yvar
    cand = cand.primitive()
    if f.div_exact(cand) is None or g.div_exact(cand) is None:
        return None
    return cand


def _prem(f, g, var):
    """Pseudo-remainder of f by g in the main variable var."""
    df, dg = f.deg_in(var), g.deg_in(var)
    if df < dg:
        return f
    glc = g.dense_in(var)[-1]
    vx = MultiPoly.variable(var) if len(f.vars) == 1 else MultiPoly(
        f.vars, {tuple(1 if v == var else 0 for v in f.vars): _ONE})
    r = f
    while not r.is_zero() and r.deg_in(var) >= dg:
        dr = r.deg_in(var)
        rlc = r.dense_in(var)[-1]
        r = r * glc - g * rlc * vx ** (dr - dg)
    return r


def poly_gcd(a, b):
    """A gcd, primitive with positive leading coefficient; gcd(0, 0) = 0."""
    if a.is_zero() and b.is_zero():
        return MultiPoly.zero(a.vars)
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    a._check(b)
    if len(a.vars) == 1:
        return _gcd_univariate(a, b, a.vars[0])
    da, db = a.deg_in("y"), b.deg_in("y")
    if da == 0 and db == 0:
        return _gcd_univariate(a, b, "x")
    if da == 0:
        return poly_gcd(a, _content_in(b, "y"))
    if db == 0:
        return poly_gcd(_content_in(a, "y"), b)
    ca, cb = _content_in(a, "y"), _content_in(b, "y")
    f = a.div_exact(ca)
    g = b.div_exact(cb)
    cand = _gcd_by_samples(f, g)
    if cand is not None:
        return (cand * poly_gcd(ca, cb)).primitive()
    if f.deg_in("y") < g.deg_in("y"):
        f, g = g, f
    while True:
        r = _prem(f, g, "y")
        if r.is_zero():
            break
        rc = _content_in(r, "y")
        f, g = g, r.div_exact(rc)
        if g.deg_in("y") == 0:
            g = MultiPoly.const(a.vars, 1)
            break
    cont = poly_gcd(ca, cb)
    return (g.primitive() * cont).primitive()


def _sylvester(fc, gc):
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    rows = []
    fr = list(reversed(fc))
    gr = list(reversed(gc))
    for i in range(n):
        rows.append([None] * i + fr + [None] * (size - i - m - 1))
    for i in range(m):
        rows.append([None] * i + gr + [None] * (size - i - n - 1))
    return rows


def _bareiss_det(M, zero, one):
    n = len(M)
    M = [[zero if c is None else c for c in row] for row in M]
    sign = 1
    prev = one
    for k in range(n - 1):
        if M[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if pivot is None:
                return zero
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q = num.div_exact(prev)
                assert q is not None, "Bareiss exact division failed"
                M[i][j] = q
        prev = M[k][k]
    return M[n - 1][n - 1] * sign if sign > 0 else -M[n - 1][n - 1]


def resultant(p, q, var):
    """Sylvester resultant eliminating var; zero iff p, q share a var-positive factor."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    p._check(q)
    dp, dq = p.deg_in(var), q.deg_in(var)
    if dp <= 0 and dq <= 0:
        return MultiPoly.const(p.vars, 1)
    if dp <= 0:
        return p ** dq
    if dq <= 0:
        return q ** dp
    pc = p.dense_in(var)
    qc = q.dense_in(var)
    if all(c.is_const() for c in pc) and all(c.is_const() for c in qc):
        val = uresultant([c.const_value() for c in pc], [c.const_value() for c in qc])
        return MultiPoly.const(p.vars, val)
    other = next(v for v in p.vars if v != var)
    if pc[-1].is_const() and qc[-1].is_const():
        # leading coefficients never vanish, so specialization commutes with Res
        bound = p.degree() * q.degree() + 1
        points = [Fraction(k) for k in range(bound)]
        values = []
        for a in points:
            fa = [c.eval_all({other: a, var: 0}) for c in pc]
            ga = [c.eval_all({other: a, var: 0}) for c in qc]
            values.append(uresultant(fa, ga))
        coeffs = _lagrange(points, values)
        return MultiPoly.from_dense(p.vars, other, coeffs)
    M = _sylvester(pc, qc)
    return _bareiss_det(M, MultiPoly.zero(p.vars), MultiPoly.const(p.vars, 1))


class RatFunc:
    """Reduced fraction of MultiPoly; denominator integer-primitive, lc > 0."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        num._check(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.const(num.vars, 1)
        else:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num = num.div_exact(g)
                den = den.div_exact(g)
            c = den.content()
            num = num * (1 / c)
            den = den * (1 / c)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_const(cls, vars, c):
        return cls(MultiPoly.const(vars, c))

    @classmethod
    def variable(cls, name):
        return cls(MultiPoly.variable(name))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def is_poly(self):
        return self.den.is_const()

    def as_poly(self):
        if not self.den.is_const():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.const_value())

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("rational function powers take integers")
        if n < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    def inverse(self):
        return self ** -1

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.from_const(self.vars, other)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = self._coerce(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.num, self.den)))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self.render()})"

    def derivative(self, var):
        n = self.num.derivative(var) * self.den - self.num * self.den.derivative(var)
        return RatFunc(n, self.den * self.den)

    def subst(self, assignments):
        num = self.num.subst(assignments)
        den = self.den.subst(assignments)
        return RatFunc(num, den)

    def eval_all(self, values):
        d = self.den.eval_all(values)
        if d == 0:
            raise DivisionByZero("evaluation hits a pole")
        return self.num.eval_all(values) / d

    def sort_key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def render(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return self.num.render()
        return f"{_atom(self.num.render())}/{_atom(self.den.render())}"


def _atom(s):
    """Wrap a rendered expression so it can serve as a division operand."""
    if s.isidentifier() and len(s) == 1:
        return s
    if s.isdigit():
        return s
    return f"({s})"


class DualRatFunc:
    """body + eps * eps_part with eps^2 = 0."""

    __slots__ = ("body", "eps", "_hash")

    def __init__(self, body, eps=None):
        if isinstance(body, MultiPoly):
            body = RatFunc(body)
        if eps is None:
            eps = RatFunc.from_const(body.vars, 0)
        if isinstance(eps, MultiPoly):
            eps = RatFunc(eps)
        if body.vars != eps.vars:
            raise ValueError("mixed variable sets")
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("DualRatFunc is immutable")

    @property
    def vars(self):
        return self.body.vars

    def is_unit(self):
        return not self.body.is_zero()

    def is_zero(self):
        return self.body.is_zero() and self.eps.is_zero()

    def specialize(self):
        """The eps = 0 image."""
        return self.body

    def __add__(self, other):
        other = self._coerce(other)
        return DualRatFunc(self.body + other.body, self.eps + other.eps)

    __radd__ = __add__

    def __neg__(self):
        return DualRatFunc(-self.body, -self.eps)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return DualRatFunc(self.body * other.body,
                           self.body * other.eps + self.eps * other.body)

    __rmul__ = __mul__

    def invert(self):
        if self.body.is_zero():
            raise NotAUnit("dual number with zero body has no inverse")
        inv = self.body.inverse()
        return DualRatFunc(inv, -self.eps * inv * inv)

    def __truediv__(self, other):
        return self * self._coerce(other).invert()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("dual powers take integers")
        if n < 0:
            return self.invert() ** (-n)
        result = DualRatFunc(RatFunc.from_const(self.vars, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, DualRatFunc):
            return other
        if isinstance(other, (RatFunc, MultiPoly, int, Fraction)):
            if not isinstance(other, RatFunc):
                other = RatFunc.from_const(self.vars, other) if isinstance(other, (int, Fraction)) else RatFunc(other)
            return DualRatFunc(other)
        raise TypeError(f"cannot combine DualRatFunc with {type(other).__name__}")

    def __eq__(self, other):
        return (isinstance(other, DualRatFunc)
                and self.body == other.body and self.eps == other.eps)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.body, self.eps)))
        return self._hash

    def __repr__(self):
        return f"DualRatFunc({self.render()})"

    def render(self):
        if self.eps.is_zero():
            return self.body.render()
        e = self.eps
        negative = e.num.lc() < 0
        mag = -e if negative else e
        if mag == RatFunc.from_const(self.vars, 1):
            eps_s = "eps"
        else:
            eps_s = f"eps*{_atom(mag.render())}"
        if self.body.is_zero():
            return f"-{eps_s}" if negative else eps_s
        return f"{self.body.render()} {'-' if negative else '+'} {eps_s}"


def dual_invert(u):
    """Inverse in Q(X)[eps]: body^-1 - eps * eps_part * body^-2."""
    return u.invert()
