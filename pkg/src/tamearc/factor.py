"""Factorization over Q with per-factor evidence tags.

Univariate polynomials are factored completely: squarefree decomposition,
rational-root extraction, then a modular lift with exhaustive recombination,
so every univariate factor is tagged "proved".  Bivariate polynomials are
split by content extraction and a power-series lift at a good specialization;
proper divisors found that way are division-checked ("proved"), while
surviving irreducibility claims of y-degree >= 2 are tagged "probabilistic".
Caller-supplied factors are division-checked and tagged "user-asserted".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd as _int_gcd, isqrt
from random import Random

from .errors import DegreeBound, FactorIncomplete, InputError
from .poly import (
    MultiPoly,
    poly_gcd,
    udeg,
    uderiv,
    udivmod,
    ugcd,
    umul,
    uscale,
    usub,
    utrim,
)

PROVED = "proved"
PROBABLE = "probabilistic"
ASSERTED = "user-asserted"

_TAG_STRENGTH = {PROVED: 2, PROBABLE: 1, ASSERTED: 0}

DEFAULT_DEGREE_BOUND = 8
INTERNAL_DEGREE_BOUND = 64

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class FactorTerm:
    poly: MultiPoly
    multiplicity: int
    certificate: str
    evidence: str = ""


@dataclass(frozen=True)
class Factorization:
    unit: Fraction
    factors: tuple

    def pairs(self):
        return [(t.poly, t.multiplicity) for t in self.factors]

    def product(self):
        if not self.factors:
            raise ValueError("empty factorization has no intrinsic variable set")
        acc = MultiPoly.const(self.factors[0].poly.vars, self.unit)
        for t in self.factors:
            acc = acc * t.poly ** t.multiplicity
        return acc

    def verify(self, target):
        if not self.factors:
            return target == MultiPoly.const(target.vars, self.unit)
        return self.product() == target

    def weakest_tag(self):
        if not self.factors:
            return PROVED
        return min((t.certificate for t in self.factors), key=_TAG_STRENGTH.__getitem__)


class FactorHints:
    """Caller-supplied factor lists, keyed by the primitive form of the target."""

    def __init__(self):
        self._table = {}

    def add(self, target, factors):
        self._table[target.primitive()] = tuple(factors)

    def lookup(self, p):
        return self._table.get(p.primitive(), ())

    def __bool__(self):
        return bool(self._table)


def _finish(p, found):
    """Assemble a Factorization for p from (poly, mult, tag, note) entries."""
    merged = {}
    for poly, mult, tag, note in found:
        if poly in merged:
            m, t, n = merged[poly]
            if _TAG_STRENGTH[tag] > _TAG_STRENGTH[t]:
                t, n = tag, note
            merged[poly] = (m + mult, t, n)
        else:
            merged[poly] = (mult, tag, note)
    lc_prod = _ONE
    for poly, (m, _, _) in merged.items():
        lc_prod *= poly.lc() ** m
    unit = p.lc() / lc_prod
    terms = tuple(
        FactorTerm(poly, m, t, n)
        for poly, (m, t, n) in sorted(merged.items(), key=lambda kv: kv[0].sort_key())
    )
    return Factorization(unit, terms)


def _extract_hints(p, hint_factors):
    """Divide verified hint factors out of p; returns (remainder, entries)."""
    entries = []
    work = p
    for h in hint_factors:
        h = h.primitive()
        if h.is_const():
            raise InputError(f"factor hint {h.render()!r} is constant")
        mult = 0
        while True:
            q = work.div_exact(h)
            if q is None:
                break
            work = q
            mult += 1
        if mult == 0:
            raise InputError(
                f"factor hint {h.render()!r} does not divide {p.render()!r}")
        entries.append((h, mult, ASSERTED, "caller-supplied factor"))
    return work, entries


def _hinted(hints, p):
    if isinstance(hints, FactorHints):
        return hints.lookup(p)
    if hints:
        return tuple(hints)
    return ()


# arithmetic in F_q[t], dense lowest-first integer lists

def _zred(f, q):
    return utrim([int(c) % q for c in f])


def _zsub(f, g, q):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += int(a)
    for i, b in enumerate(g):
        out[i] -= int(b)
    return _zred(out, q)


def _zmul(f, g, q):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _zred(out, q)


def _zdivmod(f, g, q):
    f = list(f)
    inv = pow(g[-1], -1, q)
    quot = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = (f[-1] * inv) % q
        shift = len(f) - len(g)
        quot[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % q
        f = utrim(f)
        if not f:
            break
    return utrim(quot), f


def _zgcd(f, g, q):
    f, g = _zred(f, q), _zred(g, q)
    while g:
        f, g = g, _zdivmod(f, g, q)[1]
    if not f:
        return []
    inv = pow(f[-1], -1, q)
    return [(c * inv) % q for c in f]


def _zmonic(f, q):
    inv = pow(f[-1], -1, q)
    return [(c * inv) % q for c in f]


def _zpowmod(base, e, mod, q):
    result = [1]
    base = _zdivmod(base, mod, q)[1]
    while e:
        if e & 1:
            result = _zdivmod(_zmul(result, base, q), mod, q)[1]
        base = _zdivmod(_zmul(base, base, q), mod, q)[1]
        e >>= 1
    return result


def _zderiv(f, q):
    return _zred([i * f[i] for i in range(1, len(f))], q)


def _zbezout(a, b, q):
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        qt, r = _zdivmod(r0, r1, q)
        r0, r1 = r1, r
        s0, s1 = s1, _zsub(s0, _zmul(qt, s1, q), q)
        t0, t1 = t1, _zsub(t0, _zmul(qt, t1, q), q)
    inv = pow(r0[-1], -1, q)
    return _zred(uscale(s0, inv), q), _zred(uscale(t0, inv), q)


def _odd_primes():
    n = 3
    while True:
        if all(n % p for p in range(3, isqrt(n) + 1, 2)):
            yield n
        n += 2


def _ddf(f, q):
    """Distinct-degree split of monic squarefree f; returns [(product, degree)]."""
    out = []
    v = list(f)
    h = [0, 1]
    d = 0
    while udeg(v) >= 1:
        d += 1
        if 2 * d > udeg(v):
            out.append((v, udeg(v)))
            break
        h = _zpowmod(h, q, f, q)
        g = _zgcd(_zsub(h, [0, 1], q), v, q)
        if udeg(g) >= 1:
            out.append((g, d))
            v = _zdivmod(v, g, q)[0]
    return out


def _edf(f, d, q, rng):
    """Equal-degree split: f monic squarefree, every irreducible factor of degree d."""
    n = udeg(f)
    if n == d:
        return [f]
    exponent = (q ** d - 1) // 2
    while True:
        a = _zred([rng.randrange(q) for _ in range(n)], q)
        if udeg(a) < 1:
            continue
        b = _zpowmod(a, exponent, f, q)
        g = _zgcd(_zsub(b, [1], q), f, q)
        if 0 < udeg(g) < n:
            rest = _zdivmod(f, g, q)[0]
            return _edf(g, d, q, rng) + _edf(_zmonic(rest, q), d, q, rng)


def _factor_mod(f, q):
    """Irreducible monic factors of squarefree monic f over F_q, sorted."""
    rng = Random(0x7A3E + q * 131 + udeg(f))
    out = []
    for block, d in _ddf(f, q):
        out.extend(_edf(_zmonic(block, q), d, q, rng))
    return sorted(out)


def _center(c, m):
    c %= m
    return c - m if 2 * c > m else c


def _hensel_pair_int(target, u, v, u0, v0, s, q, big):
    """Lift target ≡ u·v from mod q to mod big = q^K; all three monic."""
    m = q
    while m < big:
        prod = umul(u, v)
        diff = [int(x) - int(y) for x, y in
                zip(target + [0] * len(prod), prod + [0] * len(target))]
        e = _zred([((c % big) // m) for c in diff], q)
        if e:
            b = _zdivmod(_zmul(s, e, q), v0, q)[1]
            num = _zsub(e, _zmul(b, u0, q), q)
            a = _zdivmod(num, v0, q)[0]
            u = utrim([(int(x) + m * int(y)) % big for x, y in
                       zip(u + [0] * len(a), a + [0] * len(u))])
            v = utrim([(int(x) + m * int(y)) % big for x, y in
                       zip(v + [0] * len(b), b + [0] * len(v))])
        m *= q
    return u, v


def _hensel_tree_int(target, pool, q, big):
    """Lift the monic mod-q factor pool of the monic target to mod big."""
    if len(pool) == 1:
        return [utrim([c % big for c in target])]
    half = len(pool) // 2
    left, right = pool[:half], pool[half:]
    u0 = [1]
    for f in left:
        u0 = _zmul(u0, f, q)
    v0 = [1]
    for f in right:
        v0 = _zmul(v0, f, q)
    s, _ = _zbezout(u0, v0, q)
    u, v = _hensel_pair_int(target, list(u0), list(v0), u0, v0, s, q, big)
    return _hensel_tree_int(u, left, q, big) + _hensel_tree_int(v, right, q, big)


def _int_primitive(f):
    """Scale a dense rational list to integer coefficients, content 1, lc > 0."""
    num = 0
    den = 1
    for c in f:
        num = _int_gcd(num, c.numerator)
        den = den * c.denominator // _int_gcd(den, c.denominator)
    scale = Fraction(den, num if num else 1)
    if f[-1] < 0:
        scale = -scale
    return [c * scale for c in f]


def _is_integral(f):
    return all(c.denominator == 1 for c in f)


def _zassenhaus(g):
    """Complete factorization of a primitive squarefree integer polynomial.

    Returns (factors, note); factors are dense integer-primitive lists.  The
    recombination is exhaustive, so the result is a proof either way.
    """
    n = udeg(g)
    lc = int(g[-1])
    candidates = []
    checked = 0
    for q in _odd_primes():
        if len(candidates) >= 4 or checked >= 120:
            break
        checked += 1
        if lc % q == 0:
            continue
        gq = _zred([int(c) for c in g], q)
        if udeg(gq) != n:
            continue
        gq = _zmonic(gq, q)
        if udeg(_zgcd(gq, _zderiv(gq, q), q)) != 0:
            continue
        count = sum(udeg(block) // d for block, d in _ddf(gq, q))
        if count == 1:
            return [list(g)], f"irreducible mod {q}"
        candidates.append((count, q, gq))
    if not candidates:
        raise FactorIncomplete(
            "no usable prime found for modular factorization; supply a factor hint")
    _, q, gq = min(candidates)
    pool = _factor_mod(gq, q)
    # any factor of lc*g has coefficients below this bound, so the lift separates
    norm = isqrt(sum(int(c) ** 2 for c in g)) + 1
    bound = 2 * (2 ** n) * norm * abs(lc) + 1
    big = q
    while big < bound:
        big *= q
    lc_inv = pow(lc, -1, big)
    target = [(int(c) * lc_inv) % big for c in g]
    target[-1] = 1
    lifted = _hensel_tree_int(target, pool, q, big)
    work = list(g)
    found = []
    note = f"lift and recombination mod {q}"
    while udeg(work) > 0:
        if len(lifted) == 1:
            found.append(work)
            break
        wlc = int(work[-1])
        done = False
        for size in range(1, len(lifted) // 2 + 1):
            for subset in combinations(range(len(lifted)), size):
                prod = [wlc % big]
                for i in subset:
                    prod = utrim([int(c) % big for c in umul(prod, lifted[i])])
                cand = [Fraction(_center(int(c), big)) for c in prod]
                cand = _int_primitive(cand)
                quot, rem = udivmod(work, cand)
                if not rem and _is_integral(quot):
                    found.append(cand)
                    work = quot
                    lifted = [f for i, f in enumerate(lifted) if i not in subset]
                    done = True
                    break
            if done:
                break
        if not done:
            found.append(work)
            break
    return [f for f in found], note


def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(f):
    """All rational roots of a dense squarefree integer polynomial."""
    roots = []
    if f and f[0] == 0:
        roots.append(_ZERO)
        f = utrim(f[1:])
    if udeg(f) < 1:
        return roots
    a0 = int(f[0])
    an = int(f[-1])
    seen = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            for sign in (1, -1):
                r = Fraction(sign * p, q)
                if r in seen:
                    continue
                seen.add(r)
                acc = _ZERO
                for c in reversed(f):
                    acc = acc * r + c
                if acc == 0:
                    roots.append(r)
    return sorted(roots)


def _yun(f):
    """Squarefree decomposition over Q: f = lc · prod g_i^i with g_i monic."""
    f = [c / f[-1] for c in f]
    out = []
    df = uderiv(f)
    a = ugcd(f, df)
    b = udivmod(f, a)[0]
    c = udivmod(df, a)[0]
    d = usub(c, uderiv(b))
    i = 1
    while udeg(b) >= 1:
        g = ugcd(b, d)
        if udeg(g) >= 1:
            out.append((g, i))
        b = udivmod(b, g)[0]
        c = udivmod(d, g)[0]
        d = usub(c, uderiv(b))
        i += 1
    return out


def _factor_squarefree_q(f):
    """Irreducible factors of a squarefree dense rational polynomial.

    Complete; returns (dense integer-primitive factor, note) pairs, all proved.
    """
    f = _int_primitive(list(f))
    out = []
    for r in _rational_roots(f):
        lin = [-r, _ONE]
        f = udivmod(f, lin)[0]
        out.append((_int_primitive(lin), "rational root"))
    f = _int_primitive(f)
    d = udeg(f)
    if d == 0:
        return out
    if d == 1:
        out.append((f, "linear"))
        return out
    if d in (2, 3):
        out.append((f, f"degree {d} with no rational root"))
        return out
    factors, note = _zassenhaus(f)
    for g in factors:
        out.append((_int_primitive(g), note))
    return out


def _active_variable(p):
    live = [v for v in p.vars if p.deg_in(v) > 0]
    if len(live) > 1:
        raise ValueError(f"{p.render()!r} is not univariate")
    return live[0] if live else None


def factor_univariate(p, bound=DEFAULT_DEGREE_BOUND, hints=None):
    """Complete factorization over Q of a polynomial in one variable.

    Degrees above `bound` raise DegreeBound; verified hint factors are divided
    out first, so pre-factored input can bypass the bound.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    var = _active_variable(p)
    if var is None:
        return Factorization(p.const_value(), ())
    work, entries = _extract_hints(p, _hinted(hints, p))
    d = work.deg_in(var)
    if d > bound:
        raise DegreeBound(
            f"degree {d} exceeds the factorization bound {bound}; "
            "supply a factor hint")
    if d >= 1:
        dense = work.dense_fractions(var)
        for sqf, mult in _yun(dense):
            for fac, note in _factor_squarefree_q(sqf):
                poly = MultiPoly.from_dense(p.vars, var, fac)
                entries.append((poly, mult, PROVED, note))
    return _finish(p, entries)


# bivariate factorization

_SPECIALIZE_CANDIDATES = [Fraction(0)] + [
    Fraction(s * k) for k in range(1, 25) for s in (1, -1)
]


def _trunc_x(p, k):
    return MultiPoly(p.vars, {e: c for e, c in p.terms.items() if e[0] < k})


def _series_inverse(c_dense, k):
    """Power-series inverse of c(x) mod x^k; needs c_dense[0] != 0."""
    inv = [_ZERO] * k
    inv[0] = 1 / c_dense[0]
    for i in range(1, k):
        acc = _ZERO
        for j in range(1, i + 1):
            cj = c_dense[j] if j < len(c_dense) else _ZERO
            acc += cj * inv[i - j]
        inv[i] = -acc / c_dense[0]
    return utrim(inv)


def _ubezout(a, b):
    """s·a + t·b = 1 for coprime dense rational polynomials."""
    r0, r1 = list(a), list(b)
    s0, s1 = [_ONE], []
    t0, t1 = [], [_ONE]
    while r1:
        q, r = udivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, usub(s0, umul(q, s1))
        t0, t1 = t1, usub(t0, umul(q, t1))
    lc = r0[-1]
    return uscale(s0, 1 / lc), uscale(t0, 1 / lc)


def _y_dense_at_zero(p):
    """Dense rational coefficients in y of p(0, y)."""
    return utrim([c.eval_all({"x": 0, "y": 0}) for c in p.dense_in("y")])


def _from_y_dense(vars, coeffs):
    return MultiPoly.from_dense(vars, "y", coeffs)


def _hensel_pair_series(target, u, v, s, k):
    """Lift target ≡ u·v from mod x to mod x^k; everything monic in y."""
    u0 = _y_dense_at_zero(u)
    v0 = _y_dense_at_zero(v)
    for j in range(1, k):
        diff = _trunc_x(target - u * v, j + 1)
        if diff.is_zero():
            continue
        e = [_ZERO] * (len(u0) + len(v0))
        for exps, c in diff.terms.items():
            if exps[0] == j:
                e[exps[1]] += c
        e = utrim(e)
        if not e:
            continue
        b = udivmod(umul(s, e), v0)[1]
        a = udivmod(usub(e, umul(b, u0)), v0)[0]
        xj = MultiPoly(target.vars, {(j, 0): _ONE})
        u = u + xj * _from_y_dense(target.vars, a)
        v = v + xj * _from_y_dense(target.vars, b)
    return u, v


def _hensel_tree_series(target, pool, k):
    if len(pool) == 1:
        return [target]
    half = len(pool) // 2
    left, right = pool[:half], pool[half:]
    u0 = [_ONE]
    for f in left:
        u0 = umul(u0, f)
    v0 = [_ONE]
    for f in right:
        v0 = umul(v0, f)
    s, _ = _ubezout(u0, v0)
    u = _from_y_dense(target.vars, u0)
    v = _from_y_dense(target.vars, v0)
    u, v = _hensel_pair_series(target, u, v, s, k)
    return _hensel_tree_series(u, left, k) + _hensel_tree_series(v, right, k)


def _pick_specialization(p):
    cy = p.dense_in("y")
    lc = cy[-1]
    for x0 in _SPECIALIZE_CANDIDATES:
        if lc.eval_all({"x": x0, "y": 0}) == 0:
            continue
        u = utrim([c.eval_all({"x": x0, "y": 0}) for c in cy])
        if udeg(ugcd(u, uderiv(u))) == 0:
            return x0, u
    raise FactorIncomplete(
        f"no good specialization found for {p.render()!r}; supply a factor hint")


def _shift_x(p, x0):
    if not x0:
        return p
    return p.subst({
        "x": MultiPoly(p.vars, {(1, 0): _ONE, (0, 0): x0}),
        "y": MultiPoly.variable("y"),
    })


def _lc_series(p, k):
    dense = [_ZERO] * k
    for exps, coef in p.dense_in("y")[-1].terms.items():
        if exps[0] < k:
            dense[exps[0]] = coef
    return MultiPoly.from_dense(p.vars, "x", utrim(dense))


def _content_in_y(p):
    cont = MultiPoly.zero(p.vars)
    for c in p.dense_in("y"):
        cont = poly_gcd(cont, c)
        if cont.is_const() and not cont.is_zero():
            break
    return cont


def _split_primitive_y(p):
    """Factor entries for p: y-primitive, squarefree, deg_y >= 2, deg_x >= 1."""
    from .poly import VARS_T

    x0, u = _pick_specialization(p)
    u_fact = factor_univariate(
        MultiPoly.from_dense(VARS_T, "t", u), bound=INTERNAL_DEGREE_BOUND)
    if len(u_fact.factors) == 1 and u_fact.factors[0].multiplicity == 1:
        return [(p.primitive(), 1, PROBABLE,
                 f"specialization x = {x0} stays irreducible")]
    shifted = _shift_x(p, x0)
    dy = shifted.deg_in("y")
    k = 2 * shifted.deg_in("x") + 1
    c_series = _lc_series(shifted, k)
    inv_poly = MultiPoly.from_dense(p.vars, "x",
                                    _series_inverse(c_series.dense_fractions("x") or [_ONE], k))
    target = _trunc_x(shifted * inv_poly, k)
    terms = {e: c for e, c in target.terms.items() if e[1] < dy}
    terms[(0, dy)] = _ONE
    target = MultiPoly(p.vars, terms)
    pool = sorted(
        [c / t.poly.dense_fractions("t")[-1] for c in t.poly.dense_fractions("t")]
        for t in u_fact.factors
    )
    lifted = _hensel_tree_series(target, pool, k)
    entries = []
    work = shifted
    c_poly = c_series
    while True:
        wy = work.deg_in("y")
        if wy == 0:
            break
        if len(lifted) == 1 or wy == 1:
            tag = PROVED if wy == 1 else PROBABLE
            note = ("degree 1 in y and primitive" if wy == 1 else
                    f"series lift at x = {x0} admits no polynomial recombination")
            entries.append((_shift_x(work, -x0).primitive(), 1, tag, note))
            break
        done = False
        for size in range(1, len(lifted) // 2 + 1):
            for subset in combinations(range(len(lifted)), size):
                prod = MultiPoly.const(p.vars, 1)
                for i in subset:
                    prod = _trunc_x(prod * lifted[i], k)
                cand = _trunc_x(c_poly * prod, k)
                cand = cand.div_exact(_content_in_y(cand)).primitive()
                quot = work.div_exact(cand)
                if quot is not None:
                    entries.append((_shift_x(cand, -x0).primitive(), 1, PROVED,
                                    f"series lift at x = {x0}"))
                    work = quot
                    c_poly = _lc_series(work, k)
                    lifted = [f for i, f in enumerate(lifted) if i not in subset]
                    done = True
                    break
            if done:
                break
        if not done:
            wy = work.deg_in("y")
            tag = PROVED if wy == 1 else PROBABLE
            note = ("degree 1 in y and primitive" if wy == 1 else
                    f"series lift at x = {x0} admits no polynomial recombination")
            entries.append((_shift_x(work, -x0).primitive(), 1, tag, note))
            break
    return entries


def factor_plane_curve(p, hints=None):
    """Factor a bivariate polynomial into primitive irreducible parts."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.vars != ("x", "y"):
        raise ValueError("factor_plane_curve expects a polynomial in x, y")
    return _finish(p, _plane_entries(p, hints))


def _plane_entries(p, hints):
    if p.is_const():
        return []
    entries = []
    hinted = _hinted(hints, p)
    if hinted:
        p, entries = _extract_hints(p, hinted)
        if p.is_const():
            return entries
    dx, dy = p.deg_in("x"), p.deg_in("y")
    if dx == 0 or dy == 0:
        entries.extend(
            (t.poly, t.multiplicity, t.certificate, t.evidence)
            for t in factor_univariate(p, bound=INTERNAL_DEGREE_BOUND).factors)
        return entries
    cont = _content_in_y(p)
    if cont.degree() > 0:
        entries.extend(_plane_entries(cont, hints))
        p = p.div_exact(cont)
    dp = p.derivative("y")
    g = poly_gcd(p, dp)
    if g.degree() > 0:
        entries.extend(_plane_entries(g, hints))
        entries.extend(_plane_entries(p.div_exact(g), hints))
        return entries
    if p.deg_in("x") == 0:
        entries.extend(
            (t.poly, t.multiplicity, t.certificate, t.evidence)
            for t in factor_univariate(p, bound=INTERNAL_DEGREE_BOUND).factors)
        return entries
    if p.deg_in("y") == 1:
        entries.append((p.primitive(), 1, PROVED, "degree 1 in y and primitive"))
        return entries
    entries.extend(_split_primitive_y(p.primitive()))
    return entries
