"""Sparse multivariate polynomials over Q with exact arithmetic.

Monomials are sorted tuples of (variable index, exponent) pairs with positive
exponents; coefficients are `fractions.Fraction`.  The term order is graded
lexicographic in the registry order (lower index = more significant).  All
values are immutable; no zero coefficients are ever stored.

Also provides the polynomial toolbox the rest of the package is built on:
exact division, pseudo-remainders, gcd via subresultant PRS on a distinguished
variable, content/primitive splitting, Yun squarefree decomposition and exact
polynomial square roots.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from functools import reduce

from .registry import ExactAlgError

Mono = tuple[tuple[int, int], ...]

EMPTY_MONO: Mono = ()


class ZeroPolynomial(ExactAlgError):
    pass


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out: dict[int, int] = dict(a)
    for i, e in b:
        out[i] = out.get(i, 0) + e
    return tuple(sorted(out.items()))


def mono_div(a: Mono, b: Mono) -> Mono | None:
    """a / b, or None when b does not divide a."""
    if not b:
        return a
    da = dict(a)
    for i, e in b:
        r = da.get(i, 0) - e
        if r < 0:
            return None
        if r == 0:
            da.pop(i, None)
        else:
            da[i] = r
    return tuple(sorted(da.items()))


def mono_gcd(a: Mono, b: Mono) -> Mono:
    db = dict(b)
    out = []
    for i, e in a:
        if i in db:
            out.append((i, min(e, db[i])))
    return tuple(out)


def mono_degree(a: Mono) -> int:
    return sum(e for _, e in a)


def mono_key_grlex(a: Mono):
    """Sort key: larger key = larger monomial in graded lex order."""
    # Lex tie-break: scanning variables in registry order, the monomial whose
    # exponent is larger at the first difference wins.  Encoding each pair as
    # (-index, exponent) and comparing the padded sequence realizes this.
    return (mono_degree(a), tuple((-i, e) for i, e in a))


def mono_key_inv(a: Mono):
    """Order-reversing companion of mono_key_grlex, for min-heaps.  Safe
    because same-degree monomials never have prefix-related encodings."""
    return (-mono_degree(a), tuple((i, -e) for i, e in a))


class MultiPoly:
    """Immutable sparse polynomial; `terms` maps monomials to nonzero Fractions."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[Mono, Fraction] | None = None):
        self.terms: dict[Mono, Fraction] = terms or {}
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return _ZERO

    @staticmethod
    def one() -> "MultiPoly":
        return _ONE

    @staticmethod
    def const(c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return _ZERO
        return MultiPoly({EMPTY_MONO: c})

    @staticmethod
    def var(idx: int, exp: int = 1) -> "MultiPoly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return _ONE
        return MultiPoly({((idx, exp),): Fraction(1)})

    @staticmethod
    def from_terms(items) -> "MultiPoly":
        terms: dict[Mono, Fraction] = {}
        for mono, coeff in items:
            c = terms.get(mono, Fraction(0)) + coeff
            if c == 0:
                terms.pop(mono, None)
            else:
                terms[mono] = c
        return MultiPoly(terms)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and EMPTY_MONO in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms[EMPTY_MONO]

    def is_one(self) -> bool:
        return self.terms == {EMPTY_MONO: Fraction(1)}

    def variables(self) -> set[int]:
        out: set[int] = set()
        for mono in self.terms:
            for i, _ in mono:
                out.add(i)
        return out

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono)
            if s is None:
                terms[mono] = c
            else:
                s = s + c
                if s == 0:
                    del terms[mono]
                else:
                    terms[mono] = s
        return MultiPoly(terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms or not other.terms:
            return _ZERO
        if other.is_one():
            return self
        if self.is_one():
            return other
        # Integer coefficients are the common case; plain ints avoid the
        # normalization cost of Fraction arithmetic in the inner loop.
        if all(c.denominator == 1 for c in self.terms.values()) and \
           all(c.denominator == 1 for c in other.terms.values()):
            iterms: dict[Mono, int] = {}
            a_items = [(m, c.numerator) for m, c in self.terms.items()]
            b_items = [(m, c.numerator) for m, c in other.terms.items()]
            for m1, c1 in a_items:
                for m2, c2 in b_items:
                    m = mono_mul(m1, m2)
                    iterms[m] = iterms.get(m, 0) + c1 * c2
            return MultiPoly({m: Fraction(v) for m, v in iterms.items() if v})
        terms: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = terms.get(m)
                v = c1 * c2
                if s is None:
                    terms[m] = v
                else:
                    s = s + v
                    if s == 0:
                        del terms[m]
                    else:
                        terms[m] = s
        return MultiPoly(terms)

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return _ZERO
        if c == 1:
            return self
        return MultiPoly({m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for mono in sorted(self.terms, key=mono_key_grlex, reverse=True):
            coeff = self.terms[mono]
            mono_s = "*".join(f"v{i}^{e}" if e > 1 else f"v{i}" for i, e in mono)
            bits.append(f"{coeff}" + (f"*{mono_s}" if mono_s else ""))
        return "MultiPoly(" + " + ".join(bits) + ")"

    # -- calculus and structure --------------------------------------------

    def derivative(self, var: int) -> "MultiPoly":
        terms: dict[Mono, Fraction] = {}
        for mono, c in self.terms.items():
            d = dict(mono)
            e = d.get(var)
            if not e:
                continue
            if e == 1:
                d.pop(var)
            else:
                d[var] = e - 1
            m = tuple(sorted(d.items()))
            s = terms.get(m, Fraction(0)) + c * e
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly(terms)

    def degree(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        best = 0
        for mono in self.terms:
            for i, e in mono:
                if i == var and e > best:
                    best = e
        return best

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def leading_monomial(self) -> Mono:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return max(self.terms, key=mono_key_grlex)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    def as_univariate(self, var: int) -> dict[int, "MultiPoly"]:
        """Coefficients by power of `var`; coefficients do not involve `var`."""
        out: dict[int, dict[Mono, Fraction]] = {}
        for mono, c in self.terms.items():
            d = dict(mono)
            e = d.pop(var, 0)
            rest = tuple(sorted(d.items()))
            out.setdefault(e, {})[rest] = out.get(e, {}).get(rest, Fraction(0)) + c
        return {e: MultiPoly({m: c for m, c in terms.items() if c != 0})
                for e, terms in out.items()}

    @staticmethod
    def from_univariate(var: int, coeffs: dict[int, "MultiPoly"]) -> "MultiPoly":
        total = _ZERO
        for e, c in coeffs.items():
            total = total + c * MultiPoly.var(var, e)
        return total

    def coefficient(self, var: int, power: int) -> "MultiPoly":
        return self.as_univariate(var).get(power, _ZERO)

    def monomial_content(self) -> Mono:
        """Largest monomial dividing every term."""
        if not self.terms:
            return EMPTY_MONO
        return reduce(mono_gcd, self.terms)


_ZERO = MultiPoly({})
_ONE = MultiPoly({EMPTY_MONO: Fraction(1)})


# ---------------------------------------------------------------------------
# Division, gcd and factor structure
# ---------------------------------------------------------------------------


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """a / b when b divides a exactly; raises ArithmeticError otherwise.

    Leading-term elimination driven by a lazy-deletion heap, so each step
    costs O(|b| log |r|) instead of a full scan of the remainder.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return _ZERO
    if b.is_one():
        return a
    if b.is_const():
        return a.scale(Fraction(1) / b.const_value())
    lm_b = b.leading_monomial()
    lc_b = b.terms[lm_b]
    b_rest = [(m, c) for m, c in b.terms.items() if m != lm_b]
    r = dict(a.terms)
    heap = [(mono_key_inv(m), m) for m in r]
    heapq.heapify(heap)
    q: dict[Mono, Fraction] = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = r.pop(m, None)
        if c is None:
            continue
        qm = mono_div(m, lm_b)
        if qm is None:
            raise ArithmeticError("inexact polynomial division")
        qc = c / lc_b
        q[qm] = qc
        for mb, cb in b_rest:
            mm = mono_mul(qm, mb)
            prev = r.get(mm)
            if prev is None:
                r[mm] = -qc * cb
                heapq.heappush(heap, (mono_key_inv(mm), mm))
            else:
                nxt = prev - qc * cb
                if nxt == 0:
                    del r[mm]
                else:
                    r[mm] = nxt
    if r:
        raise ArithmeticError("inexact polynomial division")
    return MultiPoly(q)


def prem(a: MultiPoly, b: MultiPoly, var: int) -> MultiPoly:
    """Pseudo-remainder of a by b in `var`: lc(b)^(da-db+1) * a mod b."""
    db = b.degree(var)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    da = a.degree(var)
    if da < db:
        return a
    lb = b.coefficient(var, db)
    r = a
    e = da - db + 1
    while not r.is_zero() and (dr := r.degree(var)) >= db:
        lr = r.coefficient(var, dr)
        r = r * lb - lr * MultiPoly.var(var, dr - db) * b
        e -= 1
    if e > 0:
        r = r * lb ** e
    return r


def _subresultant_prs_gcd(a: MultiPoly, b: MultiPoly, var: int) -> MultiPoly:
    """Gcd of two polynomials primitive in `var`, both of positive degree."""
    if a.degree(var) < b.degree(var):
        a, b = b, a
    g = _ONE
    h = _ONE
    while True:
        delta = a.degree(var) - b.degree(var)
        r = prem(a, b, var)
        if r.is_zero():
            return primitive_part(b, var)
        if r.degree(var) == 0:
            return _ONE
        a, b = b, exact_div(r, g * h ** delta)
        g = a.coefficient(var, a.degree(var))
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))


def content_wrt(p: MultiPoly, var: int) -> MultiPoly:
    """Gcd of the coefficients of p seen as univariate in `var` (monic)."""
    coeffs = list(p.as_univariate(var).values())
    if len(coeffs) == 1:
        return coeffs[0].monic()
    c = coeffs[0]
    for other in coeffs[1:]:
        c = gcd(c, other)
        if c.is_one():
            return _ONE
    return c


def primitive_part(p: MultiPoly, var: int) -> MultiPoly:
    c = content_wrt(p, var)
    if c.is_one():
        return p
    return exact_div(p, c)


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Polynomial gcd over Q, normalized monic under graded-lex.

    Uses the evaluation-reconstruction heuristic with exact division checks;
    the verified answer is provably correct, and the subresultant PRS on the
    top common variable handles the rare failures.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return _ONE
    # Peel the shared monomial factor first; it is cheap and common.
    ma, mb = a.monomial_content(), b.monomial_content()
    m = mono_gcd(ma, mb)
    if ma:
        a = exact_div(a, MultiPoly({ma: Fraction(1)}))
    if mb:
        b = exact_div(b, MultiPoly({mb: Fraction(1)}))
    mono_factor = MultiPoly({m: Fraction(1)}) if m else _ONE
    if a.is_const() or b.is_const():
        return mono_factor
    if a.terms == b.terms:
        return (mono_factor * a).monic()
    va, vb = a.variables(), b.variables()
    common = va & vb
    if not common:
        return mono_factor
    pa = _int_normalize(a)
    pb = _int_normalize(b)
    try:
        g = _heugcd(pa, pb)
    except _HeuristicFailure:
        g = _prs_route(pa, pb, max(common))
    return (mono_factor * g).monic()


def _prs_route(a: MultiPoly, b: MultiPoly, var: int) -> MultiPoly:
    ca = content_wrt(a, var)
    pa = a if ca.is_one() else exact_div(a, ca)
    cb = content_wrt(b, var)
    pb = b if cb.is_one() else exact_div(b, cb)
    cg = gcd(ca, cb)
    pg = _subresultant_prs_gcd(pa, pb, var)
    return cg * pg


class _HeuristicFailure(Exception):
    pass


def _int_normalize(p: MultiPoly) -> MultiPoly:
    """Scale to integer coefficients with content 1 and positive leading
    coefficient (a unit multiple of p over Q)."""
    den_lcm = 1
    for c in p.terms.values():
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    num_gcd = 0
    for c in p.terms.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
    scale = Fraction(den_lcm, num_gcd if num_gcd else 1)
    if p.leading_coefficient() < 0:
        scale = -scale
    return p.scale(scale)


def _eval_at_int(p: MultiPoly, var: int, point: int) -> MultiPoly:
    parts = p.as_univariate(var)
    total = _ZERO
    power = 1
    for e in range(max(parts) + 1):
        q = parts.get(e)
        if q is not None:
            total = total + q.scale(power)
        power *= point
    return total


def _balanced_digit(p: MultiPoly, xi: int) -> tuple[MultiPoly, MultiPoly]:
    """Split p = digit + xi*rest with digit coefficients in (-xi/2, xi/2]."""
    digit: dict[Mono, Fraction] = {}
    rest: dict[Mono, Fraction] = {}
    half = xi // 2
    for mono, c in p.terms.items():
        ci = int(c)
        r = ci % xi
        if r > half:
            r -= xi
        if r:
            digit[mono] = Fraction(r)
        q = (ci - r) // xi
        if q:
            rest[mono] = Fraction(q)
    return MultiPoly(digit), MultiPoly(rest)


def _try_exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly | None:
    try:
        return exact_div(a, b)
    except ArithmeticError:
        return None


def _int_content(p: MultiPoly) -> int:
    g = 0
    for c in p.terms.values():
        g = math.gcd(g, abs(c.numerator))
        if g == 1:
            return 1
    return g if g else 1


def _reconstruct(gamma: MultiPoly, var: int, xi: int, deg_cap: int) -> MultiPoly | None:
    """Invert evaluation at xi via balanced xi-adic digits."""
    h = _ZERO
    q = gamma
    k = 0
    while not q.is_zero():
        if k > deg_cap:
            return None
        digit, q = _balanced_digit(q, xi)
        if not digit.is_zero():
            h = h + digit * MultiPoly.var(var, k) if k else h + digit
        k += 1
    return h if not h.is_zero() else None


def _heugcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Heuristic gcd for integer-coefficient inputs; raises on failure.

    The integer content is split off first (the content of the gcd is the gcd
    of the contents), so the recursion on evaluated images keeps the content
    information that a specialized variable may carry.
    """
    ca, cb = _int_content(a), _int_content(b)
    ig = math.gcd(ca, cb)
    pa = a if ca == 1 else a.scale(Fraction(1, ca))
    pb = b if cb == 1 else b.scale(Fraction(1, cb))
    if pa.leading_coefficient() < 0:
        pa = -pa
    if pb.leading_coefficient() < 0:
        pb = -pb
    if pa.is_const() or pb.is_const():
        return MultiPoly.const(ig)
    common = pa.variables() & pb.variables()
    if not common:
        return MultiPoly.const(ig)
    var = max(common)
    norm_a = max(abs(c.numerator) for c in pa.terms.values())
    norm_b = max(abs(c.numerator) for c in pb.terms.values())
    # The divide-and-check loop is only guaranteed to return the full gcd for
    # evaluation points beyond twice the smaller max-norm.
    xi = 2 * min(norm_a, norm_b) + 29
    deg_cap = min(pa.degree(var), pb.degree(var)) + 1
    for _ in range(6):
        fa = _eval_at_int(pa, var, xi)
        fb = _eval_at_int(pb, var, xi)
        if not fa.is_zero() and not fb.is_zero():
            gamma = _heugcd(fa, fb)
            h = _reconstruct(gamma, var, xi, deg_cap)
            if h is not None:
                hc = _int_content(h)
                if hc > 1:
                    h = h.scale(Fraction(1, hc))
                if h.leading_coefficient() < 0:
                    h = -h
                if _try_exact_div(pa, h) is not None and _try_exact_div(pb, h) is not None:
                    return h if ig == 1 else h.scale(ig)
            # Cofactor rescue: reconstruct f(xi)/gamma instead and divide it out.
            cof = _try_exact_div(fa, gamma)
            if cof is not None:
                cf = _reconstruct(cof, var, xi, pa.degree(var) + 1)
                if cf is not None:
                    cand = _try_exact_div(pa, cf)
                    if cand is not None and not cand.is_zero():
                        hc = _int_content(cand)
                        if hc > 1:
                            cand = cand.scale(Fraction(1, hc))
                        if cand.leading_coefficient() < 0:
                            cand = -cand
                        if _try_exact_div(pb, cand) is not None and \
                                _try_exact_div(pa, cand) is not None:
                            return cand if ig == 1 else cand.scale(ig)
        xi = xi * 73794 // 27011 + 1
    raise _HeuristicFailure


def lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.is_zero() or b.is_zero():
        return _ZERO
    return exact_div(a * b, gcd(a, b)).monic()


def squarefree_decomposition(p: MultiPoly, var: int) -> tuple[MultiPoly, list[tuple[MultiPoly, int]]]:
    """Yun decomposition of p in `var` over the fraction field of the rest.

    Returns (unit, [(q_i, i)]) with unit * prod q_i^i == p, the q_i primitive
    in `var`, squarefree, pairwise coprime, monic under graded-lex, and the
    unit of degree zero in `var`.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot decompose the zero polynomial")
    if p.degree(var) == 0:
        return p, []
    cont = content_wrt(p, var)
    w = p if cont.is_one() else exact_div(p, cont)
    lead = w.coefficient(var, w.degree(var))
    factors: list[tuple[MultiPoly, int]] = []
    dw = w.derivative(var)
    a0 = gcd(w, dw)
    b = exact_div(w, a0)
    c = exact_div(dw, a0)
    d = c - b.derivative(var)
    i = 1
    while b.degree(var) > 0:
        ai = gcd(b, d)
        if ai.degree(var) > 0:
            factors.append((ai.monic(), i))
        b = exact_div(b, ai)
        c = exact_div(d, ai)
        d = c - b.derivative(var)
        i += 1
    prod = _ONE
    for q, mult in factors:
        prod = prod * q ** mult
    unit = exact_div(p, prod)
    return unit, factors


def poly_sqrt(p: MultiPoly) -> MultiPoly | None:
    """Exact square root of p, or None when p is not a perfect square."""
    if p.is_zero():
        return _ZERO
    if p.is_const():
        c = p.const_value()
        if c < 0:
            return None
        num, den = c.numerator, c.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        return MultiPoly.const(Fraction(rn, rd))
    var = max(p.variables())
    try:
        unit, factors = squarefree_decomposition(p, var)
    except ZeroPolynomial:
        return None
    if any(mult % 2 for _, mult in factors):
        return None
    root_unit = poly_sqrt(unit)
    if root_unit is None:
        return None
    s = root_unit
    for q, mult in factors:
        s = s * q ** (mult // 2)
    if s * s == p:
        return s
    return None


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None
