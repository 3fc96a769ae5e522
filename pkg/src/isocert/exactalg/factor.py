"""Squarefree factorization, linear splitting and partial fractions.

Pole finding is complete for denominators whose squarefree parts split into
factors linear in the distinguished variable over the remaining fraction
field, located by content/primitive recursion over the parameter variables,
rational-root search for univariate factors over Q, and an exact
discriminant square root for quadratics.  Anything richer raises
NonLinearFactor rather than approximating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .poly import (MultiPoly, ZeroPolynomial, content_wrt, exact_div,
                   poly_sqrt, squarefree_decomposition)
from .rational import RationalFunction
from .registry import ExactAlgError, VariableRegistry
from .upoly import UPoly


class NonLinearFactor(ExactAlgError):
    """An irreducible factor of degree >= 2 in the distinguished variable
    remains; the base field extension it would need is unsupported."""


def squarefree_factor(p: MultiPoly, v: int) -> list[tuple[MultiPoly, int]]:
    """Squarefree decomposition of p in variable v over the fraction field of
    the remaining variables; factors primitive, monic, pairwise coprime."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    _, factors = squarefree_decomposition(p, v)
    return factors


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = set()
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def _rational_roots_univariate(q: MultiPoly, v: int,
                               registry: VariableRegistry) -> list[RationalFunction] | None:
    """All roots of a squarefree q in Q[v]; None when q does not split."""
    coeffs = {e: c.const_value() for e, c in q.as_univariate(v).items()}
    deg = max(coeffs)
    den_lcm = 1
    for c in coeffs.values():
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    zc = {e: int(c * den_lcm) for e, c in coeffs.items()}
    roots: list[Fraction] = []
    if 0 not in zc:
        # Squarefree, so v divides q exactly once.
        roots.append(Fraction(0))
        zc = {e - 1: c for e, c in zc.items()}
        deg -= 1
    if deg == 0:
        return [RationalFunction.const(r, registry) for r in roots]
    dense = [zc.get(e, 0) for e in range(deg + 1)]

    def eval_at(r: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(dense):
            acc = acc * r + c
        return acc

    # Every rational root p/q has p | a0 and q | a_deg; the roots are simple,
    # so the polynomial splits iff `deg` distinct candidates vanish.
    for p_num in _divisors(dense[0]):
        for p_den in _divisors(dense[-1]):
            for sign in (1, -1):
                cand = Fraction(sign * p_num, p_den)
                if cand not in roots and eval_at(cand) == 0:
                    roots.append(cand)
    if len(roots) != q.degree(v):
        return None
    return [RationalFunction.const(r, registry) for r in roots]


def _roots_of_squarefree(q: MultiPoly, v: int,
                         registry: VariableRegistry) -> list[RationalFunction]:
    """Roots in the remaining fraction field of a polynomial squarefree in v;
    raises NonLinearFactor unless q splits completely."""
    d = q.degree(v)
    if d <= 0:
        return []
    if d == 1:
        u = q.as_univariate(v)
        a0 = u.get(0, MultiPoly.zero())
        a1 = u[1]
        return [RationalFunction(-a0, a1, registry)]
    # Peel factors that differ in their dependence on some parameter.
    for other in sorted(q.variables() - {v}, reverse=True):
        cont = content_wrt(q, other)
        if cont.degree(v) >= 1:
            rest = exact_div(q, cont)
            return (_roots_of_squarefree(cont, v, registry)
                    + _roots_of_squarefree(rest, v, registry))
    if q.variables() <= {v}:
        roots = _rational_roots_univariate(q, v, registry)
        if roots is None:
            raise NonLinearFactor(f"univariate factor of degree {d} does not split over Q")
        return roots
    if d == 2:
        u = q.as_univariate(v)
        a = u.get(2, MultiPoly.zero())
        b = u.get(1, MultiPoly.zero())
        c = u.get(0, MultiPoly.zero())
        disc = b * b - MultiPoly.const(4) * a * c
        s = poly_sqrt(disc)
        if s is not None:
            two_a = MultiPoly.const(2) * a
            return [RationalFunction(-b + s, two_a, registry),
                    RationalFunction(-b - s, two_a, registry)]
        if len(q.variables()) > 2:
            raise NonLinearFactor("irreducible quadratic factor")
    roots = _roots_by_newton_lifting(q, v, registry)
    if roots is not None:
        return roots
    raise NonLinearFactor(f"cannot split factor of degree {d} in the distinguished variable")


# -- one-parameter splitting by Newton lifting --------------------------------
#
# For q(v; u) over Q with a single remaining parameter u: specialize u to a
# generic rational point, lift each simple rational root to a power series in
# (u - tau) by Newton iteration, reconstruct a bounded-degree rational
# function, and verify the division exactly.  Verification makes the lifting
# choices sound; failure falls through to NonLinearFactor.

_LIFT_POINTS = (0, 1, -1, 2, -2, 3, -3, 5, -5, 7, 11)


def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a):
        if ai == 0 or i >= n:
            continue
        for j, bj in enumerate(b):
            if i + j >= n:
                break
            if bj != 0:
                out[i + j] += ai * bj
    return out


def _series_inv(a: list[Fraction], n: int) -> list[Fraction] | None:
    if not a or a[0] == 0:
        return None
    inv = [Fraction(0)] * n
    inv[0] = 1 / a[0]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a) and a[j] != 0:
                acc += a[j] * inv[k - j]
        inv[k] = -acc / a[0]
    return inv


def _poly_to_series(p: MultiPoly, u: int, tau: Fraction, n: int) -> list[Fraction]:
    """Expand p(u) around u = tau + s, truncated to order n:
    (tau + s)^e = sum_k C(e,k) tau^(e-k) s^k."""
    out = [Fraction(0)] * n
    for mono, c in p.terms.items():
        e = dict(mono).get(u, 0)
        for k in range(min(e, n - 1) + 1):
            out[k] += c * Fraction(math.comb(e, k)) * tau ** (e - k)
    return out


def _series_eval_poly(coeffs: dict[int, list[Fraction]], c: list[Fraction],
                      n: int) -> list[Fraction]:
    top = max(coeffs)
    acc = list(coeffs.get(top, [Fraction(0)] * n))
    for e in range(top - 1, -1, -1):
        acc = _series_mul(acc, c, n)
        add = coeffs.get(e)
        if add:
            acc = [x + (add[i] if i < len(add) else 0) for i, x in enumerate(acc)]
    return acc


def _newton_lift(coeffs: dict[int, list[Fraction]], rho: Fraction,
                 n: int) -> list[Fraction] | None:
    dcoeffs = {e - 1: [Fraction(e) * x for x in s]
               for e, s in coeffs.items() if e >= 1}
    c = [Fraction(0)] * n
    c[0] = rho
    for _ in range(max(4, n.bit_length() + 2)):
        val = _series_eval_poly(coeffs, c, n)
        if all(x == 0 for x in val):
            return c
        dval = _series_eval_poly(dcoeffs, c, n)
        inv = _series_inv(dval, n)
        if inv is None:
            return None
        corr = _series_mul(val, inv, n)
        c = [c[i] - corr[i] for i in range(n)]
    val = _series_eval_poly(coeffs, c, n)
    return c if all(x == 0 for x in val) else None


def _reconstruct_rational(series: list[Fraction], bound: int, u: int,
                          tau: Fraction, registry: VariableRegistry) -> RationalFunction | None:
    """Find C, D of degree <= bound with C(s) = series * D(s) mod s^len and
    D(0) = 1; return C(u - tau)/D(u - tau)."""
    n = len(series)
    from .linalg import linear_solve as _solve

    # unknowns: C_0..C_bound, D_1..D_bound  (D_0 = 1)
    n_c = bound + 1
    n_d = bound
    rows = []
    rhs = []
    for k in range(n):
        row = [Fraction(0)] * (n_c + n_d)
        if k < n_c:
            row[k] = Fraction(-1)
        for j in range(1, n_d + 1):
            if k - j >= 0:
                row[n_c + j - 1] = series[k - j]
        rows.append(row)
        rhs.append(-series[k])
    sol = _solve(rows, rhs, Fraction(0), Fraction(1))
    if sol.inconsistent:
        return None
    vec = sol.particular
    s_poly = MultiPoly.var(u) - MultiPoly.const(tau)
    C = MultiPoly.zero()
    D = MultiPoly.one()
    for k in range(n_c):
        if vec[k]:
            C = C + s_poly ** k * MultiPoly.const(vec[k])
    for j in range(1, n_d + 1):
        if vec[n_c + j - 1]:
            D = D + s_poly ** j * MultiPoly.const(vec[n_c + j - 1])
    if D.is_zero():
        return None
    return RationalFunction(C, D, registry)


def _roots_by_newton_lifting(q: MultiPoly, v: int,
                             registry: VariableRegistry) -> list[RationalFunction] | None:
    rest = sorted(q.variables() - {v})
    if len(rest) != 1:
        return None
    u = rest[0]
    d = q.degree(v)
    bound = q.degree(u)
    n = 2 * bound + 3
    coeffs_poly = q.as_univariate(v)
    q_rf = RationalFunction.from_poly(q, registry)
    for point in _LIFT_POINTS:
        tau = Fraction(point)
        coeffs = {e: _poly_to_series(p, u, tau, n) for e, p in coeffs_poly.items()}
        lead = coeffs.get(d)
        if lead is None or lead[0] == 0:
            continue
        dense = [coeffs.get(e, [Fraction(0)])[0] for e in range(d + 1)]
        rhos = _distinct_rational_roots_dense(dense)
        if rhos is None or len(rhos) != d:
            continue
        roots = []
        for rho in rhos:
            series = _newton_lift(coeffs, rho, n)
            if series is None:
                break
            c = _reconstruct_rational(series, bound, u, tau, registry)
            if c is None or not q_rf.substitute(v, c).is_zero():
                break
            roots.append(c)
        if len(roots) == d:
            return roots
    return None


def _distinct_rational_roots_dense(dense: list[Fraction]) -> list[Fraction] | None:
    """All rational roots of a dense-coefficient polynomial, or None if the
    count cannot reach the degree (multiple or irrational roots)."""
    while dense and dense[-1] == 0:
        dense.pop()
    if len(dense) <= 1:
        return None
    deg = len(dense) - 1
    den_lcm = 1
    for c in dense:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    zc = [int(c * den_lcm) for c in dense]
    roots: list[Fraction] = []
    while zc and zc[0] == 0:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        else:
            return None  # multiple root at zero
        zc = zc[1:]
    if not zc or len(zc) == 1:
        return roots if len(roots) == deg else None

    def eval_at(r: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(zc):
            acc = acc * r + c
        return acc

    for p_num in _divisors(zc[0]):
        for p_den in _divisors(zc[-1]):
            for sign in (1, -1):
                cand = Fraction(sign * p_num, p_den)
                if cand not in roots and eval_at(cand) == 0:
                    roots.append(cand)
    return roots if len(roots) == deg else None


def linear_poles(den: MultiPoly, v: int,
                 registry: VariableRegistry) -> list[tuple[RationalFunction, int]]:
    """Poles (root, multiplicity) of 1/den in variable v, deterministically
    ordered; raises NonLinearFactor when den does not split v-linearly."""
    out: list[tuple[RationalFunction, int]] = []
    for factor, mult in squarefree_factor(den, v):
        roots = _roots_of_squarefree(factor, v, registry)
        if len(roots) != factor.degree(v):
            raise NonLinearFactor("incomplete splitting")
        out.extend((r, mult) for r in roots)
    out.sort(key=lambda pair: _rf_sort_key(pair[0]))
    return out


def _rf_sort_key(f: RationalFunction):
    from .poly import mono_key_grlex

    def poly_key(p: MultiPoly):
        return tuple(sorted(((mono_key_grlex(m), c) for m, c in p.terms.items()),
                            reverse=True))

    return (poly_key(f.den), poly_key(f.num))


@dataclass(frozen=True)
class PoleTerm:
    pole: RationalFunction
    order: int
    coeff: RationalFunction


@dataclass(frozen=True)
class PartialFractions:
    """f = poly_part + sum coeff/(v - pole)^order, exactly."""

    poly_part: RationalFunction
    terms: tuple[PoleTerm, ...]

    def recombine(self, v: int) -> RationalFunction:
        reg = self.poly_part.registry
        x = RationalFunction.from_poly(MultiPoly.var(v), reg)
        total = self.poly_part
        for t in self.terms:
            total = total + t.coeff / (x - t.pole) ** t.order
        return total


def partial_fractions(f: RationalFunction, v_name: str) -> PartialFractions:
    registry = f.registry
    v = registry.index(v_name)
    if f.den.degree(v) <= 0:
        return PartialFractions(f, ())
    num_u = UPoly.from_rational(RationalFunction.from_poly(f.num, registry), v)
    den_u = UPoly.from_rational(RationalFunction.from_poly(f.den, registry), v)
    q, _ = num_u.divmod(den_u)
    poly_part = q.to_rational(v)
    proper = f - poly_part
    poles = linear_poles(f.den, v, registry)
    x = RationalFunction.from_poly(MultiPoly.var(v), registry)
    terms: list[PoleTerm] = []
    for pole, mult in poles:
        g = proper * (x - pole) ** mult
        h = g
        for s in range(mult):
            value = h.substitute(v, pole) / Fraction(math.factorial(s))
            if not value.is_zero():
                terms.append(PoleTerm(pole=pole, order=mult - s, coeff=value))
            if s + 1 < mult:
                h = h.derive_index(v)
    terms.sort(key=lambda t: (_rf_sort_key(t.pole), t.order))
    return PartialFractions(poly_part, tuple(terms))
