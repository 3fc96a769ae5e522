"""Reduction modulo d/dx in Q(params)(x), the induced parameter action on
canonical classes, minimal telescopers with certificates, and the bivariate
exactness decision used as a flattening obstruction.

Canonical form: every class in K/(d_x K) for K = k(x) has a unique
representative sum b_i/(x - c_i) with b_i, c_i in k; reduction produces that
representative together with a certificate g such that

    f = d_x(g) + sum b_i/(x - c_i)      (verified on every call).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (MultiPoly, NonLinearFactor, RationalFunction, UPoly,
                       linear_solve, partial_fractions)
from .exactalg.factor import _rf_sort_key
from .operators import LinearDiffOperator


class TelescoperNotFound(Exception):
    """No k-linear dependence among the reduced derivatives up to max_order."""

    def __init__(self, max_order: int):
        super().__init__(f"no telescoper up to order {max_order}")
        self.max_order = max_order


class H1Class:
    """Finite map pole -> nonzero residue; the empty map is the zero class."""

    __slots__ = ("residues",)

    def __init__(self, residues: dict[RationalFunction, RationalFunction] | None = None):
        self.residues = {p: r for p, r in (residues or {}).items() if not r.is_zero()}

    def is_zero(self) -> bool:
        return not self.residues

    def poles(self) -> list[RationalFunction]:
        return sorted(self.residues, key=_rf_sort_key)

    def residue(self, pole: RationalFunction) -> RationalFunction | None:
        return self.residues.get(pole)

    def __add__(self, other: "H1Class") -> "H1Class":
        out = dict(self.residues)
        for p, r in other.residues.items():
            s = out.get(p)
            out[p] = r if s is None else s + r
        return H1Class(out)

    def scale(self, c: RationalFunction) -> "H1Class":
        return H1Class({p: c * r for p, r in self.residues.items()})

    def representative(self, x_name: str) -> RationalFunction:
        if not self.residues:
            raise ValueError("zero class has the zero representative; build it from the registry")
        reg = next(iter(self.residues)).registry
        x = RationalFunction.var(x_name, reg)
        total = RationalFunction.const(0, reg)
        for p in self.poles():
            total = total + self.residues[p] / (x - p)
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, H1Class) and self.residues == other.residues

    def __hash__(self) -> int:
        return hash(frozenset(self.residues.items()))

    def __repr__(self) -> str:
        if not self.residues:
            return "H1Class(0)"
        bits = ", ".join(f"{p!r}: {r!r}" for p, r in sorted(
            self.residues.items(), key=lambda it: _rf_sort_key(it[0])))
        return f"H1Class({{{bits}}})"


@dataclass(frozen=True)
class ReductionResult:
    h1: H1Class
    certificate: RationalFunction


def integrate_poly(f: RationalFunction, v_name: str) -> RationalFunction:
    """Antiderivative in v of a polynomial (in v) rational function."""
    v = f.registry.index(v_name)
    u = UPoly.from_rational(f, v)
    zero = RationalFunction.const(0, f.registry)
    coeffs = [zero] + [c / Fraction(e + 1) for e, c in enumerate(u.coeffs)]
    return UPoly(coeffs, f.registry).to_rational(v)


def reduce(f: RationalFunction, x_name: str) -> ReductionResult:
    """Canonical class of f in K/(d_x K) plus certificate.

    Poles of order >= 2 and the polynomial part move into the certificate;
    simple-pole residues form the class.  Requires x-linear poles.
    """
    reg = f.registry
    x_idx = reg.index(x_name)
    pfd = partial_fractions(f, x_name)
    cert = integrate_poly(pfd.poly_part, x_name)
    x = RationalFunction.from_poly(MultiPoly.var(x_idx), reg)
    residues: dict[RationalFunction, RationalFunction] = {}
    for term in pfd.terms:
        if term.order == 1:
            prev = residues.get(term.pole)
            residues[term.pole] = term.coeff if prev is None else prev + term.coeff
        else:
            m = term.order
            cert = cert - term.coeff / (Fraction(m - 1) * (x - term.pole) ** (m - 1))
    result = ReductionResult(H1Class(residues), cert)
    _check_reduction(f, result, x_name)
    return result


def _check_reduction(f: RationalFunction, result: ReductionResult, x_name: str) -> None:
    reg = f.registry
    total = result.certificate.derive(x_name)
    x = RationalFunction.var(x_name, reg)
    for pole, res in result.h1.residues.items():
        total = total + res / (x - pole)
    if total != f:
        raise AssertionError("reduction identity failed; this is a bug")


def gm_derivative(cls: H1Class, d_name: str) -> H1Class:
    """Parameter action on canonical classes: differentiate residues, drop
    zeros.  Pole-motion terms are exact and disappear."""
    return H1Class({p: r.derive(d_name) for p, r in cls.residues.items()})


@dataclass(frozen=True)
class TelescoperResult:
    operator: LinearDiffOperator
    certificate: RationalFunction
    minimal_certified: bool


def telescoper(b: RationalFunction, x_name: str, t_name: str,
               max_order: int = 8) -> TelescoperResult:
    """Minimal monic D in d_t with D(b) = d_x(certificate).

    Reduces d_t^j b for ascending j and searches for the first k-linear
    dependence of the residue vectors; the ascending search certifies
    minimality within the x-linear-pole domain.
    """
    reg = b.registry
    zero = RationalFunction.const(0, reg)
    one = RationalFunction.const(1, reg)
    derivs = [b]
    reductions: list[ReductionResult] = []
    for n in range(max_order + 1):
        reductions.append(reduce(derivs[n], x_name))
        poles = sorted({p for r in reductions for p in r.h1.residues}, key=_rf_sort_key)
        rows = [[r.h1.residues.get(p, zero) for r in reductions[:n]] for p in poles]
        rhs = [-reductions[n].h1.residues.get(p, zero) for p in poles]
        if not poles:
            rows, rhs = [[zero] * n], [zero]
        sol = linear_solve(rows, rhs, zero, one)
        if not sol.inconsistent:
            relation = list(sol.particular) + [one]
            operator = LinearDiffOperator.from_dependence(t_name, relation)
            cert = zero
            for e_j, r_j in zip(relation, reductions):
                if not e_j.is_zero():
                    cert = cert + e_j * r_j.certificate
            _check_telescoper(operator, b, cert, x_name, t_name)
            return TelescoperResult(operator, cert, minimal_certified=True)
        derivs.append(derivs[n].derive(t_name))
    raise TelescoperNotFound(max_order)


def _check_telescoper(operator: LinearDiffOperator, b: RationalFunction,
                      cert: RationalFunction, x_name: str, t_name: str) -> None:
    applied = b
    derivs = [b]
    for _ in range(operator.order):
        derivs.append(derivs[-1].derive(t_name))
    applied = derivs[operator.order]
    for i, c in enumerate(operator.coeffs):
        applied = applied - c * derivs[i]
    if applied != cert.derive(x_name):
        raise AssertionError("telescoper identity failed; this is a bug")


# -- bivariate exactness: d_t2(f1) - d_t1(f2) = g ---------------------------


@dataclass(frozen=True)
class Exact2FormSolvable:
    f1: RationalFunction
    f2: RationalFunction


@dataclass(frozen=True)
class Exact2FormUnsolvable:
    pole: RationalFunction
    residue: RationalFunction
    residue_class: H1Class


@dataclass(frozen=True)
class Exact2FormUnsupported:
    reason: str


Exact2FormOutcome = Exact2FormSolvable | Exact2FormUnsolvable | Exact2FormUnsupported


def exact2form_solvable(g: RationalFunction, t1_name: str, t2_name: str) -> Exact2FormOutcome:
    """Decide existence of rational f1, f2 with d_t2(f1) - d_t1(f2) = g.

    The polynomial part and higher-order t1-poles of g integrate directly in
    t1; each simple-pole residue must itself be a d_t2-derivative, which is
    the obstruction the residue witness reports.
    """
    reg = g.registry
    i1, i2 = reg.index(t1_name), reg.index(t2_name)
    if not g.variables() <= {i1, i2}:
        return Exact2FormUnsupported("input involves variables besides the two parameters")
    zero = RationalFunction.const(0, reg)
    if g.is_zero():
        return Exact2FormSolvable(zero, zero)
    try:
        pfd = partial_fractions(g, t1_name)
    except NonLinearFactor as exc:
        return Exact2FormUnsupported(f"poles not linear in {t1_name}: {exc}")
    f1 = zero
    f2 = zero - integrate_poly(pfd.poly_part, t1_name)
    t1 = RationalFunction.var(t1_name, reg)
    for term in pfd.terms:
        if term.order >= 2:
            m = term.order
            antider = -term.coeff / (Fraction(m - 1) * (t1 - term.pole) ** (m - 1))
            f2 = f2 - antider
        else:
            try:
                rr = reduce(term.coeff, t2_name)
            except NonLinearFactor as exc:
                return Exact2FormUnsupported(f"residue poles not linear in {t2_name}: {exc}")
            if not rr.h1.is_zero():
                return Exact2FormUnsolvable(term.pole, term.coeff, rr.h1)
            h = rr.certificate
            f1 = f1 + h / (t1 - term.pole)
            dp = term.pole.derive(t2_name)
            if not dp.is_zero():
                f2 = f2 - h * dp / (t1 - term.pole)
    if f1.derive(t2_name) - f2.derive(t1_name) != g:
        raise AssertionError("two-form certificate identity failed; this is a bug")
    return Exact2FormSolvable(f1, f2)
