"""Galois-side tooling for integrals: rational solution spaces of monic
operators over Q(t), companion systems whose flatness encodes telescoper
certificates, constancy descriptors, derivation rebasing and horizontal
sections.

Constancy verdicts are relative to Q(t): "nonconstant-over-k" makes no claim
about extensions of the parameter field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ansatz import match_coefficients, monomials_up_to
from .connection import ConnectionSystem
from .curve import CurveSpec, picard_fuchs
from .derham import telescoper
from .difftower import Tower
from .exactalg import (ExactAlgError, MultiPoly, NonLinearFactor,
                       RationalFunction, SingularMatrix, UPoly,
                       linear_poles, linear_solve, lcm, mat_add, mat_inverse,
                       mat_scale, zeros)
from .exactalg.linalg import Matrix
from .exactalg.poly import exact_div
from .fields import FieldContext, RebasedFieldContext
from .operators import LinearDiffOperator


class UnsupportedOperator(ExactAlgError):
    """Rational-solution machinery needs singularities with t-linear factors."""


class SingularRebase(ExactAlgError):
    pass


def _integer_roots(coeffs: list[Fraction]) -> list[int]:
    """Integer roots of sum coeffs[i] * alpha^i."""
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return []
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    zc = [int(c * den) for c in coeffs]
    roots = []
    shift = 0
    while zc[0] == 0:
        if 0 not in roots:
            roots.append(0)
        zc = zc[1:]
        shift += 1
        if not zc:
            return roots
    a0 = abs(zc[0])
    divisors = set()
    d = 1
    while d * d <= a0:
        if a0 % d == 0:
            divisors.add(d)
            divisors.add(a0 // d)
        d += 1
    for cand in sorted(divisors):
        for r in (cand, -cand):
            if sum(c * r ** i for i, c in enumerate(zc)) == 0 and r not in roots:
                roots.append(r)
    return sorted(roots)


def _falling_factorial_poly(i: int) -> list[Fraction]:
    """Coefficients of alpha*(alpha-1)*...*(alpha-i+1)."""
    out = [Fraction(1)]
    for k in range(i):
        nxt = [Fraction(0)] * (len(out) + 1)
        for j, c in enumerate(out):
            nxt[j + 1] += c
            nxt[j] -= c * k
        out = nxt
    return out


def _operator_poly_coeffs(coeffs: list[RationalFunction], t_idx: int,
                          registry) -> list[MultiPoly]:
    """Clear denominators of sum coeffs[i] d^i to polynomial coefficients."""
    den = MultiPoly.one()
    for c in coeffs:
        den = lcm(den, c.den)
    return [c.num * exact_div(den, c.den) for c in coeffs]


def _indicial_at(poly_coeffs: list[MultiPoly], root: RationalFunction,
                 t_idx: int, registry) -> list[Fraction]:
    """Indicial polynomial (in alpha) at a finite point t = root."""
    data = []
    for i, p in enumerate(poly_coeffs):
        if p.is_zero():
            continue
        u = UPoly.from_rational(RationalFunction.from_poly(p, registry), t_idx)
        val = u.eval(root)
        v = 0
        t_shift = UPoly([-root, RationalFunction.const(1, registry)], registry)
        while val.is_zero():
            u, r = u.divmod(t_shift)
            if not r.is_zero():
                raise AssertionError("valuation division failed; this is a bug")
            val = u.eval(root)
            v += 1
        data.append((i, v, val))
    w = min(v - i for i, v, _ in data)
    out = [Fraction(0)]
    for i, v, val in data:
        if v - i != w:
            continue
        if not val.is_const():
            raise UnsupportedOperator("indicial data not rational")
        ff = _falling_factorial_poly(i)
        scaled = [c * val.const_value() for c in ff]
        if len(scaled) > len(out):
            out += [Fraction(0)] * (len(scaled) - len(out))
        for j, c in enumerate(scaled):
            out[j] += c
    return out


def _indicial_at_infinity(poly_coeffs: list[MultiPoly], t_idx: int) -> list[Fraction]:
    delta = None
    for i, p in enumerate(poly_coeffs):
        if p.is_zero():
            continue
        d = p.degree(t_idx) - i
        delta = d if delta is None else max(delta, d)
    out = [Fraction(0)]
    for i, p in enumerate(poly_coeffs):
        if p.is_zero() or p.degree(t_idx) - i != delta:
            continue
        lead = p.coefficient(t_idx, p.degree(t_idx))
        if not lead.is_const():
            raise UnsupportedOperator("leading data not rational")
        ff = _falling_factorial_poly(i)
        scaled = [c * lead.const_value() for c in ff]
        if len(scaled) > len(out):
            out += [Fraction(0)] * (len(scaled) - len(out))
        for j, c in enumerate(scaled):
            out[j] += c
    return out


def rational_solutions(op: LinearDiffOperator, registry) -> list[RationalFunction]:
    """Basis of the rational solutions of op over Q(t).

    Complete when the cleared leading coefficient splits t-linearly over Q;
    richer singularities raise UnsupportedOperator.  Every returned element
    is verified to satisfy op(u) = 0 exactly.
    """
    t_idx = registry.index(op.symbol)
    full = [-c for c in op.coeffs] + [RationalFunction.const(1, registry)]
    for c in full:
        if not c.variables() <= {t_idx}:
            raise UnsupportedOperator("coefficients involve extra variables")
    poly_coeffs = _operator_poly_coeffs(full, t_idx, registry)
    lead = poly_coeffs[-1]
    one = RationalFunction.const(1, registry)
    t = RationalFunction.from_poly(MultiPoly.var(t_idx), registry)
    den = one
    if lead.degree(t_idx) > 0:
        try:
            poles = linear_poles(lead, t_idx, registry)
        except NonLinearFactor as exc:
            raise UnsupportedOperator(str(exc)) from None
        for root, _ in poles:
            indicial = _indicial_at(poly_coeffs, root, t_idx, registry)
            neg = [r for r in _integer_roots(indicial) if r < 0]
            if neg:
                den = den * (t - root) ** (-min(neg))
    # Conjugate: solutions y = z / den with z polynomial.
    field_ctx_coeffs = _compose_with_multiplier(full, one / den, op.symbol, registry)
    conj_polys = _operator_poly_coeffs(field_ctx_coeffs, t_idx, registry)
    inf_ind = _indicial_at_infinity(conj_polys, t_idx)
    nonneg = [r for r in _integer_roots(inf_ind) if r >= 0]
    if not nonneg:
        return []
    bound = max(nonneg)
    monos = [t ** k for k in range(bound + 1)]
    columns = []
    for mono in monos:
        applied = _apply_coeff_list(field_ctx_coeffs, mono, op.symbol)
        columns.append([applied])
    rows, rhs = match_coefficients(columns, [RationalFunction.const(0, registry)])
    sol = linear_solve(rows, rhs, Fraction(0), Fraction(1))
    basis = []
    for vec in sol.nullspace:
        z = RationalFunction.const(0, registry)
        for coeff, mono in zip(vec, monos):
            if coeff != 0:
                z = z + RationalFunction.const(coeff, registry) * mono
        u = z / den
        if not _apply_coeff_list(full, u, op.symbol).is_zero():
            raise AssertionError("rational solution verification failed; this is a bug")
        basis.append(u)
    return basis


def _apply_coeff_list(coeffs: list[RationalFunction], u: RationalFunction,
                      symbol: str) -> RationalFunction:
    total = RationalFunction.const(0, u.registry)
    d = u
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            total = total + c * d
        d = d.derive(symbol)
    return total


def _compose_with_multiplier(coeffs: list[RationalFunction], u: RationalFunction,
                             symbol: str, registry) -> list[RationalFunction]:
    """Coefficients of the operator z -> sum coeffs[i] d^i (u*z)."""
    n = len(coeffs) - 1
    u_derivs = [u]
    for _ in range(n):
        u_derivs.append(u_derivs[-1].derive(symbol))
    out = [RationalFunction.const(0, registry) for _ in range(n + 1)]
    for i, a in enumerate(coeffs):
        if a.is_zero():
            continue
        for j in range(i + 1):
            out[j] = out[j] + a * Fraction(math.comb(i, j)) * u_derivs[i - j]
    return out


# -- companion systems -------------------------------------------------------


def companion_system(op: LinearDiffOperator, b, a, field: FieldContext,
                     x_name: str = "x") -> ConnectionSystem:
    """(n+1) x (n+1) system whose full integrability is exactly the
    certificate identity op(b) = d_x(a): the x-matrix carries b and its
    t-derivatives down the first column, the t-matrix is a shifted companion
    block with bottom row (a, c_0, ..., c_{n-1})."""
    n = op.order
    zero, one = field.zero, field.one
    A_x = zeros(n + 1, n + 1, zero)
    d = b
    for i in range(1, n + 1):
        A_x[i][0] = d
        d = field.derive(d, op.symbol)
    A_t = zeros(n + 1, n + 1, zero)
    for i in range(1, n):
        A_t[i][i + 1] = one
    A_t[n][0] = a
    for i, c in enumerate(op.coeffs):
        A_t[n][i + 1] = field.from_rational(c)
    return ConnectionSystem(field, n + 1, {x_name: A_x, op.symbol: A_t},
                            principal=x_name)


# -- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class GaloisDescriptor:
    operator: LinearDiffOperator
    verdict: str  # "constant" | "nonconstant-over-k"
    rational_basis: tuple[RationalFunction, ...]

    @property
    def constant(self) -> bool:
        return self.verdict == "constant"


def descriptor_from_operator(op: LinearDiffOperator, registry) -> GaloisDescriptor:
    basis = rational_solutions(op, registry)
    if len(basis) > op.order:
        raise AssertionError("solution space exceeds the order; this is a bug")
    verdict = "constant" if len(basis) == op.order else "nonconstant-over-k"
    return GaloisDescriptor(op, verdict, tuple(basis))


def galois_descriptor(b: RationalFunction, x_name: str, t_name: str,
                      max_order: int = 8) -> GaloisDescriptor:
    """Descriptor for the integral of a rational integrand: telescoper first,
    then the rational-solution test."""
    result = telescoper(b, x_name, t_name, max_order)
    return descriptor_from_operator(result.operator, b.registry)


def galois_descriptor_curve(curve: CurveSpec, form_index: int, t_name: str,
                            max_order: int = 4) -> GaloisDescriptor:
    result = picard_fuchs(curve, form_index, t_name, max_order)
    return descriptor_from_operator(result.operator, curve.registry)


def galois_descriptor_tower(tower: Tower, b, op: LinearDiffOperator, a,
                            x_name: str) -> GaloisDescriptor:
    """Descriptor from a user-supplied tower identity op(b) = d_x(a), which
    is verified exactly before the constancy test."""
    applied = op.apply(tower, b)
    if applied != tower.derive(a, x_name):
        raise ValueError("certificate identity fails in the tower")
    return descriptor_from_operator(op, tower.registry)


# -- derivation rebasing ------------------------------------------------------


@dataclass(frozen=True)
class DerivationRebase:
    """New derivations as field-coefficient combinations of old ones:
    new_i = sum_j matrix[i][j] * old_j."""

    new_symbols: tuple[str, ...]
    old_symbols: tuple[str, ...]
    matrix: tuple[tuple[RationalFunction, ...], ...]

    def inverse(self, field: FieldContext) -> "DerivationRebase":
        try:
            inv = mat_inverse([list(row) for row in self.matrix], field.zero, field.one)
        except SingularMatrix:
            raise SingularRebase("rebase matrix is singular") from None
        return DerivationRebase(self.old_symbols, self.new_symbols,
                                tuple(tuple(row) for row in inv))


def rebase_derivations(system: ConnectionSystem, rebase: DerivationRebase) -> ConnectionSystem:
    """Connection matrices transform linearly: A_{new_i} = sum_j R_ij A_{old_j};
    the field context of the result knows how the new symbols act."""
    old = list(rebase.old_symbols)
    for name in old:
        system.matrix(name)
    if system.principal is not None and system.principal in old:
        raise SingularRebase("rebasing the principal symbol is not supported")
    try:
        mat_inverse([list(row) for row in rebase.matrix], system.field.zero,
                    system.field.one)
    except SingularMatrix:
        raise SingularRebase("rebase matrix is singular") from None
    zero = system.field.zero
    out: dict[str, Matrix] = {}
    if system.principal is not None:
        out[system.principal] = system.matrix(system.principal)
    for i, new_name in enumerate(rebase.new_symbols):
        acc = zeros(system.size, system.size, zero)
        for j, old_name in enumerate(old):
            coeff = rebase.matrix[i][j]
            if not coeff.is_zero():
                acc = mat_add(acc, mat_scale(system.matrix(old_name), coeff))
        out[new_name] = acc
    for name in system.symbols():
        if name not in old and name != system.principal:
            out[name] = system.matrix(name)
    combos = {new_name: [(rebase.matrix[i][j], old[j]) for j in range(len(old))
                         if not rebase.matrix[i][j].is_zero()]
              for i, new_name in enumerate(rebase.new_symbols)}
    field = RebasedFieldContext(system.field, combos)
    return ConnectionSystem(field, system.size, out, system.principal)


# -- horizontal sections -------------------------------------------------------


def horizontal_sections(system: ConnectionSystem, symbols: Optional[list[str]] = None,
                        degree_bound: int = 6,
                        variables: Optional[list[str]] = None) -> list[list[RationalFunction]]:
    """Q-basis of polynomial-ansatz solutions of dY = A_d Y for all chosen
    derivations simultaneously; complete only within the degree bound, and
    every returned vector is verified exactly."""
    f = system.field
    reg = f.registry
    syms = symbols if symbols is not None else system.symbols()
    for s in syms:
        system.matrix(s)
    if variables is not None:
        var_idx = [reg.index(v) for v in variables]
    else:
        from .exactalg import VarKind

        var_idx = [i for i in range(len(reg)) if reg.kind(i) == VarKind.PARAMETRIC]
    monos = monomials_up_to(var_idx, degree_bound, reg)
    n = system.size
    zero = f.zero
    unknowns = [(mono, k) for mono in monos for k in range(n)]
    columns = []
    for mono, k in unknowns:
        col = []
        for s in syms:
            A = system.matrix(s)
            dmono = f.derive(mono, s)
            for r in range(n):
                val = (dmono if r == k else zero) - A[r][k] * mono
                col.append(val)
        columns.append(col)
    rhs = [zero] * (len(syms) * n)
    rows, rhs_q = match_coefficients(columns, rhs)
    sol = linear_solve(rows, rhs_q, Fraction(0), Fraction(1))
    basis = []
    for vec in sol.nullspace:
        Y = [RationalFunction.const(0, reg) for _ in range(n)]
        for coeff, (mono, k) in zip(vec, unknowns):
            if coeff != 0:
                Y[k] = Y[k] + RationalFunction.const(coeff, reg) * mono
        for s in syms:
            A = system.matrix(s)
            for r in range(n):
                lhs = f.derive(Y[r], s)
                rhs_val = zero
                for c in range(n):
                    rhs_val = rhs_val + A[r][c] * Y[c]
                if lhs != rhs_val:
                    raise AssertionError("horizontal section verification failed; "
                                         "this is a bug")
        basis.append(Y)
    return basis
