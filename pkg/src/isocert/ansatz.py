"""Shared bounded-ansatz utilities: monomial bases and conversion of
rational-function linear identities into Q-linear systems."""

from __future__ import annotations

from fractions import Fraction

from .exactalg import MultiPoly, RationalFunction, VariableRegistry, lcm
from .exactalg.poly import exact_div


def monomials_up_to(var_indices: list[int], bound: int,
                    registry: VariableRegistry) -> list[RationalFunction]:
    """All monomials in the given variables of total degree <= bound."""
    monos = [RationalFunction.const(1, registry)]
    frontier = list(monos)
    for _ in range(bound):
        new_frontier = []
        for m in frontier:
            for idx in var_indices:
                cand = m * RationalFunction.from_poly(MultiPoly.var(idx), registry)
                if cand not in monos:
                    monos.append(cand)
                    new_frontier.append(cand)
        frontier = new_frontier
    return monos


def match_coefficients(columns: list[list[RationalFunction]],
                       rhs: list[RationalFunction]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Turn sum_k z_k * columns[k] == rhs (componentwise rational-function
    identities) into a Q-linear system by clearing denominators and matching
    monomial coefficients."""
    rows: list[list[Fraction]] = []
    out_rhs: list[Fraction] = []
    for e in range(len(rhs)):
        entries = [col[e] for col in columns]
        den = rhs[e].den
        for c in entries:
            den = lcm(den, c.den)
        cleared = [c.num * exact_div(den, c.den) for c in entries]
        cleared_rhs = rhs[e].num * exact_div(den, rhs[e].den)
        monos = set(cleared_rhs.terms)
        for p in cleared:
            monos |= set(p.terms)
        for mono in sorted(monos):
            rows.append([p.terms.get(mono, Fraction(0)) for p in cleared])
            out_rhs.append(cleared_rhs.terms.get(mono, Fraction(0)))
    if not rows:
        # All identities vanished; keep the unknown count visible.
        rows.append([Fraction(0)] * len(columns))
        out_rhs.append(Fraction(0))
    return rows, out_rhs
