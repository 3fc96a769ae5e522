"""Monic linear differential operators in one derivation over Q(parameters).

D = d^n - sum_{i<n} c_i d^i, applied through any field context, so the same
operator acts on rational functions, tower elements and curve elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import RationalFunction
from .fields import FieldContext


@dataclass(frozen=True)
class LinearDiffOperator:
    symbol: str
    coeffs: tuple[RationalFunction, ...]  # c_0, ..., c_{n-1}

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def apply(self, field: FieldContext, element):
        derivs = [element]
        for _ in range(self.order):
            derivs.append(field.derive(derivs[-1], self.symbol))
        total = derivs[self.order]
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                total = total - field.from_rational(c) * derivs[i]
        return total

    def scaled_coefficients(self, factor: RationalFunction) -> list[RationalFunction]:
        """Coefficients [a_0, ..., a_n] of factor * D as a non-monic operator."""
        out = [-(factor * c) for c in self.coeffs]
        out.append(factor)
        return out

    @staticmethod
    def from_dependence(symbol: str, relation: list[RationalFunction]) -> "LinearDiffOperator":
        """Build the monic operator sum relation[j] * d^j with relation[-1] == 1:
        coefficients c_i = -relation[i]."""
        if not relation or not relation[-1].is_one():
            raise ValueError("relation must be monic in its top coefficient")
        return LinearDiffOperator(symbol, tuple(-c for c in relation[:-1]))
