"""Coefficient-field handles: a uniform way to do arithmetic and apply named
derivations over Q(t,...), differential towers, rebased derivation bases and
function fields of curves.

A field context carries the zero/one elements, embeds plain rational
functions, and knows how to differentiate elements by derivation-symbol name.
Connection systems, operators and solvers are written against this interface
so they run unchanged over every supported field.
"""

from __future__ import annotations

from .exactalg import RationalFunction, VariableRegistry


class FieldContext:
    """Base interface; concrete contexts define `derive`."""

    registry: VariableRegistry
    zero: object
    one: object

    def derive(self, element, symbol: str):
        raise NotImplementedError

    def from_rational(self, f: RationalFunction):
        """Embed a scalar from the parameter field."""
        return f

    def derivation_names(self) -> tuple[str, ...]:
        raise NotImplementedError


class RationalFieldContext(FieldContext):
    """Q(variables) with one partial derivative per derivation symbol."""

    def __init__(self, registry: VariableRegistry, derivations: dict[str, str] | None = None):
        self.registry = registry
        self.zero = RationalFunction.const(0, registry)
        self.one = RationalFunction.const(1, registry)
        names = derivations if derivations is not None else {n: n for n in registry.names()}
        self._vars = {sym: registry.index(var) for sym, var in names.items()}

    def derive(self, element: RationalFunction, symbol: str) -> RationalFunction:
        return element.derive_index(self._vars[symbol])

    def derivation_names(self) -> tuple[str, ...]:
        return tuple(self._vars)


class RebasedFieldContext(FieldContext):
    """Derivations that are field-coefficient combinations of a base context's
    derivations, e.g. d1 = t1*d/dt1, d2 = t1*d/dt1 + d/dt2."""

    def __init__(self, base: FieldContext, combos: dict[str, list[tuple[object, str]]]):
        self.base = base
        self.registry = base.registry
        self.zero = base.zero
        self.one = base.one
        self.combos = combos

    def derive(self, element, symbol: str):
        combo = self.combos.get(symbol)
        if combo is None:
            return self.base.derive(element, symbol)
        total = self.zero
        for coeff, base_sym in combo:
            total = total + coeff * self.base.derive(element, base_sym)
        return total

    def from_rational(self, f: RationalFunction):
        return self.base.from_rational(f)

    def derivation_names(self) -> tuple[str, ...]:
        seen = dict.fromkeys(self.combos)
        for name in self.base.derivation_names():
            seen.setdefault(name)
        return tuple(seen)
