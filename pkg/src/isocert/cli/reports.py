"""Reports: one structured payload with deterministic dual rendering
(human-readable text and stable-key JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from ..exactalg import RationalFunction, format_rational
from ..exactalg.linalg import Matrix


@dataclass
class Report:
    command: str = ""
    payload: dict = dc_field(default_factory=dict)

    def set(self, key: str, value) -> "Report":
        self.payload[key] = value
        return self


def matrix_text(mat: Matrix) -> list[list[str]]:
    return [[value_text(e) for e in row] for row in mat]


def value_text(value) -> str:
    if isinstance(value, RationalFunction):
        return format_rational(value)
    if hasattr(value, "even") and hasattr(value, "odd"):
        even = format_rational(value.even)
        odd = format_rational(value.odd)
        if value.odd.is_zero():
            return even
        if value.even.is_zero():
            return f"({odd})*w"
        return f"{even} + ({odd})*w"
    return str(value)


def operator_text(op) -> str:
    """Monic operator rendered in the expression grammar, e.g.
    Dt^2 + ((2*t-1)/(t*(t-1)))*Dt + 1/(4*t*(t-1))."""
    head = f"D{op.symbol}"
    n = op.order
    if n == 0:
        return "1"
    parts = [f"{head}^{n}" if n > 1 else head]
    for i in range(n - 1, -1, -1):
        c = -op.coeffs[i]
        if c.is_zero():
            continue
        text = format_rational(c)
        wrapped = text if _atomic(text) else f"({text})"
        if i == 0:
            parts.append(text if _atomic(text) else f"({text})")
        elif i == 1:
            parts.append(f"{wrapped}*{head}")
        else:
            parts.append(f"{wrapped}*{head}^{i}")
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-") and _atomic(p):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def _atomic(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and (ch in "+*" or (ch == "-" and i > 0)):
            return False
    return True


def emit_report(report: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(report.payload, sort_keys=True, indent=2)
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    lines: list[str] = []
    if report.command:
        lines.append(f"== {report.command} ==")
    _render(report.payload, lines, indent=0)
    return "\n".join(lines) if lines else "(empty report)"


def _render(obj, lines: list[str], indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                _render(value, lines, indent + 1)
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(obj, list):
        if obj and all(isinstance(r, list) for r in obj):
            for row in obj:
                lines.append(pad + "[ " + "  ".join(str(e) for e in row) + " ]")
        else:
            for item in obj:
                if isinstance(item, (dict, list)):
                    _render(item, lines, indent)
                    lines.append("")
                else:
                    lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
