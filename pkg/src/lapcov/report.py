"""Deterministic JSON emission for reports.

Floats are printed with 17 significant digits (full round-trip precision),
dict keys keep insertion order, and lists of scalars stay on one line, so a
given report serializes to identical bytes on every run.
"""

import math


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError("reports must contain finite numbers only")
    if value == 0.0:
        value = 0.0  # canonicalize -0.0
    return "%.17g" % value


def encode_complex(value) -> list:
    z = complex(value)
    return [z.real, z.imag]


def _escape(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _is_scalar(value) -> bool:
    return value is None or isinstance(value, (bool, int, float, str))


def _emit(value, indent: int, lines: list, prefix: str, suffix: str):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            lines.append(f"{pad}{prefix}{{}}{suffix}")
            return
        lines.append(f"{pad}{prefix}{{")
        items = list(value.items())
        for i, (key, item) in enumerate(items):
            comma = "," if i < len(items) - 1 else ""
            _emit(item, indent + 1, lines, f"{_escape(str(key))}: ", comma)
        lines.append(f"{pad}}}{suffix}")
    elif isinstance(value, (list, tuple)):
        value = list(value)
        if all(_is_scalar(v) for v in value):
            body = ", ".join(_scalar(v) for v in value)
            lines.append(f"{pad}{prefix}[{body}]{suffix}")
            return
        lines.append(f"{pad}{prefix}[")
        for i, item in enumerate(value):
            comma = "," if i < len(value) - 1 else ""
            _emit(item, indent + 1, lines, "", comma)
        lines.append(f"{pad}]{suffix}")
    else:
        lines.append(f"{pad}{prefix}{_scalar(value)}{suffix}")


def _scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return _escape(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(report: dict) -> str:
    """Serialize a report to deterministic, pretty-printed JSON (with newline)."""
    lines = []
    _emit(report, 0, lines, "", "")
    return "\n".join(lines) + "\n"
