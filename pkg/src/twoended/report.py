"""Line-oriented ``key: value`` reports with a stable key order."""

from __future__ import annotations

from numbers import Rational


def render_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Rational) and not isinstance(x, int):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(c, int) for c in x):
        return f"{x[0]},{x[1]}"
    if isinstance(x, (list, tuple)):
        return "[" + " ".join(render_value(c) for c in x) + "]"
    return str(x)


def format_report(title: str, items) -> str:
    lines = [f"report: {title}"]
    for key, value in items:
        lines.append(f"{key}: {render_value(value)}")
    return "\n".join(lines) + "\n"
