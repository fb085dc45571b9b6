"""Text descriptors for measures.

Grammar::

    spec  := base [ "+atoms:" atom { "," atom } ]
    base  := "lebesgue" | "arc:" decimal
    atom  := decimal ":" decimal        (angle in radians, positive mass)
"""

from __future__ import annotations

import re

from ..measure import Measure, MeasureError, make_builtin_measure

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class MeasureSpecError(ValueError):
    def __init__(self, message: str, text: str, position: int | None = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where} in measure spec {text!r}")
        self.position = position


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def literal(self, token: str) -> bool:
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.literal(token):
            raise MeasureSpecError(f"expected {token!r}", self.text, self.pos)

    def decimal(self) -> float:
        match = _DECIMAL.match(self.text, self.pos)
        if not match:
            raise MeasureSpecError("expected a decimal number", self.text, self.pos)
        self.pos = match.end()
        return float(match.group())

    def done(self) -> bool:
        return self.pos == len(self.text)


def parse_measure_spec(text: str) -> Measure:
    cur = _Cursor(text.strip())
    if cur.literal("lebesgue"):
        kind, half_width = "lebesgue", None
    elif cur.literal("arc:"):
        kind, half_width = "arc", cur.decimal()
    else:
        raise MeasureSpecError("expected 'lebesgue' or 'arc:<a>'", text, cur.pos)
    atoms = []
    if not cur.done():
        cur.expect("+atoms:")
        while True:
            theta = cur.decimal()
            cur.expect(":")
            atoms.append((theta, cur.decimal()))
            if cur.done():
                break
            cur.expect(",")
    try:
        m = make_builtin_measure(kind, half_width, atoms)
    except MeasureError as exc:
        raise MeasureSpecError(str(exc), text) from exc
    return Measure(m.pieces, m.atoms, m.szego_class, text.strip(), m.arc_half_width)
