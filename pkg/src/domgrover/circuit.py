"""Gate-level circuit IR over {H, X, P(angle)} with polarity-annotated controls.

A controlled gate fires only when every control qubit matches its polarity
(``True`` fires on 1, ``False`` fires on 0).  Gates are kept at the top level:
an MCX counts as one gate in :func:`gate_census` and one layer in :func:`depth`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Control = tuple[int, bool]


class CircuitError(ValueError):
    pass


def _normalize_controls(controls: Iterable[int | Control]) -> tuple[Control, ...]:
    out = []
    for c in controls:
        if isinstance(c, tuple):
            q, pol = c
            out.append((int(q), bool(pol)))
        else:
            out.append((int(c), True))
    return tuple(out)


@dataclass(frozen=True)
class Gate:
    """One gate. ``kind`` is ``"h"``, ``"x"`` or ``"p"``; ``angle`` only matters for ``"p"``."""

    kind: str
    target: int
    controls: tuple[Control, ...] = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in ("h", "x", "p"):
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "controls", _normalize_controls(self.controls))
        if self.kind == "h" and self.controls:
            raise CircuitError("controlled H is not part of the gate set")
        qs = [q for q, _ in self.controls]
        if self.target in qs:
            raise CircuitError(f"target {self.target} is also a control")
        if len(set(qs)) != len(qs):
            raise CircuitError(f"repeated control qubit in {qs}")
        if self.target < 0 or any(q < 0 for q in qs):
            raise CircuitError("qubit indices must be non-negative")
        if self.kind != "p" and self.angle:
            object.__setattr__(self, "angle", 0.0)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*(q for q, _ in self.controls), self.target)

    @property
    def is_permutation(self) -> bool:
        return self.kind == "x"

    @property
    def label(self) -> str:
        """Census key: ``H``, ``X``, ``CX``, ``MCX(m)``, ``P``, ``CP``, ``MCP(m)``."""
        base = self.kind.upper()
        m = len(self.controls)
        if m == 0:
            return base
        if m == 1:
            return "C" + base
        return f"MC{base}({m})"

    def adjoint(self) -> Gate:
        if self.kind == "p":
            return Gate("p", self.target, self.controls, -self.angle)
        return self


def h(q: int) -> Gate:
    return Gate("h", q)


def x(q: int) -> Gate:
    return Gate("x", q)


def p(q: int, angle: float) -> Gate:
    return Gate("p", q, angle=angle)


def cx(control: int | Control, target: int) -> Gate:
    return Gate("x", target, (control,))


def mcx(controls: Iterable[int | Control], target: int) -> Gate:
    return Gate("x", target, tuple(controls))


def cp(control: int | Control, target: int, angle: float) -> Gate:
    return Gate("p", target, (control,), angle)


def neg(q: int) -> Control:
    """Control on ``q`` that fires when the qubit is 0."""
    return (q, False)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        object.__setattr__(self, "ops", tuple(self.ops))
        for g in self.ops:
            self._check(g)

    def _check(self, g: Gate) -> None:
        bad = [q for q in g.qubits if q >= self.num_qubits]
        if bad:
            raise CircuitError(f"qubit {bad[0]} out of range for {self.num_qubits}-qubit circuit")

    def append(self, g: Gate) -> Circuit:
        self._check(g)
        return Circuit(self.num_qubits, self.ops + (g,))

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.num_qubits, self.ops + tuple(gates))

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise CircuitError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.ops + other.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def widen(self, num_qubits: int) -> Circuit:
        """Same gates on a wider register."""
        return Circuit(num_qubits, self.ops)

    def remap(self, mapping: Sequence[int], num_qubits: int | None = None) -> Circuit:
        """Relabel qubit ``q`` as ``mapping[q]``."""
        width = self.num_qubits if num_qubits is None else num_qubits
        return Circuit(width, [
            Gate(g.kind, mapping[g.target], tuple((mapping[q], pol) for q, pol in g.controls), g.angle)
            for g in self.ops
        ])


def append_gate(c: Circuit, g: Gate) -> Circuit:
    return c.append(g)


def inverse(c: Circuit) -> Circuit:
    """Reverse the gate order and take each gate's adjoint."""
    return Circuit(c.num_qubits, [g.adjoint() for g in reversed(c.ops)])


def depth(c: Circuit) -> int:
    """ASAP layer count; a gate occupies its target and every control for one layer."""
    level = [0] * c.num_qubits
    best = 0
    for g in c.ops:
        layer = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = layer
        best = max(best, layer)
    return best


def gate_census(c: Circuit) -> Counter[str]:
    """Multiset of top-level gate labels (missing keys read as 0)."""
    return Counter(g.label for g in c.ops)


# --------------------------------------------------------------------------
# Text dump
# --------------------------------------------------------------------------
#
#   qubits <n>
#   <kind> <target> [angle=<float repr>] [ctrl <q>|!<q> ...]
#
# ``!q`` marks a negative control.  Angles use ``repr`` so the dump round-trips.

def dumps(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    for g in c.ops:
        parts = [g.kind, str(g.target)]
        if g.kind == "p":
            parts.append(f"angle={g.angle!r}")
        if g.controls:
            parts.append("ctrl")
            parts += [str(q) if pol else f"!{q}" for q, pol in g.controls]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Circuit:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "qubits" or len(lines[0]) != 2:
        raise CircuitError("dump must start with 'qubits <n>'")
    n = int(lines[0][1])
    gates = []
    for lineno, tokens in enumerate(lines[1:], start=2):
        try:
            kind, target, rest = tokens[0], int(tokens[1]), tokens[2:]
            angle = 0.0
            if rest and rest[0].startswith("angle="):
                angle = float(rest.pop(0)[len("angle="):])
            controls: list[Control] = []
            if rest:
                if rest[0] != "ctrl":
                    raise CircuitError(f"unexpected token {rest[0]!r}")
                for tok in rest[1:]:
                    controls.append((int(tok[1:]), False) if tok.startswith("!") else (int(tok), True))
            gates.append(Gate(kind, target, tuple(controls), angle))
        except (IndexError, ValueError) as exc:
            raise CircuitError(f"line {lineno}: {exc}") from None
    return Circuit(n, gates)
