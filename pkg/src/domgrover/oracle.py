"""Grover oracle for "size exactly k and dominating".

Qubits are assigned contiguously: vertex qubits, then one checker per vertex
(counting qubits followed by its ancilla), then the size counter, then the
phase qubit.  For the 6-vertex instance with k = 2 that is q0..q5, q6..q23,
q24..q26 and q27.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .circuit import Circuit, Gate, inverse, mcx
from .counter import CounterSpec, build_checker_readout, build_improved_counter
from .graph import Graph, GraphError, closed_neighborhood

WIDTH_POLICIES = ("exact", "paper_uniform2")


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Checker:
    counting: tuple[int, ...]
    ancilla: int


@dataclass(frozen=True)
class OracleLayout:
    n: int
    k: int
    checkers: tuple[Checker, ...]
    size_counter: tuple[int, ...]
    phase_qubit: int

    @property
    def vertex_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def ancillas(self) -> tuple[int, ...]:
        return tuple(ch.ancilla for ch in self.checkers)

    @property
    def checker_qubit_count(self) -> int:
        return sum(len(ch.counting) + 1 for ch in self.checkers)

    @property
    def total_qubits(self) -> int:
        return self.phase_qubit + 1

    def breakdown(self) -> dict[str, int]:
        return {
            "vertex": self.n,
            "checker": self.checker_qubit_count,
            "size": len(self.size_counter),
            "phase": 1,
            "total": self.total_qubits,
        }

    def roles(self) -> list[str]:
        out = [f"vertex {v}" for v in range(self.n)]
        for i, ch in enumerate(self.checkers):
            out += [f"checker {i} counting {j}" for j in range(len(ch.counting))]
            out.append(f"checker {i} ancilla")
        out += [f"size {j}" for j in range(len(self.size_counter))]
        out.append("phase")
        return out

    def role_of(self, qubit: int) -> str:
        return self.roles()[qubit]

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "k": self.k,
            "total_qubits": self.total_qubits,
            "breakdown": self.breakdown(),
            "roles": {str(q): r for q, r in enumerate(self.roles())},
        })


def checker_width(g: Graph, v: int, k: int, policy: str = "exact") -> int:
    if policy == "paper_uniform2":
        return 2
    if policy != "exact":
        raise LayoutError(f"unknown width policy {policy!r}")
    # Largest reachable count at size k is min(k, |N[v]|); ceil(log2(m + 1)) bits hold it.
    return max(1, min(k, g.degree(v) + 1).bit_length())


def plan_layout(g: Graph, k: int, width_policy: str = "exact") -> OracleLayout:
    if g.n < 1:
        raise LayoutError("graph must have at least one vertex")
    if not 0 < k <= g.n:
        raise LayoutError(f"k must satisfy 0 < k <= {g.n}, got {k}")
    nxt = g.n
    checkers = []
    for v in range(g.n):
        w = checker_width(g, v, k, width_policy)
        checkers.append(Checker(tuple(range(nxt, nxt + w)), nxt + w))
        nxt += w + 1
    ws = g.n.bit_length()
    size_counter = tuple(range(nxt, nxt + ws))
    return OracleLayout(g.n, k, tuple(checkers), size_counter, nxt + ws)


def _check_layout(g: Graph, k: int, layout: OracleLayout) -> None:
    if layout.n != g.n or layout.k != k or len(layout.checkers) != g.n:
        raise LayoutError("layout does not match graph and k")


def build_u_omega(g: Graph, k: int, layout: OracleLayout) -> Circuit:
    """Compute checker ancillas and the size counter from the vertex qubits.

    Each checker readout is split: its ancilla-init X goes first, its
    negative-controlled MCX last, after all counters have run.
    """
    _check_layout(g, k, layout)
    width = layout.total_qubits
    readouts = [build_checker_readout(ch.counting, ch.ancilla, width) for ch in layout.checkers]
    ops: list[Gate] = [r.ops[0] for r in readouts]
    for u in range(g.n):
        for w in closed_neighborhood(g, u):
            spec = CounterSpec(u, layout.checkers[w].counting)
            ops += build_improved_counter(spec, width).ops
    for u in range(g.n):
        ops += build_improved_counter(CounterSpec(u, layout.size_counter), width).ops
    ops += [r.ops[1] for r in readouts]
    return Circuit(width, ops)


def phase_flip_gate(layout: OracleLayout) -> Gate:
    """MCX onto the phase qubit: all ancillas at 1 and the size counter equal to k."""
    controls = [(a, True) for a in layout.ancillas]
    controls += [(q, bool(layout.k >> j & 1)) for j, q in enumerate(layout.size_counter)]
    return mcx(controls, layout.phase_qubit)


def build_oracle(g: Graph, k: int, layout: OracleLayout, *, uncompute: bool = True) -> Circuit:
    """``U_omega``, the phase-kickback MCX, then ``U_omega`` inverse.

    ``uncompute=False`` drops the inverse half; only useful for exercising the
    uncomputation check.
    """
    u = build_u_omega(g, k, layout)
    oracle = u.append(phase_flip_gate(layout))
    return oracle + inverse(u) if uncompute else oracle


def build_instance(g: Graph, k: int, width_policy: str = "exact") -> tuple[OracleLayout, Circuit]:
    try:
        layout = plan_layout(g, k, width_policy)
    except GraphError as exc:
        raise LayoutError(str(exc)) from None
    return layout, build_oracle(g, k, layout)
