"""Diffuser, iteration planning, and Grover runs for the dominating set oracle.

Two execution modes:

``compressed``
    Extract the oracle's phase table by reversible evaluation (which also
    verifies uncomputation), then simulate only the ``n`` vertex qubits with a
    diagonal +-1 oracle.  Exact, because a verified oracle acts on the vertex
    register as exactly that diagonal.
``dense``
    Simulate every qubit of the full circuit.  Bounded by the dense cap.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, h, mcx, x
from .graph import Graph, enumerate_dominating_sets
from .oracle import OracleLayout, build_instance
from .sim import (
    DEFAULT_QUBIT_CAP,
    Histogram,
    PhaseTable,
    StateVector,
    apply_circuit,
    circuit_unitary,
    extract_phase_table,
    marginal_probabilities,
    sample_from_probabilities,
)

log = logging.getLogger(__name__)

MODES = ("compressed", "dense")


class GroverError(ValueError):
    pass


def build_diffuser(vertex_qubits: Sequence[int], num_qubits: int | None = None) -> Circuit:
    """Reflection about the uniform state on ``vertex_qubits`` (up to global phase -1)."""
    qs = list(vertex_qubits)
    if not qs:
        raise GroverError("diffuser needs at least one qubit")
    width = max(qs) + 1 if num_qubits is None else num_qubits
    last, rest = qs[-1], qs[:-1]
    ops: list[Gate] = [h(q) for q in qs] + [x(q) for q in qs]
    ops += [h(last), mcx(rest, last) if rest else x(last), h(last)]
    ops += [x(q) for q in qs] + [h(q) for q in qs]
    return Circuit(width, ops)


def iteration_count(N: int, M: int) -> int:
    if not 1 <= M <= N:
        raise GroverError(f"iteration count needs 1 <= M <= N, got M={M}, N={N}")
    return math.floor(math.pi / 4 * math.sqrt(N / M))


def success_probability(N: int, M: int, r: int) -> float:
    """Ideal probability of measuring one of ``M`` marked items after ``r`` iterations."""
    theta = math.asin(math.sqrt(M / N))
    return math.sin((2 * r + 1) * theta) ** 2


def diffuser_matrix(n: int) -> np.ndarray:
    """Unitary of the diffuser circuit with its global phase fixed so ``D|s> = |s>``."""
    d = circuit_unitary(build_diffuser(range(n)))
    s = np.full(1 << n, 1 / math.sqrt(1 << n))
    return d / (s @ d @ s)


def grover_iterate_matrix(table: PhaseTable) -> np.ndarray:
    """Dense ``D @ O`` on the vertex register, phase-normalized as in :func:`diffuser_matrix`.

    The global phase matters once the iterate is controlled (quantum counting).
    """
    return diffuser_matrix(table.n) * table.signs()[None, :]


@dataclass(frozen=True)
class GroverPlan:
    N: int
    M: int
    r: int | None
    mode: str = "compressed"
    shots: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise GroverError(f"unknown mode {self.mode!r}")
        if not 0 <= self.M <= self.N:
            raise GroverError(f"M={self.M} outside 0..{self.N}")
        if self.shots < 1:
            raise GroverError("shots must be positive")
        if self.r is not None and self.r < 0:
            raise GroverError("repetitions must be non-negative")

    @classmethod
    def make(cls, n: int, M: int, reps: int | None = None, **kw) -> GroverPlan:
        N = 1 << n
        if reps is not None:
            r = reps
        elif M == 0:
            r = None
        else:
            r = iteration_count(N, M)
        return cls(N, M, r, **kw)

    @property
    def degenerate(self) -> bool:
        return self.M == 0

    def as_dict(self) -> dict:
        return {"N": self.N, "M": self.M, "r": self.r, "mode": self.mode, "shots": self.shots, "seed": self.seed}


@dataclass
class GroverResult:
    plan: GroverPlan
    layout: OracleLayout
    histogram: Histogram
    probabilities: np.ndarray
    solutions: list[str]
    exact_target_mass: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.as_dict(),
            "exact_target_mass": self.exact_target_mass,
            "histogram": dict(self.histogram.sorted_items()),
            "solutions": self.solutions,
            "qubits": self.layout.breakdown(),
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def compressed_grover_states(table: PhaseTable, reps: int) -> list[np.ndarray]:
    """Vertex-register amplitudes after 0, 1, ..., ``reps`` iterations."""
    signs = table.signs()
    diffuser = build_diffuser(range(table.n))
    state = StateVector.uniform(table.n)
    out = [state.amplitudes.copy()]
    for _ in range(reps):
        state.amplitudes *= signs
        apply_circuit(state, diffuser, inplace=True)
        out.append(state.amplitudes.copy())
    return out


def build_grover_circuit(g: Graph, k: int, layout: OracleLayout, oracle: Circuit, reps: int) -> Circuit:
    """Full circuit: H on vertex qubits, |-> on the phase qubit, then ``reps`` x (oracle; diffuser)."""
    width = layout.total_qubits
    prep = [h(q) for q in layout.vertex_qubits] + [x(layout.phase_qubit), h(layout.phase_qubit)]
    diffuser = build_diffuser(layout.vertex_qubits, width)
    circuit = Circuit(width, prep)
    for _ in range(reps):
        circuit = circuit + oracle + diffuser
    return circuit


def run_grover(
    g: Graph,
    k: int,
    *,
    mode: str = "compressed",
    reps: int | None = None,
    shots: int = 1000,
    seed: int = 0,
    width_policy: str = "exact",
    dense_cap: int = DEFAULT_QUBIT_CAP,
    allow_large: bool = False,
    m_source: str = "classical",
    counting_qubits: int = 7,
) -> GroverResult:
    """Search for size-``k`` dominating sets of ``g``.

    ``M`` comes from classical enumeration unless ``m_source="qcount"``, in
    which case the rounded quantum-counting estimate is used.  With ``M = 0``
    and no ``reps`` override the run samples the uniform state and records a
    note instead of failing.
    """
    layout, oracle = build_instance(g, k, width_policy)
    solutions = [s.mask for s in enumerate_dominating_sets(g, k)]
    notes: list[str] = []

    if m_source == "classical":
        M = len(solutions)
    elif m_source == "qcount":
        from .qcount import CountingConfig, run_quantum_counting

        M = run_quantum_counting(g, k, CountingConfig(counting_qubits, shots, seed), width_policy).M_rounded_mode
    else:
        raise GroverError(f"unknown M source {m_source!r}")

    plan = GroverPlan.make(g.n, M, reps, mode=mode, shots=shots, seed=seed)
    r = plan.r or 0
    if plan.degenerate and reps is None:
        msg = "no solutions - output uniform"
        log.warning("%s (n=%d, k=%d)", msg, g.n, k)
        notes.append(msg)

    if mode == "compressed":
        table = extract_phase_table(oracle, layout)
        probs = np.abs(compressed_grover_states(table, r)[-1]) ** 2
    else:
        circuit = build_grover_circuit(g, k, layout, oracle, r)
        state = StateVector.zeros(layout.total_qubits, cap=dense_cap, allow_large=allow_large)
        apply_circuit(state, circuit, inplace=True)
        probs = marginal_probabilities(state, layout.vertex_qubits)

    histogram = sample_from_probabilities(probs, g.n, shots, seed)
    mass = float(probs[solutions].sum()) if solutions else 0.0
    return GroverResult(
        plan=plan,
        layout=layout,
        histogram=histogram,
        probabilities=probs,
        solutions=[format(m, f"0{g.n}b") for m in solutions],
        exact_target_mass=mass,
        notes=notes,
    )
