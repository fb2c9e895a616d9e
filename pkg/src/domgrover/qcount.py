"""Quantum counting: phase estimation of the Grover iterate.

The iterate ``G = D O`` rotates by ``2 theta`` in the plane spanned by the
marked and unmarked uniform states, with ``sin(theta)**2 = M / N``.  Its
eigenphases are ``+-theta / pi`` (in turns), so an outcome ``y`` on ``t``
counting qubits estimates ``M ~ N sin(pi y / 2**t)**2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, cp, cx, h, inverse
from .graph import Graph, enumerate_dominating_sets
from .grover import grover_iterate_matrix
from .oracle import build_instance
from .sim import (
    DEFAULT_QUBIT_CAP,
    Histogram,
    PhaseTable,
    QubitCapError,
    StateVector,
    apply_circuit,
    extract_phase_table,
    marginal_probabilities,
    sample_from_probabilities,
)


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class CountingConfig:
    t: int = 7
    shots: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.t < 1:
            raise CountingError(f"need at least one counting qubit, got t={self.t}")
        if self.shots < 1:
            raise CountingError("shots must be positive")


def build_qft(t: int, num_qubits: int | None = None) -> Circuit:
    """QFT on qubits ``0..t-1``: ``|x> -> sum_y exp(2 pi i x y / 2**t) |y> / sqrt(2**t)``."""
    ops: list[Gate] = []
    for j in reversed(range(t)):
        ops.append(h(j))
        for m in reversed(range(j)):
            ops.append(cp(m, j, math.pi / 2 ** (j - m)))
    for i in range(t // 2):
        a, b = i, t - 1 - i
        ops += [cx(a, b), cx(b, a), cx(a, b)]
    return Circuit(t if num_qubits is None else num_qubits, ops)


def build_inverse_qft(t: int, num_qubits: int | None = None) -> Circuit:
    return inverse(build_qft(t, num_qubits))


def estimate_from_phase(y: int, t: int, N: int) -> float:
    if not 0 <= y < 2**t:
        raise CountingError(f"outcome {y} outside 0..{2**t - 1}")
    return N * math.sin(math.pi * y / 2**t) ** 2


def rounding_mass(probs: np.ndarray, t: int, N: int, M: int) -> float:
    """Probability that ``round(estimate_from_phase(y))`` equals ``M``."""
    est = np.array([estimate_from_phase(y, t, N) for y in range(2**t)])
    return float(probs[np.round(est) == M].sum())


@dataclass
class CountingResult:
    t: int
    N: int
    histogram: Histogram
    probabilities: np.ndarray
    M_estimates: dict[int, float]
    M_rounded_mode: int
    classical_M: int

    def rounding_mass(self, M: int) -> float:
        """Exact probability of outcomes whose rounded estimate equals ``M``."""
        return rounding_mass(self.probabilities, self.t, self.N, M)

    def outcome_counts(self) -> dict[int, int]:
        return {int(bits, 2): c for bits, c in self.histogram.counts.items()}

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "histogram": {str(y): c for y, c in sorted(self.outcome_counts().items())},
            "M_estimates": {str(y): v for y, v in sorted(self.M_estimates.items())},
            "M_rounded_mode": self.M_rounded_mode,
            "classical_M": self.classical_M,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def phase_estimation_distribution(table: PhaseTable, t: int, cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Exact outcome distribution of quantum counting for a verified phase table."""
    n, T = table.n, 1 << t
    if n + t > cap:
        raise QubitCapError(f"counting needs {n + t} qubits, cap is {cap}")
    gpow = grover_iterate_matrix(table)
    # Index = register * T + y, so rows are register values and columns outcomes.
    psi = np.full((1 << n, T), 1 / math.sqrt((1 << n) * T), dtype=np.complex128)
    ys = np.arange(T)
    for j in range(t):
        cols = (ys >> j) & 1 == 1
        psi[:, cols] = gpow @ psi[:, cols]
        gpow = gpow @ gpow
    state = StateVector(psi.reshape(-1), cap=cap)
    apply_circuit(state, build_inverse_qft(t, n + t), inplace=True)
    return marginal_probabilities(state, range(t))


def counting_distribution(g: Graph, k: int, t: int, width_policy: str = "exact",
                          cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Exact distribution over ``t``-bit outcomes for the (g, k) oracle, before sampling."""
    if t < 1:
        raise CountingError(f"need at least one counting qubit, got t={t}")
    if g.n + t > cap:
        raise QubitCapError(f"counting needs {g.n + t} qubits, cap is {cap}")
    layout, oracle = build_instance(g, k, width_policy)
    return phase_estimation_distribution(extract_phase_table(oracle, layout), t, cap)


def run_quantum_counting(g: Graph, k: int, cfg: CountingConfig, width_policy: str = "exact") -> CountingResult:
    N = 1 << g.n
    probs = counting_distribution(g, k, cfg.t, width_policy)
    histogram = sample_from_probabilities(probs, cfg.t, cfg.shots, cfg.seed)
    counts = {int(bits, 2): c for bits, c in histogram.counts.items()}
    estimates = {y: estimate_from_phase(y, cfg.t, N) for y in sorted(counts)}
    mode_y = min(counts, key=lambda y: (-counts[y], y))
    return CountingResult(
        t=cfg.t,
        N=N,
        histogram=histogram,
        probabilities=probs,
        M_estimates=estimates,
        M_rounded_mode=round(estimates[mode_y]),
        classical_M=len(enumerate_dominating_sets(g, k)),
    )
