"""Dense statevector simulation and reversible basis-state evaluation.

Basis index bit ``i`` is qubit ``i`` (little-endian).  Bitstrings printed for
humans put the highest listed qubit leftmost.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .circuit import Circuit, Gate

if TYPE_CHECKING:
    from .oracle import OracleLayout

DEFAULT_QUBIT_CAP = 26
_SQRT1_2 = 1 / math.sqrt(2)


class SimulationError(ValueError):
    pass


class QubitCapError(SimulationError):
    pass


class NotPermutationError(SimulationError):
    pass


class UncomputationError(SimulationError):
    """A non-vertex qubit was left changed by an oracle for some input."""

    def __init__(self, x: int, qubit: int, role: str, value: int):
        self.x, self.qubit, self.role, self.value = x, qubit, role, value
        super().__init__(
            f"input x={x:#b}: qubit {qubit} ({role}) ends at {value}, expected {value ^ 1}"
        )


class StateVector:
    """``2**num_qubits`` complex amplitudes, owned exclusively by this object."""

    def __init__(self, amplitudes: np.ndarray, *, cap: int = DEFAULT_QUBIT_CAP, allow_large: bool = False):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        q = amps.size.bit_length() - 1
        if amps.size != 1 << q:
            raise SimulationError(f"amplitude count {amps.size} is not a power of two")
        _check_cap(q, cap, allow_large)
        self.num_qubits = q
        self.amplitudes = amps

    @classmethod
    def zeros(cls, num_qubits: int, **kw) -> StateVector:
        return cls.basis(num_qubits, 0, **kw)

    @classmethod
    def basis(cls, num_qubits: int, index: int, **kw) -> StateVector:
        _check_cap(num_qubits, kw.get("cap", DEFAULT_QUBIT_CAP), kw.get("allow_large", False))
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, **kw)

    @classmethod
    def uniform(cls, num_qubits: int, **kw) -> StateVector:
        _check_cap(num_qubits, kw.get("cap", DEFAULT_QUBIT_CAP), kw.get("allow_large", False))
        size = 1 << num_qubits
        return cls(np.full(size, 1 / math.sqrt(size), dtype=np.complex128), **kw)

    def copy(self) -> StateVector:
        out = object.__new__(StateVector)
        out.num_qubits = self.num_qubits
        out.amplitudes = self.amplitudes.copy()
        return out

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_cap(q: int, cap: int, allow_large: bool) -> None:
    if q > cap and not allow_large:
        raise QubitCapError(
            f"{q} qubits exceeds the dense simulation cap of {cap} (pass allow_large=True to override)"
        )


# --------------------------------------------------------------------------
# Gate application
# --------------------------------------------------------------------------

def _apply_gate(psi: np.ndarray, g: Gate, q: int) -> None:
    """Apply ``g`` in place to ``psi`` viewed as a ``(2,)*q`` tensor."""
    # Axis for qubit i is q-1-i under C ordering with little-endian indices.
    idx: list[int | slice] = [slice(None)] * q
    for c, pol in g.controls:
        idx[q - 1 - c] = int(pol)
    t = q - 1 - g.target
    idx[t] = 0
    i0 = tuple(idx)
    idx[t] = 1
    i1 = tuple(idx)
    if g.kind == "x":
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
    elif g.kind == "p":
        psi[i1] *= np.exp(1j * g.angle)
    else:
        a = psi[i0].copy()
        b = psi[i1].copy()
        psi[i0] = (a + b) * _SQRT1_2
        psi[i1] = (a - b) * _SQRT1_2


def apply_circuit(s: StateVector, c: Circuit, *, inplace: bool = False) -> StateVector:
    if c.num_qubits != s.num_qubits:
        raise SimulationError(f"circuit has {c.num_qubits} qubits, state has {s.num_qubits}")
    out = s if inplace else s.copy()
    q = out.num_qubits
    if q == 0:
        return out
    psi = out.amplitudes.reshape((2,) * q)
    for g in c.ops:
        _apply_gate(psi, g, q)
    return out


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense matrix of ``c``; column ``j`` is the image of basis state ``j``."""
    size = 1 << c.num_qubits
    cols = np.empty((size, size), dtype=np.complex128)
    for j in range(size):
        cols[:, j] = apply_circuit(StateVector.basis(c.num_qubits, j), c, inplace=True).amplitudes
    return cols


# --------------------------------------------------------------------------
# Measurement
# --------------------------------------------------------------------------

def _check_subset(qubits: Sequence[int], num_qubits: int) -> list[int]:
    qs = [int(q) for q in qubits]
    if not qs:
        raise SimulationError("qubit subset is empty")
    if len(set(qs)) != len(qs):
        raise SimulationError(f"repeated qubit in subset {qs}")
    if any(not 0 <= q < num_qubits for q in qs):
        raise SimulationError(f"subset {qs} out of range for {num_qubits} qubits")
    return qs


def marginal_probabilities(s: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Outcome distribution over ``qubits``; outcome bit ``j`` is ``qubits[j]``."""
    qs = _check_subset(qubits, s.num_qubits)
    q = s.num_qubits
    probs = s.probabilities().reshape((2,) * q)
    keep = [q - 1 - qb for qb in qs]
    others = tuple(a for a in range(q) if a not in keep)
    marg = probs.sum(axis=others) if others else probs
    # Remaining axes are in ascending axis order; reorder so qubits[-1] is the
    # leading (most significant) axis.
    remaining = sorted(keep)
    order = [remaining.index(keep[j]) for j in reversed(range(len(qs)))]
    return np.transpose(marg, order).reshape(-1)


def format_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass
class Histogram:
    """Measurement counts keyed by bitstring (highest listed qubit leftmost)."""

    width: int
    counts: dict[str, int]

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, key: str) -> int:
        return self.counts.get(key, 0)

    def most_common(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def sorted_items(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items())

    def to_json(self) -> str:
        return json.dumps(dict(self.sorted_items()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bitstring", "count"])
        writer.writerows(self.sorted_items())
        return buf.getvalue()

    def to_ascii(self, bar_width: int = 50) -> str:
        items = self.most_common()
        if not items:
            return ""
        top = items[0][1]
        return "\n".join(
            f"{bits} {'#' * max(1, round(bar_width * cnt / top))} {cnt}" for bits, cnt in items
        )

    @classmethod
    def from_json(cls, text: str) -> Histogram:
        counts = {str(k): int(v) for k, v in json.loads(text).items()}
        width = len(next(iter(counts))) if counts else 0
        return cls(width, counts)


def sample_from_probabilities(probs: np.ndarray, width: int, shots: int, seed: int) -> Histogram:
    if shots < 1:
        raise SimulationError("shots must be positive")
    p = np.clip(np.asarray(probs, dtype=np.float64), 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    draws = rng.multinomial(shots, p)
    return Histogram(width, {format_bits(i, width): int(c) for i, c in enumerate(draws) if c})


def sample_counts(s: StateVector, qubits: Sequence[int], shots: int, seed: int) -> Histogram:
    """Seeded multinomial draw over the marginal of ``qubits`` (PCG64 via numpy)."""
    probs = marginal_probabilities(s, qubits)
    return sample_from_probabilities(probs, len(probs).bit_length() - 1, shots, seed)


# --------------------------------------------------------------------------
# Reversible evaluation
# --------------------------------------------------------------------------

def _compile_permutation(c: Circuit, phase_qubit: int | None) -> list[tuple[int, int, int]]:
    """Lower each gate to ``(control_mask, control_value, target)``."""
    compiled = []
    for g in c.ops:
        if not g.is_permutation:
            raise NotPermutationError(f"gate {g.label} on qubit {g.target} is not a permutation gate")
        mask = val = 0
        for q, pol in g.controls:
            if q == phase_qubit:
                raise NotPermutationError(f"phase qubit {q} is used as a control")
            mask |= 1 << q
            val |= int(pol) << q
        compiled.append((mask, val, g.target))
    return compiled


def reversible_eval(c: Circuit, bits: int, phase_qubit: int | None = None) -> tuple[int, int]:
    """Run a permutation circuit on a basis input.

    The phase qubit is treated as held in |->: each X that reaches it leaves
    its bit alone and multiplies the phase by -1.  Returns ``(bits, parity)``.
    """
    compiled = _compile_permutation(c, phase_qubit)
    parity = 1
    for mask, val, t in compiled:
        if bits & mask == val:
            if t == phase_qubit:
                parity = -parity
            else:
                bits ^= 1 << t
    return bits, parity


@dataclass(frozen=True)
class PhaseTable:
    n: int
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=bool)
        if t.shape != (1 << self.n,):
            raise SimulationError(f"phase table must have {1 << self.n} entries")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def marked(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.table)]

    @property
    def count(self) -> int:
        return int(self.table.sum())

    def signs(self) -> np.ndarray:
        return np.where(self.table, -1.0, 1.0)


def extract_phase_table(oracle: Circuit, layout: OracleLayout) -> PhaseTable:
    """Evaluate ``oracle`` on every vertex input with all other qubits at 0.

    Evaluates all ``2**n`` inputs at once as a vector of basis indices.  Raises
    :class:`UncomputationError` for the smallest input that leaves any
    non-phase qubit changed.
    """
    if oracle.num_qubits != layout.total_qubits:
        raise SimulationError("oracle width does not match layout")
    compiled = _compile_permutation(oracle, layout.phase_qubit)
    inputs = np.arange(1 << layout.n, dtype=np.uint64)
    states = inputs.copy()
    parity = np.zeros(inputs.size, dtype=bool)
    for mask, val, t in compiled:
        fire = (states & np.uint64(mask)) == np.uint64(val)
        if t == layout.phase_qubit:
            parity ^= fire
        else:
            states ^= fire.astype(np.uint64) << np.uint64(t)
    bad = np.flatnonzero(states != inputs)
    if bad.size:
        x = int(bad[0])
        diff = int(states[x]) ^ x
        qubit = (diff & -diff).bit_length() - 1
        raise UncomputationError(x, qubit, layout.role_of(qubit), int(states[x]) >> qubit & 1)
    return PhaseTable(layout.n, parity)
