"""Controlled cyclic counters and the checker readout.

Both counter builders implement the same map on ``(c, a)``: when the control
``c`` is 1 the counting register goes ``a -> (a + 1) mod 2**w``, otherwise it
is untouched.  They differ only in gate layout:

* improved: MCX cascade from the top bit down, ending with ``CX(c, a0)``;
  no X gates, depth ``w``.
* baseline: bits updated bottom-up, each lower bit X-flipped after its update
  so it can act as a positive control for the next carry, then restored;
  ``2w - 2`` X gates, depth ``2w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Counter as CounterT, Sequence

from .circuit import Circuit, cx, depth, gate_census, mcx, neg, x


class CounterError(ValueError):
    pass


@dataclass(frozen=True)
class CounterSpec:
    control: int
    counting: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counting", tuple(self.counting))
        qs = (self.control, *self.counting)
        if not self.counting:
            raise CounterError("counter needs at least one counting qubit")
        if len(set(qs)) != len(qs):
            raise CounterError(f"counter qubits must be distinct, got {qs}")
        if min(qs) < 0:
            raise CounterError("qubit indices must be non-negative")

    @property
    def width(self) -> int:
        return len(self.counting)

    @property
    def span(self) -> int:
        return max(self.control, *self.counting) + 1


def _width(spec: CounterSpec, num_qubits: int | None) -> int:
    return spec.span if num_qubits is None else num_qubits


def build_improved_counter(spec: CounterSpec, num_qubits: int | None = None) -> Circuit:
    c, a = spec.control, spec.counting
    ops = [mcx((c, *a[:i]), a[i]) for i in range(spec.width - 1, 0, -1)]
    ops.append(cx(c, a[0]))
    return Circuit(_width(spec, num_qubits), ops)


def build_baseline_counter(spec: CounterSpec, num_qubits: int | None = None) -> Circuit:
    c, a = spec.control, spec.counting
    w = spec.width
    ops = [cx(c, a[0])]
    for i in range(1, w):
        # a[0..i-1] hold the pre-increment bits when c = 1.
        ops.append(x(a[i - 1]))
        ops.append(mcx((c, *a[:i]), a[i]))
    ops += [x(q) for q in a[: w - 1]]
    return Circuit(_width(spec, num_qubits), ops)


def build_checker_readout(counting: Sequence[int], ancilla: int, num_qubits: int | None = None) -> Circuit:
    """Ancilla ends at 1 iff the counter is nonzero (starting from ancilla 0)."""
    counting = tuple(counting)
    if ancilla in counting:
        raise CounterError(f"ancilla {ancilla} overlaps the counting register")
    if not counting:
        raise CounterError("readout needs at least one counting qubit")
    width = max(ancilla, *counting) + 1 if num_qubits is None else num_qubits
    return Circuit(width, [x(ancilla), mcx([neg(q) for q in counting], ancilla)])


@dataclass(frozen=True)
class CounterComparison:
    width: int
    x_delta: int
    depth_delta: int
    census_baseline: CounterT[str]
    census_improved: CounterT[str]
    depth_baseline: int
    depth_improved: int


def compare_counters(w: int) -> CounterComparison:
    """Baseline minus improved X-gate count and depth for a width-``w`` counter."""
    if w < 2:
        raise CounterError("counter comparison needs width >= 2")
    spec = CounterSpec(0, tuple(range(1, w + 1)))
    base, imp = build_baseline_counter(spec), build_improved_counter(spec)
    cb, ci = gate_census(base), gate_census(imp)
    db, di = depth(base), depth(imp)
    return CounterComparison(w, cb["X"] - ci["X"], db - di, cb, ci, db, di)
