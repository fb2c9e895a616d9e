import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from domgrover.circuit import (
    Circuit,
    CircuitError,
    Gate,
    append_gate,
    cp,
    cx,
    depth,
    dumps,
    gate_census,
    h,
    inverse,
    loads,
    mcx,
    neg,
    p,
    x,
)
from domgrover.counter import CounterSpec, build_improved_counter
from domgrover.sim import StateVector, apply_circuit


@st.composite
def circuits(draw, max_qubits=6, max_gates=25, permutation_only=False):
    nq = draw(st.integers(1, max_qubits))
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        kinds = ["x"] if permutation_only else ["h", "x", "p"]
        kind = draw(st.sampled_from(kinds))
        target = draw(st.integers(0, nq - 1))
        others = [q for q in range(nq) if q != target]
        controls = ()
        if kind != "h" and others:
            picked = draw(st.lists(st.sampled_from(others), unique=True, max_size=min(3, len(others))))
            controls = tuple((q, draw(st.booleans())) for q in picked)
        angle = draw(st.floats(-math.pi, math.pi)) if kind == "p" else 0.0
        gates.append(Gate(kind, target, controls, angle))
    return Circuit(nq, gates)


class TestGate:
    def test_self_control_rejected(self):
        with pytest.raises(CircuitError):
            cx(0, 0)

    def test_repeated_control_rejected(self):
        with pytest.raises(CircuitError):
            mcx([1, (1, False)], 0)

    def test_controlled_h_rejected(self):
        with pytest.raises(CircuitError):
            Gate("h", 0, ((1, True),))

    def test_labels(self):
        assert [g.label for g in (h(0), x(0), p(0, 1.0), cx(1, 0), mcx([1, 2], 0), cp(1, 0, 0.5))] == [
            "H", "X", "P", "CX", "MCX(2)", "CP"
        ]
        assert cx(neg(1), 0).label == "CX"


class TestAppend:
    def test_append(self):
        c = append_gate(Circuit(2), h(0))
        assert c.ops == (h(0),)
        c = append_gate(c, cx(0, 1))
        assert c.ops == (h(0), cx(0, 1))

    def test_append_out_of_range(self):
        with pytest.raises(CircuitError):
            Circuit(2).append(x(2))

    def test_immutable(self):
        c = Circuit(1)
        c.append(h(0))
        assert len(c) == 0


class TestInverse:
    def test_examples(self):
        assert inverse(Circuit(1, [h(0)])).ops == (h(0),)
        assert inverse(Circuit(2, [x(0), cx(0, 1)])).ops == (cx(0, 1), x(0))
        assert inverse(Circuit(2, [cp(0, 1, 0.3)])).ops == (cp(0, 1, -0.3),)

    @given(circuits())
    def test_involution(self, c):
        assert inverse(inverse(c)) == c

    @given(circuits(permutation_only=True))
    def test_census_preserved(self, c):
        assert gate_census(inverse(c)) == gate_census(c)

    @given(circuits(), st.integers(0, 2**32 - 1))
    def test_round_trip_simulation(self, c, seed):
        rng = np.random.default_rng(seed)
        amps = rng.normal(size=1 << c.num_qubits) + 1j * rng.normal(size=1 << c.num_qubits)
        s = StateVector(amps / np.linalg.norm(amps))
        back = apply_circuit(apply_circuit(s, c), inverse(c))
        np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-10)


class TestDepth:
    def test_examples(self):
        assert depth(Circuit(2, [h(0), h(1)])) == 1
        assert depth(Circuit(2, [h(0), cx(0, 1)])) == 2
        assert depth(Circuit(3)) == 0

    def test_improved_counter(self):
        assert depth(build_improved_counter(CounterSpec(0, (1, 2, 3)))) == 3

    @given(circuits(), st.randoms())
    def test_bounded_and_relabel_invariant(self, c, rnd):
        assert depth(c) <= len(c)
        perm = list(range(c.num_qubits))
        rnd.shuffle(perm)
        assert depth(c.remap(perm)) == depth(c)


class TestCensus:
    def test_examples(self):
        assert gate_census(Circuit(2, [h(0), x(1), x(1)])) == Counter({"H": 1, "X": 2})
        assert gate_census(Circuit(2))["X"] == 0

    def test_improved_counter(self):
        census = gate_census(build_improved_counter(CounterSpec(0, (1, 2, 3))))
        assert census == Counter({"CX": 1, "MCX(2)": 1, "MCX(3)": 1})
        assert census["X"] == 0


class TestDump:
    def test_format(self):
        c = Circuit(3, [h(0), mcx([0, neg(1)], 2), cp(2, 0, 0.25)])
        assert dumps(c) == "qubits 3\nh 0\nx 2 ctrl 0 !1\np 0 angle=0.25 ctrl 2\n"

    @given(circuits())
    def test_round_trip(self, c):
        assert loads(dumps(c)) == c

    def test_bad_dump(self):
        with pytest.raises(CircuitError):
            loads("h 0\n")
        with pytest.raises(CircuitError, match="line 2"):
            loads("qubits 2\nx 0 foo 1\n")
