import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from domgrover.circuit import Circuit, Gate, cx, h, mcx, neg, p, x
from domgrover.graph import Graph, dominating_predicate
from domgrover.oracle import build_oracle, plan_layout
from domgrover.sim import (
    Histogram,
    NotPermutationError,
    QubitCapError,
    SimulationError,
    StateVector,
    UncomputationError,
    apply_circuit,
    circuit_unitary,
    extract_phase_table,
    marginal_probabilities,
    reversible_eval,
    sample_counts,
)

from test_circuit import circuits

S2 = 1 / math.sqrt(2)


def gate_matrix(g: Gate, nq: int) -> np.ndarray:
    """Reference: build the full matrix entry by entry from the gate definition."""
    size = 1 << nq
    base = {"h": np.array([[S2, S2], [S2, -S2]]), "x": np.array([[0, 1], [1, 0]]),
            "p": np.diag([1, np.exp(1j * g.angle)])}[g.kind]
    m = np.zeros((size, size), dtype=complex)
    for col in range(size):
        if all((col >> q & 1) == int(pol) for q, pol in g.controls):
            b = col >> g.target & 1
            for nb in (0, 1):
                row = (col & ~(1 << g.target)) | (nb << g.target)
                m[row, col] += base[nb, b]
        else:
            m[col, col] = 1
    return m


class TestApply:
    def test_h(self):
        s = apply_circuit(StateVector.zeros(1), Circuit(1, [h(0)]))
        np.testing.assert_allclose(s.amplitudes, [S2, S2])

    def test_x(self):
        s = apply_circuit(StateVector.zeros(1), Circuit(1, [x(0)]))
        np.testing.assert_allclose(s.amplitudes, [0, 1])

    def test_negative_control_fires_on_zero(self):
        s = apply_circuit(StateVector.zeros(2), Circuit(2, [cx(neg(0), 1)]))
        np.testing.assert_allclose(s.amplitudes, [0, 0, 1, 0])

    def test_width_mismatch(self):
        with pytest.raises(SimulationError):
            apply_circuit(StateVector.zeros(2), Circuit(3))

    def test_input_untouched(self):
        s = StateVector.zeros(1)
        apply_circuit(s, Circuit(1, [x(0)]))
        assert s.amplitudes[0] == 1

    @settings(max_examples=150)
    @given(circuits(max_qubits=4, max_gates=1))
    def test_single_gates_match_reference(self, c):
        want = np.eye(1 << c.num_qubits, dtype=complex)
        for g in c.ops:
            want = gate_matrix(g, c.num_qubits) @ want
        np.testing.assert_allclose(circuit_unitary(c), want, atol=1e-12)

    @given(circuits(), st.integers(0, 2**32 - 1))
    def test_normalization(self, c, seed):
        rng = np.random.default_rng(seed)
        amps = rng.normal(size=1 << c.num_qubits) + 1j * rng.normal(size=1 << c.num_qubits)
        s = apply_circuit(StateVector(amps / np.linalg.norm(amps)), c)
        assert abs(s.norm() - 1) < 1e-10

    def test_cap(self):
        with pytest.raises(QubitCapError):
            StateVector.zeros(27)
        with pytest.raises(QubitCapError):
            StateVector.zeros(5, cap=4)
        assert StateVector.zeros(5, cap=4, allow_large=True).num_qubits == 5


class TestMarginals:
    def test_bell(self):
        s = StateVector(np.array([S2, 0, 0, S2]))
        np.testing.assert_allclose(marginal_probabilities(s, [0]), [0.5, 0.5])

    def test_one(self):
        np.testing.assert_allclose(marginal_probabilities(StateVector.basis(1, 1), [0]), [0, 1])

    def test_uniform(self):
        np.testing.assert_allclose(marginal_probabilities(StateVector.uniform(2), [0, 1]), [0.25] * 4)

    def test_ordering(self):
        # |q2 q1 q0> = |110>: listing [2, 0] gives outcome bits (q0, q2) -> index 0b10
        s = StateVector.basis(3, 0b110)
        np.testing.assert_allclose(marginal_probabilities(s, [0, 2]), [0, 0, 1, 0])
        np.testing.assert_allclose(marginal_probabilities(s, [2, 0]), [0, 1, 0, 0])

    @given(st.integers(1, 5), st.data())
    def test_matches_direct_sum(self, nq, data):
        qs = data.draw(st.lists(st.integers(0, nq - 1), unique=True, min_size=1))
        rng = np.random.default_rng(nq)
        amps = rng.normal(size=1 << nq) + 0j
        s = StateVector(amps / np.linalg.norm(amps))
        want = np.zeros(1 << len(qs))
        for i, pr in enumerate(s.probabilities()):
            want[sum((i >> q & 1) << j for j, q in enumerate(qs))] += pr
        np.testing.assert_allclose(marginal_probabilities(s, qs), want, atol=1e-12)
        assert abs(want.sum() - 1) < 1e-10

    @pytest.mark.parametrize("qs", [[], [0, 0], [3]])
    def test_bad_subset(self, qs):
        with pytest.raises(SimulationError):
            marginal_probabilities(StateVector.zeros(2), qs)


class TestSampling:
    def test_deterministic_state(self):
        assert sample_counts(StateVector.basis(1, 1), [0], 100, seed=5).counts == {"1": 100}

    def test_binomial_bound(self):
        hist = sample_counts(StateVector.uniform(1), [0], 1000, seed=1234)
        sigma = math.sqrt(1000 * 0.25)
        assert abs(hist["0"] - 500) <= 5 * sigma
        assert hist.shots == 1000

    def test_same_seed_same_histogram(self):
        s = StateVector.uniform(4)
        assert sample_counts(s, [0, 1, 2, 3], 500, 99) == sample_counts(s, [0, 1, 2, 3], 500, 99)

    def test_bad_shots(self):
        with pytest.raises(SimulationError):
            sample_counts(StateVector.zeros(1), [0], 0, 1)

    def test_serialization(self):
        hist = Histogram(2, {"10": 3, "01": 5})
        assert hist.to_json() == '{"01": 5, "10": 3}'
        assert hist.to_csv() == "bitstring,count\n01,5\n10,3\n"
        assert Histogram.from_json(hist.to_json()) == hist
        lines = hist.to_ascii(bar_width=10).splitlines()
        assert lines[0].startswith("01 ##########") and lines[1].startswith("10 ######")


class TestReversible:
    def test_x(self):
        assert reversible_eval(Circuit(1, [x(0)]), 0) == (1, 1)

    def test_kickback(self):
        assert reversible_eval(Circuit(2, [cx(0, 1)]), 0b01, phase_qubit=1) == (0b01, -1)

    def test_rejects_non_permutation(self):
        with pytest.raises(NotPermutationError):
            reversible_eval(Circuit(1, [h(0)]), 0)
        with pytest.raises(NotPermutationError):
            reversible_eval(Circuit(1, [p(0, 1.0)]), 0)

    def test_rejects_phase_control(self):
        with pytest.raises(NotPermutationError):
            reversible_eval(Circuit(2, [cx(1, 0)]), 0, phase_qubit=1)

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_qubits=12, max_gates=30, permutation_only=True))
    def test_agrees_with_dense_exhaustively(self, c):
        # One dense run on a superposition with distinct amplitudes checks every
        # basis input at once: amplitude of b must land on reversible_eval(b).
        nq = c.num_qubits
        amps = np.arange(1, (1 << nq) + 1, dtype=complex)
        out = apply_circuit(StateVector(amps / np.linalg.norm(amps)), c).amplitudes * np.linalg.norm(amps)
        for b in range(1 << nq):
            bits, parity = reversible_eval(c, b)
            assert parity == 1
            assert abs(out[bits] - amps[b]) < 1e-9

    @settings(max_examples=30, deadline=None)
    @given(circuits(max_qubits=6, max_gates=20, permutation_only=True))
    def test_phase_parity_matches_dense(self, c):
        # Mirror every controlled gate onto an extra qubit held in |->.
        m = c.num_qubits
        ph = m
        ops = []
        for g in c.ops:
            ops.append(g)
            if g.controls:
                ops.append(Gate("x", ph, g.controls))
        circ = Circuit(m + 1, ops)
        minus = np.array([S2, -S2])
        for b in range(1 << m):
            psi = np.kron(minus, np.eye(1 << m)[b]).astype(complex)
            out = apply_circuit(StateVector(psi), circ, inplace=True).amplitudes
            bits, parity = reversible_eval(circ, b, phase_qubit=ph)
            np.testing.assert_allclose(out, parity * np.kron(minus, np.eye(1 << m)[bits]), atol=1e-12)


class TestPhaseTable:
    def test_surrogate(self, surrogate):
        layout = plan_layout(surrogate, 2)
        table = extract_phase_table(build_oracle(surrogate, 2, layout), layout)
        assert table.marked == [0b001001, 0b001010, 0b001100, 0b100100]

    def test_single_vertex(self):
        g = Graph(1)
        layout = plan_layout(g, 1)
        assert extract_phase_table(build_oracle(g, 1, layout), layout).table.tolist() == [False, True]

    def test_random_n5(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            edges = [(u, v) for u in range(5) for v in range(u + 1, 5) if rng.random() < 0.4]
            g = Graph.from_edges(5, edges)
            k = int(rng.integers(1, 6))
            layout = plan_layout(g, k)
            table = extract_phase_table(build_oracle(g, k, layout), layout)
            assert table.table.tolist() == [dominating_predicate(g, k, xx) for xx in range(32)]

    def test_matches_single_input_eval(self, surrogate):
        layout = plan_layout(surrogate, 3)
        oracle = build_oracle(surrogate, 3, layout)
        table = extract_phase_table(oracle, layout)
        for xx in range(64):
            bits, parity = reversible_eval(oracle, xx, layout.phase_qubit)
            assert bits == xx and (parity == -1) == table.table[xx]

    def test_uncomputation_violation(self, surrogate):
        layout = plan_layout(surrogate, 2)
        broken = build_oracle(surrogate, 2, layout, uncompute=False)
        with pytest.raises(UncomputationError) as info:
            extract_phase_table(broken, layout)
        err = info.value
        assert err.x == 0b1 and err.role.startswith("checker 0")
