"""Grover search for size-k dominating sets with reversible counter oracles."""

from .circuit import Circuit, Gate, depth, gate_census, inverse
from .graph import Graph, VertexSet, enumerate_dominating_sets, is_dominating, parse_graph
from .grover import GroverPlan, iteration_count, run_grover, success_probability
from .oracle import OracleLayout, build_oracle, plan_layout
from .qcount import CountingConfig, run_quantum_counting
from .sim import StateVector, apply_circuit, extract_phase_table, reversible_eval

__version__ = "0.1.0"
