"""Exact T-count and T-optimal synthesis for small Clifford+T unitaries."""

from tcount.channel import ChannelRep, UnitaryMatrix, channel_from_circuit, channel_from_matrix, channel_of_rotation
from tcount.circuit import Circuit, CircuitParseError, Gate
from tcount.clifford import CliffordTableau, check_membership, is_clifford, pauli_conjugator, synthesize_clifford
from tcount.coset import CosetDatabase, coset_label, db_lookup, generate_databases
from tcount.estimator import TCountEstimator
from tcount.pauli import Pauli, SignedPauli, commutes, pauli_mul
from tcount.ring import CycloElem, RingReal, sde
from tcount.search import TCountResult, count_t, count_t_naive, tcount_single_qubit
from tcount.storage import db_read, db_write
from tcount.synth import RotationSequence, extract_optimal_circuit, normalize_signs

__version__ = "0.1.0"

__all__ = [
    "ChannelRep",
    "Circuit",
    "CircuitParseError",
    "CliffordTableau",
    "CosetDatabase",
    "CycloElem",
    "Gate",
    "Pauli",
    "RingReal",
    "RotationSequence",
    "SignedPauli",
    "TCountEstimator",
    "TCountResult",
    "UnitaryMatrix",
    "channel_from_circuit",
    "channel_from_matrix",
    "channel_of_rotation",
    "check_membership",
    "commutes",
    "coset_label",
    "count_t",
    "count_t_naive",
    "db_lookup",
    "db_read",
    "db_write",
    "extract_optimal_circuit",
    "generate_databases",
    "is_clifford",
    "normalize_signs",
    "pauli_conjugator",
    "pauli_mul",
    "sde",
    "synthesize_clifford",
    "tcount_single_qubit",
]
