"""T-optimal circuit extraction from a COUNT-T oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from tcount.channel import ChannelRep, channel_from_circuit, channel_of_rotation, rotate
from tcount.circuit import Circuit, Gate, T
from tcount.clifford import CliffordTableau, is_clifford, pauli_conjugator, synthesize_clifford
from tcount.coset import CosetDatabase
from tcount.pauli import Pauli, SignedPauli, commutes, multiply, real_sign
from tcount.search import count_t


class TCountExceeded(ValueError):
    """The unitary's T-count is larger than the permitted m."""


@dataclass(frozen=True)
class RotationSequence:
    """U^ = R^(r_L) ... R^(r_1) C^ with rotations listed in application order."""

    rotations: tuple[SignedPauli, ...]
    clifford: CliffordTableau

    @classmethod
    def from_indices(cls, n: int, indices: Sequence[int], clifford: CliffordTableau | None = None):
        rots = tuple(SignedPauli(Pauli.from_index(n, p)) for p in indices)
        return cls(rots, clifford or CliffordTableau.identity(n))

    @property
    def n(self) -> int:
        return self.clifford.n

    def __len__(self) -> int:
        return len(self.rotations)

    def channel(self) -> ChannelRep:
        W = self.clifford.channel()
        for r in self.rotations:
            W = rotate(W, r.pauli, inverse=r.sign == -1)
        return W

    def all_positive(self) -> bool:
        return all(r.sign == 1 for r in self.rotations)


def _quarter_turn(q: Pauli, a: SignedPauli) -> SignedPauli:
    """Conjugate ``a`` by exp(i pi/4 Q): anticommuting A maps to i Q A."""
    if commutes(q, a.pauli):
        return a
    e, r = multiply(q, a.pauli)
    return SignedPauli(r, a.sign * real_sign(e + 1))


def _quarter_turn_tableau(q: Pauli) -> CliffordTableau:
    ident = CliffordTableau.identity(q.n)
    return CliffordTableau(
        q.n,
        tuple(_quarter_turn(q, p) for p in ident.x_images),
        tuple(_quarter_turn(q, p) for p in ident.z_images),
    )


def normalize_signs(seq: RotationSequence) -> RotationSequence:
    """Rewrite every R(-Q) as R(Q) exp(i pi/4 Q) and push the Clifford factor right.

    The factor conjugates the Paulis of rotations applied earlier and is finally
    absorbed into the trailing Clifford. Length and channel are preserved.
    """
    rots = list(seq.rotations)
    clifford = seq.clifford
    for j in range(len(rots) - 1, -1, -1):
        if rots[j].sign == 1:
            continue
        q = rots[j].pauli
        rots[j] = SignedPauli(q)
        for i in range(j - 1, -1, -1):
            rots[i] = _quarter_turn(q, rots[i])
        clifford = _quarter_turn_tableau(q).compose(clifford)
    return RotationSequence(tuple(rots), clifford)


_LOWERING = {"SDG": ("S", "S", "S"), "Z": ("S", "S")}


def lower_gates(circuit: Circuit) -> Circuit:
    """Rewrite Clifford gates over {H, S, CNOT}: Sdg = S^3, Z = S^2, X = HSSH, SWAP = three CNOTs."""
    out = []
    for g in circuit.gates:
        if g.name == "SWAP":
            a, b = g.qubits
            out += [Gate("CNOT", (a, b)), Gate("CNOT", (b, a)), Gate("CNOT", (a, b))]
        elif g.name == "X":
            q = g.qubits
            out += [Gate("H", q), Gate("S", q), Gate("S", q), Gate("H", q)]
        elif g.name in _LOWERING:
            out += [Gate(name, g.qubits) for name in _LOWERING[g.name]]
        else:
            out.append(g)
    return Circuit(circuit.n, out)


def rotation_circuit(p: Pauli) -> Circuit:
    """C, T_(1), C^dag with C p C^dag = Z_(1); equals R(p) up to global phase."""
    conj = pauli_conjugator(p, Pauli.single(p.n, "Z", 1))
    return lower_gates(conj + Circuit(p.n, [T(1)]) + conj.inverse())


def sequence_to_circuit(seq: RotationSequence) -> Circuit:
    seq = normalize_signs(seq)
    circuit = synthesize_clifford(seq.clifford)
    for r in seq.rotations:
        circuit = circuit + rotation_circuit(r.pauli)
    return circuit


def peel_rotations(U: ChannelRep, t: int, dbs: Sequence[CosetDatabase], *, extend: bool = False):
    """Find Q with T(R(Q)^dag U) = t - 1, repeatedly, trying Paulis in index order."""
    peeled = []
    cur = U
    for step in range(t, 0, -1):
        for q in range(1, 4**U.n):
            cand = rotate(cur, q, inverse=True)
            if count_t(cand, step - 1, dbs, extend=extend).decided:
                peeled.append(q)
                cur = cand
                break
        else:
            raise AssertionError(f"no rotation lowers the T-count from {step}")
    clifford = is_clifford(cur)
    if clifford is None:
        raise AssertionError("residual after peeling is not Clifford")
    return RotationSequence.from_indices(U.n, list(reversed(peeled)), clifford)


def extract_optimal_circuit(
    U: ChannelRep,
    dbs: Sequence[CosetDatabase],
    m: int,
    *,
    use_witness: bool = True,
    extend: bool = False,
) -> Circuit:
    """Circuit over {H, S, CNOT, T} with exactly T(U) T gates and channel U^.

    ``use_witness`` reads the rotations straight off the meet-in-the-middle
    match; otherwise they are peeled off one at a time with COUNT-T calls.
    """
    result = count_t(U, m, dbs, extend=extend)
    if not result.decided:
        raise TCountExceeded(f"T-count exceeds --max-m={m}")
    if use_witness:
        w = result.witness
        seq = RotationSequence.from_indices(U.n, w.rotations, w.clifford)
    else:
        seq = peel_rotations(U, result.tcount, dbs, extend=extend)
    circuit = sequence_to_circuit(seq)
    if circuit.t_count() != result.tcount or channel_from_circuit(circuit) != U:
        raise AssertionError("extracted circuit does not reproduce the unitary")
    return circuit


__all__ = [
    "RotationSequence",
    "TCountExceeded",
    "channel_of_rotation",
    "extract_optimal_circuit",
    "normalize_signs",
    "peel_rotations",
    "lower_gates",
    "rotation_circuit",
    "sequence_to_circuit",
]
