import random

import numpy as np
import pytest

from conftest import random_clifford_t_circuit, random_rotation_product
from tcount.channel import (
    MAX_SDE,
    ChannelRep,
    UnitaryMatrix,
    channel_from_circuit,
    channel_from_matrix,
    channel_of_rotation,
    circuit_matrix,
    product_of_rotations,
    rotate,
)
from tcount.circuit import Circuit
from tcount.clifford import is_clifford
from tcount.pauli import Pauli, SignedPauli
from tcount.ring import CycloElem, RingReal

h = RingReal(1, 0, 1)  # 1/sqrt2
o, l = RingReal(), RingReal.from_int(1)

# rows and columns ordered I, X, Y, Z
PRINTED = {
    "X": [[l, o, o, o], [o, l, o, o], [o, o, h, -h], [o, o, h, h]],
    "Y": [[l, o, o, o], [o, h, o, h], [o, o, l, o], [o, -h, o, h]],
    "Z": [[l, o, o, o], [o, h, -h, o], [o, h, h, o], [o, o, o, l]],
}
IXYZ = [0, 1, 3, 2]  # our index order is I, X, Z, Y


def reorder(W: ChannelRep):
    return [[W.entry(r, s) for s in IXYZ] for r in IXYZ]


@pytest.mark.parametrize("letter", ["X", "Y", "Z"])
def test_rotation_matches_printed(letter):
    W = channel_of_rotation(Pauli.from_label(letter))
    assert reorder(W) == PRINTED[letter]
    assert W.sde == 1


def test_t_matrix_gives_rz():
    T = UnitaryMatrix.from_entries([[CycloElem(1), CycloElem()], [CycloElem(), CycloElem.omega()]])
    assert reorder(channel_from_matrix(T)) == PRINTED["Z"]
    assert channel_from_circuit(Circuit.parse("T 1")) == channel_of_rotation(Pauli.from_label("Z"))


def test_rotation_square_is_clifford_not_identity():
    # R(P)^2 = exp(i pi/4 (I - P)) is a Clifford, so its channel is monomial but not I
    for n in (1, 2):
        ident = ChannelRep.identity(n)
        for p in range(1, 4**n):
            R = channel_of_rotation(Pauli.from_index(n, p))
            assert R.transpose() @ R == ident
            assert R @ R != ident
            assert is_clifford(R @ R) is not None
            R8 = ident
            for _ in range(8):
                R8 = R8 @ R
            assert R8 == ident


def test_rotation_negative_sign_is_transpose():
    p = Pauli.from_label("XZ")
    assert channel_of_rotation(SignedPauli(p, -1)) == channel_of_rotation(p).transpose()


def test_mul_examples():
    RX = channel_of_rotation(Pauli.from_label("X"))
    RZ = channel_of_rotation(Pauli.from_label("Z"))
    assert RX @ ChannelRep.identity(1) == RX
    assert RX @ RZ != RZ @ RX
    assert RZ.transpose().transpose() == RZ
    assert ChannelRep.identity(2).transpose() == ChannelRep.identity(2)


def test_circuit_examples():
    assert channel_from_circuit(Circuit(2, [])) == ChannelRep.identity(2)
    assert channel_from_circuit(Circuit.parse("H 1\nH 1")) == ChannelRep.identity(1)
    with pytest.raises(ValueError):
        channel_from_circuit(Circuit.parse("H 3"), n=2)


def test_toffoli_sde():
    perm = [0, 1, 2, 3, 4, 5, 7, 6]
    assert channel_from_matrix(UnitaryMatrix.permutation(perm)).sde == 2


def test_two_construction_paths_agree():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 3)
        c = random_clifford_t_circuit(rng, n, rng.randint(0, 4))
        assert channel_from_circuit(c) == channel_from_matrix(circuit_matrix(c))


def test_structural_invariants():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 2)
        m = rng.randint(0, 6)
        W, _ = random_rotation_product(rng, n, m)
        assert W.is_orthogonal()
        assert W.sde <= m
        e0 = np.zeros(4**n)
        e0[0] = 1
        F = W.to_float()
        assert np.allclose(F[0], e0) and np.allclose(F[:, 0], e0)
        # entry magnitude <= 1
        assert np.all(np.abs(F) <= 1 + 1e-12)


def test_rotate_matches_matrix_product():
    rng = random.Random(2)
    for _ in range(20):
        W, _ = random_rotation_product(rng, 2, 3)
        p = rng.randrange(1, 16)
        assert rotate(W, p) == channel_of_rotation(Pauli.from_index(2, p)) @ W
        assert rotate(W, p, inverse=True) == channel_of_rotation(Pauli.from_index(2, p)).transpose() @ W


def test_sde_guard():
    W = product_of_rotations(1, [1, 2] * 30)
    assert W.sde <= MAX_SDE
    with pytest.raises(OverflowError):
        product_of_rotations(1, [1, 2] * 31)
