import random

import pytest

from conftest import random_clifford_circuit, random_clifford_t_circuit, random_rotation_product
from tcount.channel import ChannelRep, channel_from_circuit, channel_of_rotation, product_of_rotations
from tcount.circuit import Circuit
from tcount.pauli import Pauli
from tcount.search import MissingStratumError, count_t, count_t_naive, tcount_single_qubit


def recompose(U, result):
    w = result.witness
    return product_of_rotations(U.n, w.rotations, w.clifford.channel())


def test_examples(dbs_n1, dbs_n2):
    assert count_t(ChannelRep.identity(2), 3, dbs_n2).tcount == 0
    T = channel_from_circuit(Circuit.parse("T 1"))
    for m in (1, 2, 5):
        assert count_t(T, m, dbs_n1).tcount == 1
    assert str(count_t(T, 0, dbs_n1)) == "T-count > 0"
    assert str(count_t(T, 3, dbs_n1)) == "T-count = 1"


def test_naive_examples():
    assert count_t_naive(ChannelRep.identity(2), 2).tcount == 0
    assert count_t_naive(channel_from_circuit(Circuit.parse("T 1")), 2).tcount == 1
    with pytest.raises(ValueError):
        count_t_naive(ChannelRep.identity(3), 5)


def test_single_qubit_examples(dbs_n1):
    assert tcount_single_qubit(ChannelRep.identity(1)) == 0
    assert tcount_single_qubit(channel_from_circuit(Circuit.parse("T 1"))) == 1
    THT = channel_from_circuit(Circuit.parse("T 1\nH 1\nT 1"))
    assert tcount_single_qubit(THT) == count_t(THT, 4, dbs_n1).tcount == 2
    with pytest.raises(ValueError):
        tcount_single_qubit(ChannelRep.identity(2))


def test_oracle_equivalence(dbs_n1, dbs_n2):
    rng = random.Random(17)
    for _ in range(60):
        n = rng.choice((1, 2))
        U, _ = random_rotation_product(rng, n, rng.randint(0, 4))
        dbs = dbs_n1 if n == 1 else dbs_n2
        fast, slow = count_t(U, 4, dbs), count_t_naive(U, 4)
        assert fast.tcount == slow.tcount
        if fast.decided:
            assert recompose(U, fast) == U
            assert recompose(U, slow) == U


def test_upper_bound_soundness(dbs_n2):
    rng = random.Random(21)
    for _ in range(30):
        t = rng.randint(0, 4)
        U = channel_from_circuit(random_clifford_t_circuit(rng, 2, t))
        r = count_t(U, 4, dbs_n2)
        assert r.decided and r.tcount <= t


def test_clifford_invariance(dbs_n2):
    rng = random.Random(23)
    for _ in range(15):
        U, _ = random_rotation_product(rng, 2, rng.randint(0, 4))
        C1 = channel_from_circuit(random_clifford_circuit(rng, 2, 10))
        C2 = channel_from_circuit(random_clifford_circuit(rng, 2, 10))
        assert count_t(C1 @ U @ C2, 4, dbs_n2).tcount == count_t(U, 4, dbs_n2).tcount


def test_missing_strata(dbs_n2):
    U = channel_of_rotation(Pauli.from_label("XZ"))
    with pytest.raises(MissingStratumError) as info:
        count_t(U, 6, dbs_n2)
    assert info.value.stratum == 3
    with pytest.raises(ValueError):
        count_t(ChannelRep.identity(1), 2, dbs_n2)
    with pytest.raises(ValueError):
        count_t(U, 2, [dbs_n2[0], dbs_n2[2]])


def test_extend_matches_full(dbs_n2):
    rng = random.Random(29)
    for _ in range(25):
        U, _ = random_rotation_product(rng, 2, rng.randint(0, 4))
        full = count_t(U, 4, dbs_n2)
        short = count_t(U, 4, dbs_n2[:2], extend=True)
        assert full.tcount == short.tcount
        if short.decided:
            assert recompose(U, short) == U


def test_parallel_matches_serial(dbs_n2):
    rng = random.Random(31)
    for _ in range(5):
        U, _ = random_rotation_product(rng, 2, 4)
        a = count_t(U, 4, dbs_n2, chunk=8)
        b = count_t(U, 4, dbs_n2, n_jobs=3, chunk=8)
        assert a == b
