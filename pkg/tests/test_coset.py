import random

from conftest import cached_databases, random_clifford_circuit, random_rotation_product
from tcount.channel import ChannelRep, channel_from_circuit, channel_of_rotation
from tcount.circuit import Circuit
from tcount.clifford import is_clifford
from tcount.coset import coset_label, db_lookup, generate_databases, label_arrays
from tcount.pauli import Pauli
from tcount.search import count_t_naive

# Counts fixed by the first generation run; any change means the label
# convention or the generator changed.
PINNED = {1: [1, 3, 6, 12, 24, 48, 96], 2: [1, 15, 165, 1695], 3: [1, 63, 2961]}


def test_label_idempotent_and_clifford_invariant():
    rng = random.Random(1)
    ident = coset_label(ChannelRep.identity(2))
    for _ in range(30):
        C = channel_from_circuit(random_clifford_circuit(rng, 2, 15))
        assert coset_label(C) == ident
        W, _ = random_rotation_product(rng, 2, 3)
        L = coset_label(W)
        assert coset_label(L.matrix()) == L
        assert coset_label(W @ C) == L


def test_t_label_differs_from_identity():
    T = channel_from_circuit(Circuit.parse("T 1"))
    assert is_clifford(T) is None
    assert coset_label(T) != coset_label(ChannelRep.identity(1))


def test_stratum_sizes_pinned():
    for n, sizes in PINNED.items():
        dbs = cached_databases(n, len(sizes) - 1)
        assert [len(db) for db in dbs] == sizes


def test_first_strata():
    d1 = generate_databases(1, 1)
    assert len(d1[1]) == 3
    labels = {coset_label(channel_of_rotation(Pauli.from_index(1, p))).digest for p in (1, 2, 3)}
    assert len(labels) == 3
    assert len(cached_databases(2, 2)[1]) == 15


def test_single_qubit_strata_have_sde_k(dbs_n1):
    for db in dbs_n1:
        for i in range(len(db)):
            assert db.matrix(i).sde == db.k


def test_database_invariants():
    dbs = cached_databases(2, 3)
    seen = set()
    for db in dbs:
        digests = [r.digest for r in db.records]
        assert digests == sorted(digests)
        for i, r in enumerate(db.records):
            assert len(r.sequence) == db.k
            L = coset_label(db.matrix(i))
            assert L.digest == r.digest and L not in seen
            seen.add(L)


def test_stratum_correctness_against_naive():
    # every W in D_k (n=2, k <= 3) has T-count exactly k
    dbs = cached_databases(2, 3)
    rng = random.Random(0)
    for db in dbs:
        idx = range(len(db)) if len(db) < 200 else rng.sample(range(len(db)), 60)
        for i in idx:
            assert count_t_naive(db.matrix(i), db.k).tcount == db.k


def test_completeness():
    dbs = cached_databases(2, 3)
    rng = random.Random(6)
    for _ in range(100):
        k = rng.randint(0, 3)
        V, _ = random_rotation_product(rng, 2, k)
        hit = db_lookup(dbs, coset_label(V))
        assert hit is not None and hit[0] <= k


def test_lookup_examples(dbs_n1):
    assert db_lookup(dbs_n1, coset_label(ChannelRep.identity(1))) == (0, 0)
    k, i = db_lookup(dbs_n1, coset_label(channel_from_circuit(Circuit.parse("T 1"))))
    assert k == 1
    assert db_lookup(dbs_n1[:2], coset_label(dbs_n1[2].matrix(0))) is None
    rng = random.Random(2)
    while True:
        V, _ = random_rotation_product(rng, 2, 4)
        if count_t_naive(V, 4).tcount == 4:
            break
    assert db_lookup(cached_databases(2, 3), coset_label(V)) is None


def test_faithfulness_non_cosets():
    rng = random.Random(12)
    for _ in range(200):
        W, _ = random_rotation_product(rng, 2, rng.randint(0, 3))
        V, _ = random_rotation_product(rng, 2, rng.randint(0, 3))
        same = is_clifford(W.transpose() @ V) is not None
        assert (coset_label(W) == coset_label(V)) == same


def test_label_arrays_sort_order():
    W, _ = random_rotation_product(random.Random(3), 2, 3)
    L = label_arrays(2, W.A, W.B, W.k)
    cols = [tuple(x for r in range(16) for x in (L.A[r, c], L.B[r, c])) for c in range(16)]
    assert cols == sorted(cols)
