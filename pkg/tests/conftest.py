import os
import random

import pytest

from tcount.channel import product_of_rotations
from tcount.circuit import Circuit, Gate
from tcount.coset import generate_databases

CLIFFORD_1Q = ("H", "S", "SDG", "X", "Z")


def random_clifford_circuit(rng: random.Random, n: int, length: int) -> Circuit:
    gates = []
    for _ in range(length):
        if n > 1 and rng.random() < 0.35:
            a, b = rng.sample(range(1, n + 1), 2)
            gates.append(Gate(rng.choice(("CNOT", "SWAP")), (a, b)))
        else:
            gates.append(Gate(rng.choice(CLIFFORD_1Q), (rng.randint(1, n),)))
    return Circuit(n, gates)


def random_clifford_t_circuit(rng: random.Random, n: int, t_gates: int, clifford_gap: int = 3) -> Circuit:
    circuit = random_clifford_circuit(rng, n, clifford_gap)
    for _ in range(t_gates):
        t = Gate(rng.choice(("T", "TDG")), (rng.randint(1, n),))
        circuit = circuit + Circuit(n, [t]) + random_clifford_circuit(rng, n, clifford_gap)
    return circuit


def random_rotation_product(rng: random.Random, n: int, length: int):
    seq = [rng.randrange(1, 4**n) for _ in range(length)]
    return product_of_rotations(n, seq), seq


@pytest.fixture
def rng():
    return random.Random(20240615)


_DB_CACHE = {}


def cached_databases(n: int, K: int):
    key = (n, K)
    if key not in _DB_CACHE:
        _DB_CACHE[key] = generate_databases(n, K)
    return _DB_CACHE[key]


@pytest.fixture(scope="session")
def dbs_n1():
    return cached_databases(1, 4)


@pytest.fixture(scope="session")
def dbs_n2():
    return cached_databases(2, 2)


@pytest.fixture(scope="session")
def dbs_n3():
    return cached_databases(3, 2)


def long_enabled() -> bool:
    return os.environ.get("TCOUNT_LONG", "") not in ("", "0")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
