"""scikit-learn style front end.

``fit`` builds (or loads) the coset databases, ``predict`` returns T-counts
and ``transform`` returns T-optimal circuits.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from tcount.coset import generate_databases
from tcount.search import count_t
from tcount.storage import build_database_dir, load_databases
from tcount.synth import TCountExceeded, extract_optimal_circuit
from tcount.validation import check_inputs


class TCountEstimator(TransformerMixin, BaseEstimator):
    """Exact T-count oracle for n-qubit Clifford+T unitaries.

    Parameters
    ----------
    n_qubits : int
    max_t : int
        Largest T-count decided. Larger inputs predict -1 and transform to None.
    n_jobs : int
        Worker processes for generation and search. Results do not depend on it.
    db_dir : str or None
        Persist strata there (reusing any that exist); None keeps them in memory.
    storage_format : {"compact", "dense", "sparse"}
    extend : bool
        Build only up to ``max_strata`` and enumerate missing layers on the fly.
    max_strata : int or None
        Cap on the stored strata when ``extend`` is set.
    use_witness : bool
        Build circuits from the search witness instead of peeling.
    """

    def __init__(
        self,
        n_qubits: int = 2,
        max_t: int = 4,
        n_jobs: int = 1,
        db_dir: str | None = None,
        storage_format: str = "compact",
        extend: bool = False,
        max_strata: int | None = None,
        use_witness: bool = True,
    ):
        self.n_qubits = n_qubits
        self.max_t = max_t
        self.n_jobs = n_jobs
        self.db_dir = db_dir
        self.storage_format = storage_format
        self.extend = extend
        self.max_strata = max_strata
        self.use_witness = use_witness

    def _strata_needed(self) -> int:
        h = -(-self.max_t // 2)
        if self.extend and self.max_strata is not None:
            return max(1, min(h, self.max_strata))
        return h

    def fit(self, X=None, y=None):
        """Build D_0..D_h; X and y are ignored."""
        if not isinstance(self.n_qubits, int) or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        if not isinstance(self.max_t, int) or self.max_t < 0:
            raise ValueError(f"max_t must be a nonnegative integer, got {self.max_t!r}")
        K = self._strata_needed()
        if self.db_dir is None:
            self.databases_ = generate_databases(self.n_qubits, K, n_jobs=self.n_jobs)
        else:
            build_database_dir(self.db_dir, self.n_qubits, K, self.storage_format, n_jobs=self.n_jobs)
            self.databases_ = load_databases(self.db_dir, self.n_qubits, upto=K)
        self.stratum_sizes_ = np.array([len(db) for db in self.databases_])
        return self

    def count(self, X) -> list:
        """Full TCountResult objects, witnesses included."""
        check_is_fitted(self, "databases_")
        return [
            count_t(W, self.max_t, self.databases_, extend=self.extend, n_jobs=self.n_jobs)
            for W in check_inputs(X, self.n_qubits)
        ]

    def predict(self, X) -> np.ndarray:
        return np.array([r.tcount if r.decided else -1 for r in self.count(X)], dtype=int)

    def transform(self, X) -> list:
        check_is_fitted(self, "databases_")
        out = []
        for W in check_inputs(X, self.n_qubits):
            try:
                out.append(
                    extract_optimal_circuit(
                        W, self.databases_, self.max_t, use_witness=self.use_witness, extend=self.extend
                    )
                )
            except TCountExceeded:
                out.append(None)
        return out
