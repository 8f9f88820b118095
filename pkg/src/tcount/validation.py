"""Input coercion for the estimator API."""

from __future__ import annotations

from typing import Iterable

from tcount.channel import ChannelRep, UnitaryMatrix, channel_from_circuit, channel_from_matrix
from tcount.circuit import Circuit
from tcount.clifford import check_membership
from tcount.textio import MembershipError, load_text


def as_channel(item, n: int | None = None) -> ChannelRep:
    """ChannelRep of a ChannelRep, UnitaryMatrix, Circuit or circuit/matrix text."""
    if isinstance(item, ChannelRep):
        W = item
    elif isinstance(item, UnitaryMatrix):
        verdict = check_membership(item)
        if not verdict:
            raise MembershipError(verdict.message)
        W = channel_from_matrix(item)
    elif isinstance(item, Circuit):
        W = channel_from_circuit(item)
    elif isinstance(item, str):
        W = load_text(item, n).channel
    else:
        raise TypeError(f"cannot interpret {type(item).__name__} as a unitary")
    if n is not None and W.n != n:
        raise ValueError(f"input acts on {W.n} qubits, estimator expects {n}")
    return W


def check_inputs(X: Iterable, n: int | None = None) -> list[ChannelRep]:
    if isinstance(X, (ChannelRep, UnitaryMatrix, Circuit, str)):
        raise ValueError("expected a sequence of unitaries; wrap a single input in a list")
    out = [as_channel(x, n) for x in X]
    if not out:
        raise ValueError("empty input")
    return out
