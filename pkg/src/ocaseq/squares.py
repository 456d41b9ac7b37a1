"""Latin squares generated by bipermutive rules, and their orthogonality.

A bipermutive rule of diameter d turns into a square of order
N = 2^(d-1): split a 2(d-1)-cell configuration into halves, read the
left half as the row index and the right half as the column index, and
store the output configuration (as an integer) at that cell.  Rows and
columns are then permutations of 0..N-1.

Two squares are orthogonal when superposing them yields every ordered
pair of symbols exactly once.
"""

from __future__ import annotations

import numpy as np

from . import ca
from .ca import LocalRule

_MAX_ORDER = 1 << 10  # squares are materialized only up to order 1024
_PAIRWISE_CAP = 16    # widest 2n for the quadratic tuple-distance check


class LatinSquare:
    """Square array of symbols 0..N-1 (not necessarily Latin; see is_latin)."""

    __slots__ = ("order", "entries")

    def __init__(self, entries) -> None:
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError("entries must form a non-empty square array")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("symbols must lie in [0, order)")
        arr.setflags(write=False)
        self.order = n
        self.entries = arr

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatinSquare)
                and self.order == other.order
                and bool(np.array_equal(self.entries, other.entries)))

    def __repr__(self) -> str:
        return f"LatinSquare(order={self.order})"


def square_from_rule(rule: LocalRule) -> LatinSquare:
    """Square of order 2^(d-1) indexed by the two halves of the input."""
    if not ca.is_bipermutive(rule):
        raise ValueError("rule is not bipermutive")
    n = rule.diameter - 1
    order = 1 << n
    if order > _MAX_ORDER:
        raise ValueError("square too large to materialize")
    # configuration (row << n) | col enumerates cells in row-major order
    outputs = ca.nbca_table(rule, 2 * n)
    return LatinSquare(outputs.reshape(order, order))


def is_latin(sq: LatinSquare) -> bool:
    """Every row and every column contains each symbol exactly once."""
    want = np.arange(sq.order, dtype=np.int64)
    return (bool((np.sort(sq.entries, axis=1) == want[None, :]).all())
            and bool((np.sort(sq.entries, axis=0) == want[:, None]).all()))


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    """True when the N^2 superposed entry pairs are pairwise distinct."""
    if a.order != b.order:
        raise ValueError("order mismatch")
    pairs = a.entries.astype(np.int64) * a.order + b.entries
    return int(np.unique(pairs).size) == a.order * a.order


def is_multipermutation(f: LocalRule, g: LocalRule) -> bool:
    """Any two distinct input/output tuples disagree on at least 3 of the
    4 half-configuration blocks (input halves plus the two rule outputs)."""
    if f.diameter != g.diameter:
        raise ValueError("diameter mismatch")
    if not (ca.is_bipermutive(f) and ca.is_bipermutive(g)):
        raise ValueError("rules must be bipermutive")
    n = f.diameter - 1
    width = 2 * n
    if width > _PAIRWISE_CAP:
        raise ValueError("state space too large for the pairwise check")
    size = 1 << width
    states = np.arange(size, dtype=np.uint32)
    blocks = (
        (states >> n).astype(np.uint16),
        (states & ((1 << n) - 1)).astype(np.uint16),
        ca.nbca_table(f, width).astype(np.uint16),
        ca.nbca_table(g, width).astype(np.uint16),
    )
    chunk = max(1, (1 << 22) // size)
    for lo in range(0, size, chunk):
        hi = min(size, lo + chunk)
        agree = np.zeros((hi - lo, size), dtype=np.uint8)
        for blk in blocks:
            agree += blk[lo:hi, None] == blk[None, :]
        agree[np.arange(hi - lo), np.arange(lo, hi)] = 0  # tuple vs itself
        if int(agree.max()) > 1:
            return False
    return True
