"""The paired-rule state update and its cycle structure.

States hold 2n cells (n = diameter - 1) packed into a 2n-bit integer,
leftmost cell in the most significant bit.  One step applies both
global rules to the whole state and concatenates the two n-cell
outputs, first rule on the left.  When the two generated squares are
orthogonal, the update permutes the state space, so every trajectory
is a pure cycle and the phase space splits into disjoint cycles.

Keystream bits are the successive states themselves, most significant
cell first, starting with the state after the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from . import ca
from .ca import LocalRule

_TABLE_CAP = 22   # widest state materialized as a successor table
_WIDTH_CAP = 32   # hard cap for full phase-space sweeps


class SystemState(NamedTuple):
    """A 2n-bit state; bits holds the concatenated halves, cell 1 at the top."""

    n: int
    bits: int


def _pair_geometry(f: LocalRule, g: LocalRule) -> tuple[int, int, int]:
    if f.diameter != g.diameter:
        raise ValueError("diameter mismatch")
    if not (ca.is_bipermutive(f) and ca.is_bipermutive(g)):
        raise ValueError("rules must be bipermutive")
    d = f.diameter
    n = d - 1
    return d, n, 2 * n


def _check_state(s: SystemState, n: int, width: int) -> None:
    if s.n != n:
        raise ValueError("state size mismatch")
    if not 0 <= s.bits < (1 << width):
        raise ValueError("state bits out of range")


def h_step(f: LocalRule, g: LocalRule, s: SystemState) -> SystemState:
    """One update: new state = (first rule's output, second rule's output)."""
    d, n, width = _pair_geometry(f, g)
    _check_state(s, n, width)
    left = ca._apply_bits(f.table, d, width, s.bits)
    right = ca._apply_bits(g.table, d, width, s.bits)
    return SystemState(n, (left << n) | right)


def h_successor_table(f: LocalRule, g: LocalRule) -> np.ndarray:
    """Successor of every state, as a 2^(2n)-entry array."""
    d, n, width = _pair_geometry(f, g)
    if width > _TABLE_CAP:
        raise ValueError("state space too large to materialize")
    return (ca.nbca_table(f, width) << n) | ca.nbca_table(g, width)


def is_oca_pair(f: LocalRule, g: LocalRule) -> bool:
    """Exhaustive bijectivity check of the paired update."""
    table = h_successor_table(f, g)
    return int(np.bincount(table, minlength=table.size).max()) == 1


def cycle_lengths(successors: Sequence[int]) -> dict[int, int]:
    """Cycle-length multiset of a permutation given as a successor list."""
    size = len(successors)
    visited = bytearray(size)
    lengths: dict[int, int] = {}
    for start in range(size):
        if visited[start]:
            continue
        cur = start
        length = 0
        while not visited[cur]:
            visited[cur] = 1
            cur = successors[cur]
            length += 1
        if cur != start:
            raise ValueError("successor table is not a permutation")
        lengths[length] = lengths.get(length, 0) + 1
    return lengths


@dataclass(frozen=True, slots=True)
class CycleDecomposition:
    """Multiset of cycle lengths covering the whole phase space."""

    cycles: tuple[tuple[int, int], ...]  # (length, count), ascending by length
    total_states: int

    def __post_init__(self) -> None:
        covered = sum(length * count for length, count in self.cycles)
        if covered != self.total_states:
            raise ValueError("cycles do not partition the phase space")

    @property
    def max_cycle_length(self) -> int:
        return self.cycles[-1][0] if self.cycles else 0

    def to_pairs(self) -> list[list[int]]:
        return [[length, count] for length, count in self.cycles]


def cycle_decomposition(f: LocalRule, g: LocalRule) -> CycleDecomposition:
    """Exact cycle structure of the paired update over all 2^(2n) states."""
    d, n, width = _pair_geometry(f, g)
    if width > _WIDTH_CAP:
        raise ValueError("state space too large to sweep")
    if width <= _TABLE_CAP:
        try:
            lengths = cycle_lengths(h_successor_table(f, g).tolist())
        except ValueError:
            raise ValueError("not an OCA pair") from None
    else:
        lengths = _cycle_lengths_walk(f, g, width)
    return CycleDecomposition(tuple(sorted(lengths.items())), 1 << width)


def _cycle_lengths_walk(f: LocalRule, g: LocalRule, width: int) -> dict[int, int]:
    # bit-per-state visited map; re-entering a closed walk anywhere but at
    # its start means the update is not injective
    d = f.diameter
    n = d - 1
    ft, gt = f.table, g.table
    visited = bytearray(1 << (width - 3))
    lengths: dict[int, int] = {}
    for start in range(1 << width):
        if visited[start >> 3] & (1 << (start & 7)):
            continue
        cur = start
        length = 0
        while True:
            visited[cur >> 3] |= 1 << (cur & 7)
            length += 1
            cur = (ca._apply_bits(ft, d, width, cur) << n) | ca._apply_bits(gt, d, width, cur)
            if cur == start:
                break
            if visited[cur >> 3] & (1 << (cur & 7)):
                raise ValueError("not an OCA pair")
        lengths[length] = lengths.get(length, 0) + 1
    return lengths


def period_of_state(f: LocalRule, g: LocalRule, s: SystemState) -> int:
    """Smallest p >= 1 with the p-th iterate returning to s."""
    d, n, width = _pair_geometry(f, g)
    _check_state(s, n, width)
    ft, gt = f.table, g.table
    cap = 1 << width
    cur = s.bits
    period = 0
    while True:
        cur = (ca._apply_bits(ft, d, width, cur) << n) | ca._apply_bits(gt, d, width, cur)
        period += 1
        if cur == s.bits:
            return period
        if period > cap:
            raise ValueError("not an OCA pair")


def keystream(f: LocalRule, g: LocalRule, seed: SystemState, length: int,
               half: str = "full") -> Iterator[int]:
    """Bits of the successive states after seed, most significant cell first.

    half="left" restricts each step's output to the first rule's n cells.
    """
    d, n, width = _pair_geometry(f, g)
    _check_state(seed, n, width)
    if length < 0:
        raise ValueError("length must be non-negative")
    if half not in ("full", "left"):
        raise ValueError("half must be 'full' or 'left'")
    low = n if half == "left" else 0
    ft, gt = f.table, g.table
    bits = seed.bits
    for _ in range(length):
        bits = (ca._apply_bits(ft, d, width, bits) << n) | ca._apply_bits(gt, d, width, bits)
        for k in range(width - 1, low - 1, -1):
            yield (bits >> k) & 1


def pack_bits(bits: Iterable[int]) -> bytes:
    """Pack a bit sequence into bytes, first bit in the highest position."""
    out = bytearray()
    acc = 0
    count = 0
    for b in bits:
        acc = (acc << 1) | (b & 1)
        count += 1
        if count == 8:
            out.append(acc)
            acc = 0
            count = 0
    if count:
        out.append(acc << (8 - count))
    return bytes(out)
