"""Local rules of one-dimensional no-boundary cellular automata.

A rule of diameter d reads d consecutive cells and is stored as its
2^d-bit truth table; the table read as an integer is the rule's
Wolfram code.  Index convention: the entry for the neighborhood
(x_1, ..., x_d) sits at index x_1*2^(d-1) + ... + x_d, i.e. the
leftmost cell is the most significant index bit.  With this convention
code 90 is x1+x3 and code 150 is x1+x2+x3, as usual.

The no-boundary global map slides the rule across a length-m
configuration without wrapping, so the output is m-d+1 cells long.
Configurations store cell 1 in the most significant bit position.

A rule is bipermutive when flipping the first cell always flips the
output and flipping the last cell does too; those are exactly the
rules whose generated squares are Latin.  Linear rules are XOR masks
of their inputs, and the bipermutive linear ones correspond one-to-one
with monic polynomials over GF(2) that have a nonzero constant term
(coefficient of X^(k-1) = weight of input k).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np

MAX_DIAMETER = 16

LINEAR = "linear"
AFFINE = "affine"
NONLINEAR = "nonlinear"

_TABLE_CAP = 22  # largest configuration length materialized as a full table


@dataclass(frozen=True, slots=True)
class LocalRule:
    """A diameter-d local rule held as its truth-table bitmask."""

    diameter: int
    table: int

    def __post_init__(self) -> None:
        if not 2 <= self.diameter <= MAX_DIAMETER:
            raise ValueError(f"diameter must be in [2, {MAX_DIAMETER}]")
        if not 0 <= self.table < (1 << (1 << self.diameter)):
            raise ValueError("truth table wider than 2^diameter bits")

    @property
    def wolfram_code(self) -> int:
        return self.table


class Configuration(NamedTuple):
    """Fixed-length bit vector; cell 1 is the most significant bit."""

    length: int
    cells: int

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Configuration":
        value = 0
        count = 0
        for b in bits:
            value = (value << 1) | (b & 1)
            count += 1
        return cls(count, value)

    def to_bits(self) -> tuple[int, ...]:
        return tuple((self.cells >> (self.length - 1 - i)) & 1 for i in range(self.length))


def _check_config(cfg: Configuration) -> None:
    if cfg.length < 1 or not 0 <= cfg.cells < (1 << cfg.length):
        raise ValueError("malformed configuration")


def eval_rule(rule: LocalRule, neighborhood: Configuration) -> int:
    """Look the neighborhood up in the rule's truth table."""
    _check_config(neighborhood)
    if neighborhood.length != rule.diameter:
        raise ValueError("neighborhood length must equal the rule diameter")
    return (rule.table >> neighborhood.cells) & 1


def _apply_bits(table: int, d: int, length: int, bits: int) -> int:
    # no validation; callers keep 0 <= bits < 2^length and length >= d
    mask = (1 << d) - 1
    out = 0
    for shift in range(length - d, -1, -1):
        out = (out << 1) | ((table >> ((bits >> shift) & mask)) & 1)
    return out


def nbca_apply(rule: LocalRule, cfg: Configuration) -> Configuration:
    """Slide the rule across cfg; the result is d-1 cells shorter."""
    _check_config(cfg)
    d = rule.diameter
    if cfg.length < d:
        raise ValueError("configuration shorter than diameter")
    return Configuration(cfg.length - d + 1, _apply_bits(rule.table, d, cfg.length, cfg.cells))


def nbca_table(rule: LocalRule, length: int) -> np.ndarray:
    """Outputs of the global map for every length-cell configuration."""
    d = rule.diameter
    if length < d:
        raise ValueError("configuration shorter than diameter")
    if length > _TABLE_CAP:
        raise ValueError("state space too large to materialize")
    states = np.arange(1 << length, dtype=np.uint32)
    bits = np.array([(rule.table >> i) & 1 for i in range(1 << d)], dtype=np.uint32)
    mask = (1 << d) - 1
    out = np.zeros(1 << length, dtype=np.uint32)
    for shift in range(length - d, -1, -1):
        out = (out << 1) | bits[(states >> shift) & mask]
    return out


@lru_cache(maxsize=None)
def is_bipermutive(rule: LocalRule) -> bool:
    """Flip test on both end cells over every fixing of the others."""
    d, t = rule.diameter, rule.table
    half = 1 << (d - 1)
    for low in range(half):
        if ((t >> low) & 1) == ((t >> (low | half)) & 1):
            return False
    for rest in range(half):
        if ((t >> (rest << 1)) & 1) == ((t >> ((rest << 1) | 1)) & 1):
            return False
    return True


def _linear_rule_table(weight_mask: int, d: int) -> int:
    """Truth table of the XOR rule whose index-bit weights are weight_mask.

    Doubles the table one index bit at a time: the upper copy is XORed
    with 1 whenever the new variable carries a coefficient.
    """
    table = 0
    for w in range(d):
        block = table
        if (weight_mask >> w) & 1:
            block ^= (1 << (1 << w)) - 1
        table |= block << (1 << w)
    return table


def _xor_weight_mask(rule: LocalRule) -> int:
    # candidate coefficients read off the single-one inputs (index bit j
    # belongs to variable x_{d-j}); only valid after reconstruction check
    c0 = rule.table & 1
    mask = 0
    for j in range(rule.diameter):
        mask |= (((rule.table >> (1 << j)) & 1) ^ c0) << j
    return mask


@lru_cache(maxsize=None)
def classify_linearity(rule: LocalRule) -> str:
    """Return "linear" for XOR rules, "affine" for their complements, else "nonlinear"."""
    d = rule.diameter
    recon = _linear_rule_table(_xor_weight_mask(rule), d)
    if rule.table == recon:
        return LINEAR
    if rule.table == recon ^ ((1 << (1 << d)) - 1):
        return AFFINE
    return NONLINEAR


def _bit_reverse(x: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


def rule_to_poly(rule: LocalRule) -> int:
    """Coefficient mask of the polynomial attached to a linear bipermutive rule."""
    if classify_linearity(rule) != LINEAR or not is_bipermutive(rule):
        raise ValueError("not a linear bipermutive rule")
    # weight-mask bit j is the coefficient of x_{d-j}; the polynomial
    # stores the coefficient of input k at bit k-1, i.e. the reversal
    return _bit_reverse(_xor_weight_mask(rule), rule.diameter)


def poly_to_rule(p: int, d: int) -> LocalRule:
    """Inverse of rule_to_poly: monic degree d-1, nonzero constant term."""
    if d < 2 or (p & 1) == 0 or p.bit_length() - 1 != d - 1:
        raise ValueError(f"not a rule polynomial for diameter {d}")
    return LocalRule(d, _linear_rule_table(_bit_reverse(p, d), d))


def _bipermutive_tables(d: int) -> list[int]:
    """Truth tables of every bipermutive rule of diameter d, ascending.

    Bipermutive rules are exactly x1 XOR xd XOR h(middle cells), so the
    tables are generated by XOR-combining per-middle-value position
    masks into the base table of x1 XOR xd.
    """
    if not 2 <= d <= 6:
        # 2^(2^(d-2)) rules; beyond diameter 6 the list itself is absurd
        raise ValueError("too many bipermutive rules to enumerate beyond diameter 6")
    mid_bits = d - 2
    base = 0
    pos = [0] * (1 << mid_bits)
    for idx in range(1 << d):
        base |= (((idx >> (d - 1)) ^ idx) & 1) << idx
        pos[(idx >> 1) & ((1 << mid_bits) - 1)] |= 1 << idx
    tables = [0] * (1 << (1 << mid_bits))
    tables[0] = base
    for h in range(1, len(tables)):
        low = h & -h
        tables[h] = tables[h ^ low] ^ pos[low.bit_length() - 1]
    tables.sort()
    return tables


def bipermutive_rules(d: int) -> list[LocalRule]:
    """Every bipermutive rule of diameter d, in Wolfram-code order."""
    return [LocalRule(d, t) for t in _bipermutive_tables(d)]
