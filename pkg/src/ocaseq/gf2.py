"""Polynomial and matrix arithmetic over GF(2).

Polynomials are plain non-negative integers: bit i of the value is the
coefficient of X^i, so X^2 + 1 is 0b101 = 5 and addition is XOR.  The
zero polynomial is 0 and its degree is reported as -1.

Matrices are square and bit-packed: row i is an integer whose bit j
holds entry (i, j).  The Sylvester matrix of two degree-n polynomials
with nonzero constant term is the 2n x 2n band matrix whose first n
rows carry the shifted coefficient vector of the first polynomial and
whose last n rows carry the second; it is invertible exactly when the
two polynomials are coprime (nonzero resultant).

Everything here is a pure function on immutable values, so results can
be shared freely across threads and processes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

BinPoly = int
"""Alias for polynomial coefficient masks (bit i = coefficient of X^i)."""


# ----------------------------------------------------------------------
# polynomials
# ----------------------------------------------------------------------

def poly_degree(p: BinPoly) -> int:
    """Degree of p; the zero polynomial reports -1."""
    return p.bit_length() - 1


def poly_hex(p: BinPoly) -> str:
    """Canonical text form of a polynomial: hexadecimal coefficient mask."""
    return format(p, "#x")


def poly_parse(text: str) -> BinPoly:
    """Parse a polynomial from "0x5" (coefficient mask) or "X^2+1" (term sum)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[:2].lower() == "0x":
        try:
            return int(s, 16)
        except ValueError:
            raise ValueError(f"bad polynomial mask {text!r}") from None
    if s == "0":
        return 0
    mask = 0
    for term in s.lower().split("+"):
        if term == "1":
            mask ^= 1
        elif term == "x":
            mask ^= 2
        elif term.startswith("x^") and term[2:].isdigit():
            mask ^= 1 << int(term[2:])
        else:
            raise ValueError(f"cannot parse polynomial term {term!r}")
    return mask


def is_rule_poly(p: BinPoly, n: int) -> bool:
    """True for monic degree-n polynomials with a nonzero constant term."""
    return n >= 1 and (p & 1) == 1 and poly_degree(p) == n


def _poly_mod(a: int, b: int) -> int:
    bl = b.bit_length()
    while a.bit_length() >= bl:
        a ^= b << (a.bit_length() - bl)
    return a


def _gcd_raw(p: int, q: int) -> int:
    while q:
        p, q = q, _poly_mod(p, q)
    return p


def poly_gcd(p: BinPoly, q: BinPoly) -> BinPoly:
    """Greatest common divisor; monic comes for free over GF(2)."""
    if p == 0 and q == 0:
        raise ValueError("gcd undefined for two zero polynomials")
    return _gcd_raw(p, q)


# ----------------------------------------------------------------------
# matrices
# ----------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GF2Matrix:
    """Square bit-matrix; ``rows[i]`` bit j holds entry (i, j)."""

    size: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("matrix size must be positive")
        if len(self.rows) != self.size:
            raise ValueError("row count does not match size")
        limit = 1 << self.size
        if any(not 0 <= r < limit for r in self.rows):
            raise ValueError("row has bits beyond the matrix size")

    @classmethod
    def identity(cls, size: int) -> "GF2Matrix":
        return cls(size, _identity_rows(size))

    @classmethod
    def zero(cls, size: int) -> "GF2Matrix":
        return cls(size, (0,) * size)

    @classmethod
    def from_rows(cls, rows: Iterable[int]) -> "GF2Matrix":
        rows = tuple(rows)
        return cls(len(rows), rows)


def _identity_rows(size: int) -> tuple[int, ...]:
    return tuple(1 << i for i in range(size))


def sylvester_matrix(p: BinPoly, q: BinPoly, n: int) -> GF2Matrix:
    """Band matrix of the two coefficient vectors; row i is p << i, row n+i is q << i."""
    if n < 1 or not (is_rule_poly(p, n) and is_rule_poly(q, n)):
        raise ValueError("not a bipermutive rule polynomial")
    rows = tuple(p << i for i in range(n)) + tuple(q << i for i in range(n))
    return GF2Matrix(2 * n, rows)


def _mul_rows(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # row i of the product XORs together the rows of b selected by row i of a
    out = []
    append = out.append
    for r in a:
        acc = 0
        while r:
            acc ^= b[(r & -r).bit_length() - 1]
            r &= r - 1
        append(acc)
    return tuple(out)


def _pow_rows(m: tuple[int, ...], e: int, size: int) -> tuple[int, ...]:
    result = _identity_rows(size)
    while e:
        if e & 1:
            result = _mul_rows(result, m)
        e >>= 1
        if e:
            m = _mul_rows(m, m)
    return result


def _pow_with_chain(chain: list[tuple[int, ...]], e: int, size: int) -> tuple[int, ...]:
    # chain[j] holds m^(2^j); e must fit inside the chain
    result = _identity_rows(size)
    j = 0
    while e:
        if e & 1:
            result = _mul_rows(result, chain[j])
        e >>= 1
        j += 1
    return result


def mat_mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    """Matrix product over GF(2)."""
    if a.size != b.size:
        raise ValueError("matrix size mismatch")
    return GF2Matrix(a.size, _mul_rows(a.rows, b.rows))


def mat_vec(m: GF2Matrix, v: int) -> int:
    """Apply m to a column vector packed as an int (bit j = component j)."""
    if not 0 <= v < (1 << m.size):
        raise ValueError("vector has bits beyond the matrix size")
    out = 0
    for i, row in enumerate(m.rows):
        out |= ((row & v).bit_count() & 1) << i
    return out


def mat_pow(m: GF2Matrix, e: int) -> GF2Matrix:
    """m**e by square and multiply; m**0 is the identity."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return GF2Matrix(m.size, _pow_rows(m.rows, e, m.size))


def is_invertible(m: GF2Matrix) -> bool:
    """Full rank test by row reduction."""
    pivots: list[int] = []
    for row in m.rows:
        for prow in pivots:
            if (row >> (prow.bit_length() - 1)) & 1:
                row ^= prow
        if row == 0:
            return False
        pivots.append(row)
    return True


# ----------------------------------------------------------------------
# orders
# ----------------------------------------------------------------------

def factorize(t: int) -> list[int]:
    """Prime factors of t with multiplicity, non-decreasing; factorize(1) == []."""
    if t < 1:
        raise ValueError("can only factor positive integers")
    out = []
    d = 2
    while d * d <= t:
        while t % d == 0:
            out.append(d)
            t //= d
        d += 1 if d == 2 else 2
    if t > 1:
        out.append(t)
    return out


def gl_order(k: int) -> int:
    """Order of the group of invertible k x k matrices over GF(2)."""
    if k < 1:
        raise ValueError("dimension must be positive")
    out = 1
    for i in range(k):
        out *= (1 << k) - (1 << i)
    return out


def _gl_order_factors(k: int) -> Counter:
    # |GL(k, 2)| = 2^(k(k-1)/2) * prod_{i=1..k} (2^i - 1)
    factors = Counter({2: k * (k - 1) // 2})
    for i in range(1, k + 1):
        factors.update(factorize((1 << i) - 1))
    if factors[2] == 0:
        del factors[2]
    return factors


def matrix_order(m: GF2Matrix) -> int:
    """Least t >= 1 with m**t = I.

    Tries the exponent 2^k - 1 first (the largest order any invertible
    k x k matrix over GF(2) can have); if that does not annihilate m,
    falls back to the order of the full group of invertible matrices.
    The order is then recovered one prime at a time: raise m to the
    p-free part of the annihilating exponent and count how many powers
    of p it takes to reach the identity.
    """
    if not is_invertible(m):
        raise ValueError("matrix not in GL")
    k = m.size
    ident = _identity_rows(k)
    t = (1 << k) - 1
    if _pow_rows(m.rows, t, k) == ident:
        exponent = t
        factors = Counter(factorize(t))
    else:
        exponent = gl_order(k)
        factors = _gl_order_factors(k)
    chain = [m.rows]
    for _ in range(exponent.bit_length() - 1):
        chain.append(_mul_rows(chain[-1], chain[-1]))
    order = 1
    for p, mult in sorted(factors.items()):
        cofactor = exponent // p**mult
        cur = _pow_with_chain(chain, cofactor, k)
        while cur != ident:
            cur = _pow_rows(cur, p, k)
            order *= p
    return order
