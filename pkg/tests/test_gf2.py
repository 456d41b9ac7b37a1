import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocaseq import gf2
from ocaseq.gf2 import (
    GF2Matrix,
    factorize,
    gl_order,
    is_invertible,
    mat_mul,
    mat_pow,
    mat_vec,
    matrix_order,
    poly_degree,
    poly_gcd,
    poly_hex,
    poly_parse,
    sylvester_matrix,
)

M_90_150 = sylvester_matrix(0x5, 0x7, 2)  # rules 90 and 150


# ---------------------------------------------------------------- oracles

def naive_mul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    rows = []
    for i in range(a.size):
        acc = 0
        for j in range(b.size):
            bit = 0
            for k in range(a.size):
                bit ^= ((a.rows[i] >> k) & 1) & ((b.rows[k] >> j) & 1)
            acc |= bit << j
        rows.append(acc)
    return GF2Matrix(a.size, tuple(rows))


def repeated_pow(m: GF2Matrix, e: int) -> GF2Matrix:
    out = GF2Matrix.identity(m.size)
    for _ in range(e):
        out = mat_mul(out, m)
    return out


def injective_map(m: GF2Matrix) -> bool:
    seen = {mat_vec(m, v) for v in range(1 << m.size)}
    return len(seen) == 1 << m.size


def random_matrix(rng: random.Random, size: int) -> GF2Matrix:
    return GF2Matrix(size, tuple(rng.getrandbits(size) for _ in range(size)))


# ------------------------------------------------------------ polynomials

def test_poly_degree():
    assert poly_degree(0) == -1
    assert poly_degree(1) == 0
    assert poly_degree(0x5) == 2


@pytest.mark.parametrize("text,mask", [
    ("0x5", 0x5),
    ("X^2+1", 0x5),
    ("x^2 + x + 1", 0x7),
    ("X", 0x2),
    ("1", 0x1),
    ("0", 0x0),
    ("0xB", 0xB),
])
def test_poly_parse(text, mask):
    assert poly_parse(text) == mask


def test_poly_parse_rejects_garbage():
    with pytest.raises(ValueError):
        poly_parse("X^2 - 1")
    with pytest.raises(ValueError):
        poly_parse("")


def test_poly_hex_is_canonical():
    assert poly_hex(0x5) == "0x5"
    assert poly_parse(poly_hex(0x13)) == 0x13


def test_gcd_examples():
    assert poly_gcd(0x5, 0x7) == 1            # (X+1)^2 vs irreducible
    assert poly_gcd(0x7, 0x7) == 0x7
    assert poly_gcd(0x9, 0xF) == 0x3          # common factor X+1


def test_gcd_of_zero():
    assert poly_gcd(0, 0x7) == 0x7
    with pytest.raises(ValueError, match="gcd undefined"):
        poly_gcd(0, 0)


@given(st.integers(0, 2**12 - 1), st.integers(1, 2**12 - 1))
def test_gcd_commutes_and_divides(p, q):
    g = poly_gcd(p, q)
    assert g == poly_gcd(q, p)
    assert gf2._poly_mod(p, g) == 0
    assert gf2._poly_mod(q, g) == 0


# --------------------------------------------------------------- matrices

def test_sylvester_rows_match_hand_layout():
    # columns 0..3 read left to right: 1010 / 0101 / 1110 / 0111
    assert M_90_150.rows == (0b0101, 0b1010, 0b0111, 0b1110)


def test_sylvester_identical_degree_one_inputs():
    m = sylvester_matrix(0x3, 0x3, 1)
    assert m.rows == (0b11, 0b11)
    assert not is_invertible(m)


def test_sylvester_rejects_bad_polynomials():
    with pytest.raises(ValueError, match="not a bipermutive rule polynomial"):
        sylvester_matrix(0x3, 0x3, 2)      # degree 1 inputs with n = 2
    with pytest.raises(ValueError, match="not a bipermutive rule polynomial"):
        sylvester_matrix(0x6, 0x7, 2)      # zero constant term


def test_matrix_validation():
    with pytest.raises(ValueError):
        GF2Matrix(2, (1, 4))               # bit beyond size
    with pytest.raises(ValueError):
        GF2Matrix(2, (1,))


def test_mat_mul_identity_and_zero():
    ident = GF2Matrix.identity(4)
    zero = GF2Matrix.zero(4)
    assert mat_mul(ident, M_90_150) == M_90_150
    assert mat_mul(M_90_150, ident) == M_90_150
    assert mat_mul(zero, M_90_150) == zero
    with pytest.raises(ValueError):
        mat_mul(M_90_150, GF2Matrix.identity(3))


def test_mat_mul_against_naive_oracle():
    rng = random.Random(7)
    for size in (1, 2, 3, 5, 8):
        for _ in range(20):
            a = random_matrix(rng, size)
            b = random_matrix(rng, size)
            assert mat_mul(a, b) == naive_mul(a, b)
    assert mat_mul(M_90_150, M_90_150) == naive_mul(M_90_150, M_90_150)


def test_mat_vec_matches_rowwise_parity():
    rng = random.Random(3)
    m = random_matrix(rng, 6)
    for v in range(64):
        expect = 0
        for i in range(6):
            expect |= (bin(m.rows[i] & v).count("1") & 1) << i
        assert mat_vec(m, v) == expect


def test_mat_pow_examples():
    assert mat_pow(M_90_150, 0) == GF2Matrix.identity(4)
    assert mat_pow(M_90_150, 15) == GF2Matrix.identity(4)
    assert mat_pow(M_90_150, 15) == repeated_pow(M_90_150, 15)
    assert mat_pow(M_90_150, 5) != GF2Matrix.identity(4)
    assert mat_pow(M_90_150, 5) == repeated_pow(M_90_150, 5)


def test_mat_pow_rejects_negative():
    with pytest.raises(ValueError):
        mat_pow(M_90_150, -1)


@settings(max_examples=60)
@given(st.integers(0, 2**16), st.integers(0, 2**16), st.integers(0, 2**30))
def test_mat_pow_additive(a, b, seed):
    m = random_matrix(random.Random(seed), 5)
    assert mat_pow(m, a + b) == mat_mul(mat_pow(m, a), mat_pow(m, b))


def test_is_invertible():
    assert is_invertible(GF2Matrix.identity(4))
    assert is_invertible(M_90_150)
    assert not is_invertible(sylvester_matrix(0x9, 0xF, 3))  # gcd = X+1


def test_is_invertible_against_injectivity_oracle():
    rng = random.Random(11)
    for size in (2, 3, 4, 6):
        for _ in range(25):
            m = random_matrix(rng, size)
            assert is_invertible(m) == injective_map(m)


# ----------------------------------------------------------------- orders

def test_gl_order_values():
    assert gl_order(1) == 1
    assert gl_order(2) == 6
    assert gl_order(4) == 20160


def test_gl_order_factors_multiply_back():
    for k in (1, 2, 3, 6, 10):
        factors = gf2._gl_order_factors(k)
        product = 1
        for p, mult in factors.items():
            product *= p**mult
        assert product == gl_order(k)


def test_factorize():
    assert factorize(15) == [3, 5]
    assert factorize(1048575) == [3, 5, 5, 11, 31, 41]
    assert factorize(1) == []
    with pytest.raises(ValueError):
        factorize(0)


@given(st.integers(1, 10**6))
def test_factorize_product_and_primality(t):
    factors = factorize(t)
    product = 1
    for p in factors:
        product *= p
        assert p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))
    assert product == t


def brute_force_order(m: GF2Matrix) -> int:
    ident = GF2Matrix.identity(m.size)
    power = m
    for e in range(1, (1 << (2 * m.size)) + 1):
        if power == ident:
            return e
        power = mat_mul(power, m)
    raise AssertionError("order not found")


def test_matrix_order_examples():
    assert matrix_order(GF2Matrix.identity(4)) == 1
    assert matrix_order(M_90_150) == 15
    with pytest.raises(ValueError, match="matrix not in GL"):
        matrix_order(sylvester_matrix(0x9, 0xF, 3))


def test_matrix_order_even_order_fallback():
    # order 2 does not divide 2^2 - 1 = 3, so this exercises the
    # full-group exponent path
    m = GF2Matrix(2, (0b11, 0b10))
    assert mat_mul(m, m) == GF2Matrix.identity(2)
    assert matrix_order(m) == 2


def test_matrix_order_against_brute_force():
    rng = random.Random(19)
    checked = 0
    while checked < 30:
        m = random_matrix(rng, 4)
        if not is_invertible(m):
            continue
        assert matrix_order(m) == brute_force_order(m)
        checked += 1


def test_matrix_order_divides_group_order():
    rng = random.Random(23)
    for size in (2, 3, 5, 6):
        checked = 0
        while checked < 10:
            m = random_matrix(rng, size)
            if not is_invertible(m):
                continue
            assert gl_order(size) % matrix_order(m) == 0
            checked += 1
