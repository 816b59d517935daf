import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kloomoments.errors import DegreeMismatch, ReducibleModulus, UnsupportedDegree, ZeroInverse
from kloomoments.finite_field import (
    additive_character,
    build_field,
    canonical_character,
    default_modulus_table,
    fq_inv,
    fq_mul,
    parse_field_spec,
    poly_mulmod,
)

from .conftest import field


def _has_factor_bruteforce(poly):
    """Exhaustive search for any nontrivial factor via long division."""
    deg = poly.bit_length() - 1
    for d in range(2, 1 << deg):
        rem = poly
        while rem.bit_length() >= d.bit_length():
            rem ^= d << (rem.bit_length() - d.bit_length())
        if rem == 0:
            return True
    return False


def test_default_modulus_r3():
    ctx = build_field(3)
    assert ctx.q == 8
    assert ctx.modulus == 0b1011
    # x^3 + x + 1 is the first degree-3 polynomial without a factor
    first = next(p for p in range(8, 16) if not _has_factor_bruteforce(p))
    assert first == 0b1011


def test_default_modulus_table_is_irreducible_and_minimal():
    table = default_modulus_table(10)
    for r, mod in table.items():
        assert mod.bit_length() - 1 == r
        assert not _has_factor_bruteforce(mod)
        assert all(_has_factor_bruteforce(p) for p in range(1 << r, mod))


def test_trace_small_values():
    ctx = build_field(3)
    assert ctx.trace(0) == 0
    assert ctx.trace(1) == 1


def test_mul_examples():
    ctx = build_field(3)
    for y in range(8):
        assert fq_mul(ctx, 0, y) == 0
        assert fq_mul(ctx, 1, y) == y
    assert fq_mul(ctx, 2, 4) == 3


def test_inverse_examples():
    ctx = build_field(3)
    assert fq_inv(ctx, 1) == 1
    assert [y for y in range(8) if poly_mulmod(2, y, 0b1011) == 1] == [5]
    assert fq_inv(ctx, 2) == 5
    with pytest.raises(ZeroInverse):
        fq_inv(ctx, 0)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 8])
def test_inverse_exhaustive(r):
    ctx = field(r)
    for x in range(1, ctx.q):
        assert ctx.mul(x, ctx.inv(x)) == 1


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_field_axioms_exhaustive(r):
    ctx = field(r)
    q = ctx.q
    x, y, z = (a.ravel() for a in np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij"))
    xy = ctx.mul_arr(x, y)
    assert np.array_equal(xy, ctx.mul_arr(y, x))
    assert np.array_equal(ctx.mul_arr(xy, z), ctx.mul_arr(x, ctx.mul_arr(y, z)))
    assert np.array_equal(ctx.mul_arr(x, y ^ z), xy ^ ctx.mul_arr(x, z))


@pytest.mark.parametrize("r", [3, 4, 8])
def test_table_mul_matches_polynomial_mul(r):
    ctx = field(r)
    for a, b in itertools.product(range(ctx.q), repeat=2):
        if (a * 7 + b) % 5 == 0 or ctx.q <= 16:
            assert ctx.mul(a, b) == poly_mulmod(a, b, ctx.modulus)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7, 8])
def test_trace_properties(r):
    ctx = field(r)
    q = ctx.q
    # direct definition x + x^2 + ... + x^(2^(r-1))
    for x in range(q):
        acc, y = 0, x
        for _ in range(r):
            acc ^= y
            y = poly_mulmod(y, y, ctx.modulus)
        assert acc == ctx.trace(x)
    x, y = (a.ravel() for a in np.meshgrid(np.arange(q), np.arange(q), indexing="ij"))
    tr = ctx.trace_table
    assert np.array_equal(tr[x ^ y], tr[x] ^ tr[y])
    assert np.array_equal(tr[ctx.mul_arr(np.arange(q), np.arange(q))], tr)
    assert np.count_nonzero(tr == 0) == q // 2
    assert ctx.trace(1) == r % 2


@pytest.mark.parametrize("r", [2, 3, 4, 5, 8])
def test_character_orthogonality(r):
    ctx = field(r)
    assert canonical_character(ctx, 0) == 1
    assert sum(canonical_character(ctx, x) for x in range(ctx.q)) == 0
    for c in range(ctx.q):
        total = sum(additive_character(ctx, c, x) for x in range(ctx.q))
        assert total == (ctx.q if c == 0 else 0)


def test_character_examples():
    ctx = build_field(3)
    assert sum(1 for x in range(8) if canonical_character(ctx, x) == 1) == 4
    for x in range(8):
        assert additive_character(ctx, 1, x) == canonical_character(ctx, x)
        assert additive_character(ctx, 0, x) == 1
        for c in range(8):
            assert additive_character(ctx, c, x) == additive_character(ctx, x, c)


@settings(max_examples=200, deadline=None)
@given(r=st.integers(2, 12), data=st.data())
def test_character_is_additive(r, data):
    ctx = field(r)
    x = data.draw(st.integers(0, ctx.q - 1))
    y = data.draw(st.integers(0, ctx.q - 1))
    assert ctx.char(x ^ y) == ctx.char(x) * ctx.char(y)
    assert ctx.mul(x, y) == poly_mulmod(x, y, ctx.modulus)


def test_construction_errors():
    with pytest.raises(UnsupportedDegree):
        build_field(1)
    with pytest.raises(UnsupportedDegree):
        build_field(21)
    with pytest.raises(ReducibleModulus):
        build_field(3, 0b1000)
    with pytest.raises(DegreeMismatch):
        build_field(3, 0b10011)


def test_modulus_choice_does_not_change_trace_counts():
    a = build_field(3, 0b1011)
    b = build_field(3, 0b1101)
    assert np.count_nonzero(a.trace_table == 0) == np.count_nonzero(b.trace_table == 0)


def test_parse_field_spec():
    assert parse_field_spec("3").modulus == 0b1011
    assert parse_field_spec("3:b").modulus == 0b1011
    assert parse_field_spec("3:d").modulus == 0b1101
    with pytest.raises(ReducibleModulus):
        parse_field_spec("3:8")


def test_tables_are_read_only():
    ctx = build_field(3)
    with pytest.raises(ValueError):
        ctx.trace_table[0] = 1
