from fractions import Fraction
from math import comb

import pytest

from kloomoments.char_sums import kloosterman
from kloomoments.errors import IdentityViolation, NotPowerOfTwo, UnsupportedDegree
from kloomoments.fiber_counts import CodeKind
from kloomoments.finite_field import build_field
from kloomoments.kloo_codes import CodeSpec, dual_weight_enumerator, weight_distribution
from kloomoments.moment_engine import (
    MomentKind,
    k2_bridge,
    moment_bound_holds,
    moment_oracle,
    oracle_sequence,
    pless_check,
    pless_sides,
    recursive_moments,
    stirling2,
    stirling2_explicit,
    stirling_triangle,
    weight_moment_sides,
)

from .conftest import field, full_distribution


def literal_k(ctx, a):
    return sum(ctx.char(x ^ ctx.mul(a, ctx.inv(x))) for x in ctx.nonzero)


# -- Stirling numbers -------------------------------------------------------

def test_stirling_small_values():
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(0, 0) == 1
    assert stirling_triangle(3) == [[1], [0, 1], [0, 1, 1], [0, 1, 3, 1]]


@pytest.mark.parametrize("h", range(1, 31))
def test_stirling_recurrence_vs_explicit(h):
    assert stirling2(h, h) == 1
    assert stirling2(h, 0) == 0
    for t in range(h + 1):
        assert stirling2(h, t) == stirling2_explicit(h, t)


def test_stirling_counts_surjections():
    # t! S(h,t) is the number of surjections from an h-set onto a t-set
    for h in range(1, 8):
        for t in range(1, h + 1):
            surj = sum((-1) ** j * comb(t, j) * (t - j) ** h for j in range(t + 1))
            assert surj == stirling2(h, t) * __import__("math").factorial(t)


def test_stirling_rejects_negative():
    with pytest.raises(ValueError):
        stirling2(-1, 0)


# -- oracle -----------------------------------------------------------------

@pytest.mark.parametrize("r", [3, 4])
def test_oracle_matches_literal_sums(r):
    ctx = field(r)
    ks = [literal_k(ctx, a) for a in ctx.nonzero]
    for h in range(5):
        assert moment_oracle(ctx, MomentKind.md(2), h) == sum(k**h for k in ks)
        assert moment_oracle(ctx, MomentKind.pow(3), h) == sum(k ** (3 * h) for k in ks)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_oracle_low_moments(r):
    ctx = field(r)
    q = ctx.q
    for kind in (MomentKind.md(2), MomentKind.md(4), MomentKind.pow(2), MomentKind.k2()):
        assert moment_oracle(ctx, kind, 0) == q - 1
    assert moment_oracle(ctx, MomentKind.md(2), 1) == 1
    # sum_a K(a)^2 = q^2 - q - 1, derived by expanding the square
    assert moment_oracle(ctx, MomentKind.md(2), 2) == q * q - q - 1
    assert moment_oracle(ctx, MomentKind.k2(), 1) == \
        moment_oracle(ctx, MomentKind.pow(2), 1) - q * (q - 1)


def test_md2_is_pow1(F16):
    assert oracle_sequence(F16, MomentKind.md(2), 6).values == \
        oracle_sequence(F16, MomentKind.pow(1), 6).values


@pytest.mark.parametrize("r", [3, 4, 5])
def test_moment_bound(r):
    ctx = field(r)
    for kind in (MomentKind.md(2), MomentKind.md(4), MomentKind.pow(2), MomentKind.k2()):
        assert moment_bound_holds(oracle_sequence(ctx, kind, 6))


# -- Pless identity ---------------------------------------------------------

@pytest.mark.parametrize("r", [3, 4])
@pytest.mark.parametrize("kind,param", [("md", 1), ("md", 3), ("pow", 1), ("pow", 2), ("pow", 3)])
def test_pless_identity(r, kind, param):
    ctx = field(r)
    spec = CodeSpec(kind, param, ctx)
    dual = dual_weight_enumerator(spec)
    code = weight_distribution(spec.counts(), max_weight=8)
    rows = pless_check(dual, code, spec.N, r, 8)
    assert [row["h"] for row in rows] == list(range(9))
    assert rows[0]["lhs"] == ctx.q


def test_pless_detects_tampering(F8):
    spec = CodeSpec.pow(F8, 2)
    dual = dual_weight_enumerator(spec)
    code = weight_distribution(spec.counts(), max_weight=8)
    code.freq[3] += 1
    with pytest.raises(IdentityViolation) as info:
        pless_check(dual, code, spec.N, 3, 8)
    assert info.value.h == 3


def test_pless_sides_small_explicit_code():
    # repetition code of length 3 and its dual (even-weight code)
    from kloomoments.kloo_codes import WeightEnumerator
    rep = WeightEnumerator(3, [1, 0, 0, 1])
    even = WeightEnumerator(3, [1, 0, 3, 0])
    for h in range(6):
        lhs, rhs = pless_sides(rep, even, 3, 1, h)
        assert lhs == rhs == 3**h + (h == 0)
        lhs, rhs = pless_sides(even, rep, 3, 2, h)
        assert lhs == rhs == 3 * 2**h + (h == 0)


# -- recursions -------------------------------------------------------------

@pytest.mark.parametrize("r", [3, 4, 5])
@pytest.mark.parametrize("kind", [MomentKind.md(2), MomentKind.md(4), MomentKind.pow(1),
                                  MomentKind.pow(2), MomentKind.pow(3), MomentKind.k2()])
def test_recursion_matches_oracle(r, kind):
    ctx = field(r)
    h_max = 6
    assert recursive_moments(ctx, kind, h_max).values == oracle_sequence(ctx, kind, h_max).values


def test_recursion_pow_indexes_power_moments(F8):
    rec = recursive_moments(F8, MomentKind.pow(3), 4)
    ks = [kloosterman(F8, a) for a in F8.nonzero]
    assert rec.values == [sum(k ** (3 * h) for k in ks) for h in range(5)]


def test_recursion_with_supplied_distribution(F16):
    dist = full_distribution(4, CodeKind.MD, 3)
    rec = recursive_moments(F16, MomentKind.md(4), 8, dist=dist)
    assert rec.values == oracle_sequence(F16, MomentKind.md(4), 8).values


def test_recursion_rejects_short_distribution(F8):
    dist = weight_distribution(CodeSpec.pow(F8, 2).counts(), max_weight=2)
    with pytest.raises(ValueError):
        recursive_moments(F8, MomentKind.pow(2), 5, dist=dist)


def test_recursion_errors():
    with pytest.raises(UnsupportedDegree):
        recursive_moments(build_field(2), MomentKind.md(2), 3)
    with pytest.raises(NotPowerOfTwo):
        recursive_moments(field(3), MomentKind.md(3), 3)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_k2_bridge(r):
    ctx = field(r)
    sq = recursive_moments(ctx, MomentKind.pow(2), 5)
    assert k2_bridge(ctx.q, sq) == recursive_moments(ctx, MomentKind.k2(), 5).values


def test_k2_bridge_wrong_input(F8):
    with pytest.raises(ValueError):
        k2_bridge(8, oracle_sequence(F8, MomentKind.pow(1), 3))


@pytest.mark.parametrize("r", [3, 4])
@pytest.mark.parametrize("kind", [MomentKind.md(2), MomentKind.md(4), MomentKind.pow(2), MomentKind.k2()])
def test_weight_moment_sides(r, kind):
    ctx = field(r)
    for h in range(6):
        direct, expanded = weight_moment_sides(ctx, kind, h)
        assert direct == expanded
        assert isinstance(direct, Fraction)
