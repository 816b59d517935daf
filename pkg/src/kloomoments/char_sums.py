"""Kloosterman and multi-dimensional Kloosterman sums over GF(2^r).

All sums use the canonical additive character ``lambda(x) = (-1)^tr(x)``
unless a twist ``c`` is given, in which case ``psi(x) = lambda(c*x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedDegree, ZeroParameter
from .finite_field import FieldCtx
from .tuples import DEFAULT_BUDGET, iter_tuples

_INT64_SAFE = 1 << 62


def deligne_bound_holds(value: int, m: int, q: int) -> bool:
    """|value| <= (m+1) q^(m/2), compared exactly via squares."""
    return value * value <= (m + 1) ** 2 * q**m


@dataclass
class KsumTable:
    """K_m(lambda; a) for every a in F_q^*.

    ``values`` is indexed by element code; slot 0 is unused and holds 0.
    """

    m: int
    q: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, a: int) -> int:
        if a == 0:
            raise ZeroParameter("K_m(lambda; 0) is not defined")
        return int(self.values[a])

    def items(self):
        return ((a, int(self.values[a])) for a in range(1, self.q))

    def as_list(self) -> list[int]:
        return [int(v) for v in self.values[1:]]


def kloosterman(ctx: FieldCtx, a: int, twist: int = 1) -> int:
    """K(psi; a) = sum over alpha != 0 of psi(alpha + a/alpha)."""
    if a == 0 or twist == 0:
        raise ZeroParameter("kloosterman requires a != 0 and twist != 0")
    alpha = np.arange(1, ctx.q, dtype=np.int64)
    arg = alpha ^ ctx.mul_arr(ctx.inverse_table[alpha], a)
    return int(ctx.char_table[ctx.mul_arr(arg, twist)].sum())


def kloosterman_md_direct(ctx: FieldCtx, m: int, a: int, budget: int = DEFAULT_BUDGET) -> int:
    """K_m(lambda; a) by m-fold enumeration of (F_q^*)^m."""
    if a == 0:
        raise ZeroParameter("kloosterman_md_direct requires a != 0")
    if m < 1:
        raise ValueError("m must be >= 1")
    qm1 = ctx.q - 1
    la = int(ctx.log[a])
    total = 0
    for chunk in iter_tuples(ctx, m, budget):
        arg = chunk.xor_sum ^ ctx.exp[(la - chunk.log_prod) % qm1]
        total += int(ctx.char_table[arg].sum())
    return total


def _ksum_tables(ctx: FieldCtx, m_max: int) -> list[np.ndarray]:
    """Log-indexed K_0 .. K_{m_max}: entry i of table k is K_k(g^i).

    K_k(a) = sum_alpha lambda(alpha) K_{k-1}(a/alpha) is a cyclic
    convolution over the exponent group Z/(q-1).
    """
    qm1 = ctx.q - 1
    chi = ctx.char_table[ctx.exp[:qm1]]
    tables = [chi.copy()]
    for k in range(1, m_max + 1):
        prev = tables[-1]
        dtype = np.int64 if qm1**k < _INT64_SAFE else object
        prev = prev.astype(dtype)
        acc = np.zeros(qm1, dtype=dtype)
        for i in range(qm1):
            # acc[j] += chi[i] * prev[j - i]
            if chi[i] > 0:
                acc += np.roll(prev, i)
            else:
                acc -= np.roll(prev, i)
        tables.append(acc)
    return tables


def _to_code_indexed(ctx: FieldCtx, log_table: np.ndarray) -> np.ndarray:
    out = np.zeros(ctx.q, dtype=log_table.dtype)
    out[ctx.exp[: ctx.q - 1]] = log_table
    return out


def kloosterman_md_all(ctx: FieldCtx, m: int) -> KsumTable:
    """K_m(lambda; a) for all a via the convolution recursion, O(m q^2)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return KsumTable(m, ctx.q, _to_code_indexed(ctx, _ksum_tables(ctx, m)[m]))


def kloosterman_tables(ctx: FieldCtx, m_max: int) -> list[KsumTable]:
    """K_0 .. K_{m_max} in one pass; K_0(lambda; a) = lambda(a)."""
    return [KsumTable(k, ctx.q, _to_code_indexed(ctx, t))
            for k, t in enumerate(_ksum_tables(ctx, m_max))]


def artin_schreier_sum(ctx: FieldCtx, beta: int) -> int:
    """sum over alpha not in {0, 1} of lambda(beta / (alpha^2 + alpha))."""
    if beta == 0:
        raise ZeroParameter("artin_schreier_sum requires beta != 0")
    alpha = np.arange(2, ctx.q, dtype=np.int64)
    denom = ctx.mul_arr(alpha, alpha) ^ alpha
    terms = ctx.char_table[ctx.mul_arr(ctx.inverse_table[denom], beta)]
    assert terms.size == ctx.q - 2
    return int(terms.sum())


@dataclass
class ValueRangeReport:
    q: int
    predicted: list[int]
    observed: dict[int, int]

    @property
    def missing(self) -> list[int]:
        """Predicted values never attained (would refute surjectivity)."""
        return [t for t in self.predicted if self.observed.get(t, 0) == 0]

    @property
    def unexpected(self) -> list[int]:
        """Observed values outside the predicted range."""
        pred = set(self.predicted)
        return sorted(t for t in self.observed if t not in pred)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.unexpected

    def rows(self) -> list[dict]:
        # Both class-number arguments are listed; neither is asserted.
        return [
            {
                "t": t,
                "multiplicity": self.observed.get(t, 0),
                "t2_minus_q": t * t - self.q,
                "t2_minus_4q": t * t - 4 * self.q,
            }
            for t in self.predicted
        ]


def predicted_range(q: int) -> list[int]:
    """Integers t with |t| < 2 sqrt(q) and t = -1 (mod 4)."""
    bound = math.isqrt(4 * q)
    return [t for t in range(-bound, bound + 1) if t * t < 4 * q and t % 4 == 3]


def value_range(ctx: FieldCtx) -> ValueRangeReport:
    if ctx.r < 2:
        raise UnsupportedDegree("value range needs r >= 2")
    table = kloosterman_md_all(ctx, 1)
    observed: dict[int, int] = {}
    for _, v in table.items():
        observed[v] = observed.get(v, 0) + 1
    return ValueRangeReport(ctx.q, predicted_range(ctx.q), dict(sorted(observed.items())))
