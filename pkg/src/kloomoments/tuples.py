"""Chunked enumeration of (F_q^*)^k for the brute-force oracles.

A tuple index ``idx`` in ``[0, (q-1)^k)`` is read in base q-1 with the most
significant digit first; digit ``d`` stands for the nonzero element with
code ``d + 1``.  Chunks are yielded in increasing ``idx`` order, so callers
that concatenate them get the canonical ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded
from .finite_field import FieldCtx

DEFAULT_BUDGET = 10**9
_BLOCK_CELLS = 1 << 20


@dataclass
class TupleChunk:
    """Per-tuple aggregates for one contiguous block of tuples."""

    xor_sum: np.ndarray      # alpha_1 + ... + alpha_k
    log_prod: np.ndarray     # log(alpha_1 * ... * alpha_k) mod q-1
    xor_inv_sum: np.ndarray  # alpha_1^-1 + ... + alpha_k^-1


def check_budget(q: int, k: int, budget: int) -> int:
    total = (q - 1) ** k
    if total > budget:
        raise BudgetExceeded(f"(q-1)^{k} = {total} tuples exceeds budget {budget}")
    return total


def _block(ctx: FieldCtx, k: int) -> TupleChunk:
    elems = np.arange(1, ctx.q, dtype=np.int64)
    logs = ctx.log[elems]
    invs = ctx.inverse_table[elems]
    s = np.zeros(1, dtype=np.int64)
    lp = np.zeros(1, dtype=np.int64)
    si = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        s = (s[:, None] ^ elems[None, :]).ravel()
        lp = ((lp[:, None] + logs[None, :]) % (ctx.q - 1)).ravel()
        si = (si[:, None] ^ invs[None, :]).ravel()
    return TupleChunk(s, lp, si)


def iter_tuples(ctx: FieldCtx, k: int, budget: int = DEFAULT_BUDGET) -> Iterator[TupleChunk]:
    check_budget(ctx.q, k, budget)
    inner = 0
    while inner < k and (ctx.q - 1) ** (inner + 1) <= _BLOCK_CELLS:
        inner += 1
    inner = max(inner, min(k, 1))
    block = _block(ctx, inner)
    qm1 = ctx.q - 1
    for prefix in itertools.product(range(1, ctx.q), repeat=k - inner):
        ps = pi = pl = 0
        for a in prefix:
            ps ^= a
            pi ^= ctx.inv(a)
            pl += int(ctx.log[a])
        yield TupleChunk(
            block.xor_sum ^ ps,
            (block.log_prod + pl) % qm1,
            block.xor_inv_sum ^ pi,
        )


def md_values(ctx: FieldCtx, chunk: TupleChunk) -> np.ndarray:
    """alpha_1 + ... + alpha_k + (alpha_1 ... alpha_k)^-1 per tuple."""
    inv_prod = ctx.exp[(-chunk.log_prod) % (ctx.q - 1)]
    return chunk.xor_sum ^ inv_prod


def pow_values(chunk: TupleChunk) -> np.ndarray:
    """alpha_1 + ... + alpha_k + alpha_1^-1 + ... + alpha_k^-1 per tuple."""
    return chunk.xor_sum ^ chunk.xor_inv_sum
