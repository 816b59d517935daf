"""Fiber counts of the two defining expressions over (F_q^*)^k.

``MD`` counts tuples with ``a_1 + ... + a_k + (a_1 ... a_k)^-1 = beta``
(written delta(k, q; beta)); ``POW`` counts tuples with
``a_1 + ... + a_k + a_1^-1 + ... + a_k^-1 = beta`` (sigma(k, q; beta)).
Each count table is available by direct enumeration and by a character
sum formula; the two must agree exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .char_sums import kloosterman_md_all, kloosterman_tables
from .errors import IdentityViolation, NonIntegralCount
from .finite_field import FieldCtx
from .tuples import DEFAULT_BUDGET, iter_tuples, md_values, pow_values


class CodeKind(str, enum.Enum):
    MD = "md"
    POW = "pow"


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass
class CountTable:
    kind: CodeKind
    param: int
    q: int
    counts: list[int] = field(repr=False)

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise NonIntegralCount(f"negative fiber count in {self.kind.value}({self.param})")

    def __getitem__(self, beta: int) -> int:
        return self.counts[beta]

    def __eq__(self, other):
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.kind, self.param, self.q, self.counts) == (
            other.kind, other.param, other.q, other.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def length(self) -> int:
        return (self.q - 1) ** self.param


def _exact_div(num: int, q: int) -> int:
    quot, rem = divmod(num, q)
    if rem:
        raise NonIntegralCount(f"{num} is not divisible by {q}")
    return quot


def _direct(ctx: FieldCtx, kind: CodeKind, k: int, budget: int) -> CountTable:
    counts = np.zeros(ctx.q, dtype=np.int64)
    for chunk in iter_tuples(ctx, k, budget):
        vals = md_values(ctx, chunk) if kind is CodeKind.MD else pow_values(chunk)
        counts += np.bincount(vals, minlength=ctx.q)
    return CountTable(kind, k, ctx.q, [int(c) for c in counts])


def delta_direct(ctx: FieldCtx, nm1: int, budget: int = DEFAULT_BUDGET) -> CountTable:
    return _direct(ctx, CodeKind.MD, nm1, budget)


def sigma_direct(ctx: FieldCtx, m: int, budget: int = DEFAULT_BUDGET) -> CountTable:
    return _direct(ctx, CodeKind.POW, m, budget)


def delta_formula(ctx: FieldCtx, nm1: int) -> CountTable:
    """delta(k, q; beta) from Kloosterman sums.

    For k + 1 a power of two this is the closed form
    ``((q-1)^k + 1)/q`` at 0 and ``K_{k-1}(lambda; 1/beta) + ((q-1)^k + 1)/q``
    otherwise, with K_0(lambda; x) = lambda(x).  Other k have no such
    closed form; there the orthogonality expansion
    ``q delta(beta) = (q-1)^k + sum_c K_k(lambda; c^(k+1)) lambda(c beta)``
    is evaluated instead.
    """
    q = ctx.q
    if nm1 < 1:
        raise ValueError("nm1 must be >= 1")
    if is_power_of_two(nm1 + 1):
        base = _exact_div((q - 1) ** nm1 + 1, q)
        k_prev = kloosterman_tables(ctx, nm1 - 1)[nm1 - 1]
        counts = [base] + [k_prev[ctx.inv(beta)] + base for beta in ctx.nonzero]
        return CountTable(CodeKind.MD, nm1, q, counts)

    k_tab = kloosterman_md_all(ctx, nm1)
    twisted = [k_tab[ctx.pow(c, nm1 + 1)] for c in ctx.nonzero]
    counts = []
    for beta in range(q):
        acc = (q - 1) ** nm1
        for c, kv in zip(ctx.nonzero, twisted):
            acc += kv * ctx.char(ctx.mul(c, beta))
        counts.append(_exact_div(acc, q))
    return CountTable(CodeKind.MD, nm1, q, counts)


def _inverse_phase_sum(ctx: FieldCtx, m: int) -> np.ndarray:
    """S_m(beta): sum of lambda(a_1 + ... + a_m) over tuples with sum of inverses beta.

    One factor has distribution f(gamma) = lambda(1/gamma) on gamma != 0;
    S_m is the m-fold XOR convolution of f with itself.
    """
    q = ctx.q
    dtype = np.int64 if (q - 1) ** m < (1 << 62) else object
    f = np.zeros(q, dtype=dtype)
    f[1:] = ctx.char_table[ctx.inverse_table[1:]]
    idx = np.arange(q)
    acc = f.copy()
    for _ in range(m - 1):
        nxt = np.zeros(q, dtype=dtype)
        for gamma in range(1, q):
            nxt += f[gamma] * acc[idx ^ gamma]
        acc = nxt
    return acc


def sigma_formula(ctx: FieldCtx, m: int) -> CountTable:
    """sigma(m, q; beta) = S_m(beta) + ((q-1)^m + (-1)^(m+1)) / q."""
    if m < 1:
        raise ValueError("m must be >= 1")
    q = ctx.q
    base = _exact_div((q - 1) ** m + (-1) ** (m + 1), q)
    phase = _inverse_phase_sum(ctx, m)
    counts = [int(phase[beta]) + base for beta in range(q)]
    table = CountTable(CodeKind.POW, m, q, counts)
    if m == 2:
        k1 = kloosterman_md_all(ctx, 1)
        closed = [2 * q - 3] + [k1[ctx.inv(b)] + q - 3 for b in ctx.nonzero]
        if closed != counts:
            raise IdentityViolation("sigma(2, q; beta) closed form", None, counts, closed)
    return table


def character_reconstruction(ctx: FieldCtx, table: CountTable, a: int) -> int:
    """sum over beta of count[beta] * lambda(a * beta)."""
    return sum(c * ctx.char(ctx.mul(a, beta)) for beta, c in enumerate(table.counts))
