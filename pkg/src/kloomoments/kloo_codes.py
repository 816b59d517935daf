"""The binary codes C_{n-1} and D_m, their duals, and weight distributions.

A code is the set of binary words ``u`` of length N with ``sum u_i g_i = 0``
in F_q, where ``g`` is the defining vector.  Its dual consists of the words
``c(a)_i = tr(a g_i)``.  The full weight distribution is computed by a
dynamic program over the fiber counts of ``g`` and cross-checked against
the MacWilliams transform of the (q-element) dual enumerator and, for
short codes, exhaustive enumeration.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import comb

import gmpy2
import numpy as np

from .char_sums import KsumTable, kloosterman_md_all
from .errors import (
    BudgetExceeded,
    InjectivityFailure,
    NonIntegralCount,
    NotPowerOfTwo,
    ParityViolation,
    UnsupportedDegree,
)
from .fiber_counts import CodeKind, CountTable, delta_formula, is_power_of_two, sigma_formula
from .finite_field import FieldCtx
from .tuples import DEFAULT_BUDGET, check_budget, iter_tuples, md_values, pow_values

DP_BUDGET = 5000
EXHAUSTIVE_MAX_N = 20


@dataclass(frozen=True)
class CodeSpec:
    """Which code: ``MD`` with param n-1 (code C_{n-1}) or ``POW`` with param m (D_m)."""

    kind: CodeKind
    param: int
    ctx: FieldCtx = field(repr=False, compare=False)
    allow_any_n: bool = False
    allow_r2: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", CodeKind(self.kind))
        if self.param < 1:
            raise ValueError("code parameter must be >= 1")
        if self.kind is CodeKind.MD and not self.allow_any_n and not is_power_of_two(self.param + 1):
            raise NotPowerOfTwo(f"n = {self.param + 1} is not a power of two")

    @classmethod
    def md(cls, ctx: FieldCtx, n: int, **kw) -> "CodeSpec":
        return cls(CodeKind.MD, n - 1, ctx, **kw)

    @classmethod
    def pow(cls, ctx: FieldCtx, m: int, **kw) -> "CodeSpec":
        return cls(CodeKind.POW, m, ctx, **kw)

    @property
    def N(self) -> int:
        return (self.ctx.q - 1) ** self.param

    @property
    def label(self) -> str:
        if self.kind is CodeKind.MD:
            return f"C_{self.param}(q={self.ctx.q})"
        return f"D_{self.param}(q={self.ctx.q})"

    def counts(self) -> CountTable:
        """Fiber counts of the defining vector (formula route)."""
        if self.kind is CodeKind.MD:
            return delta_formula(self.ctx, self.param)
        return sigma_formula(self.ctx, self.param)


@dataclass
class DefiningVector:
    spec: CodeSpec
    entries: np.ndarray = field(repr=False)

    def multiset(self) -> list[int]:
        return [int(c) for c in np.bincount(self.entries, minlength=self.spec.ctx.q)]


@dataclass
class WeightEnumerator:
    """``freq[j]`` codewords of weight j; ``max_weight`` set when truncated."""

    N: int
    freq: list[int]
    max_weight: int | None = None

    @property
    def size(self) -> int:
        if self.max_weight is not None:
            raise ValueError("size of a truncated enumerator is unknown")
        return sum(self.freq)

    def __getitem__(self, j: int) -> int:
        return self.freq[j]

    def as_strings(self) -> list[str]:
        return [str(v) for v in self.freq]


# -- defining vector and dual words ----------------------------------------

def build_defining_vector(spec: CodeSpec, budget: int = DEFAULT_BUDGET) -> DefiningVector:
    ctx = spec.ctx
    check_budget(ctx.q, spec.param, budget)
    parts = []
    for chunk in iter_tuples(ctx, spec.param, budget):
        parts.append(md_values(ctx, chunk) if spec.kind is CodeKind.MD else pow_values(chunk))
    return DefiningVector(spec, np.concatenate(parts))


def dual_codeword(vec: DefiningVector, a: int) -> np.ndarray:
    """Bits tr(a * g_i) as a uint8 array."""
    ctx = vec.spec.ctx
    return ctx.trace_table[ctx.mul_arr(vec.entries, a)].astype(np.uint8)


@functools.lru_cache(maxsize=32)
def _ksum(ctx: FieldCtx, m: int) -> KsumTable:
    return kloosterman_md_all(ctx, m)


def _dual_char_sum(spec: CodeSpec, a: int) -> int:
    """sum_i lambda(a g_i), the Kloosterman-side value for a != 0."""
    ctx = spec.ctx
    if spec.kind is CodeKind.POW:
        return _ksum(ctx, 1)[a] ** spec.param
    if is_power_of_two(spec.param + 1):
        return _ksum(ctx, spec.param)[a]
    # a -> a^n is not a Frobenius power here, so the twist survives.
    return _ksum(ctx, spec.param)[ctx.pow(a, spec.param + 1)]


def dual_weight(spec: CodeSpec, a: int) -> int:
    """Closed-form Hamming weight of the dual word for ``a``: (N - K)/2."""
    if a == 0:
        return 0
    diff = spec.N - _dual_char_sum(spec, a)
    if diff % 2:
        raise ParityViolation(f"{spec.label}: N - K = {diff} is odd at a={a}")
    w = diff // 2
    assert 0 <= w <= spec.N
    return w


# -- injectivity ------------------------------------------------------------

def injectivity_inequality_holds(spec: CodeSpec) -> bool:
    """The sufficient condition making a -> c(a) injective.

    MD: (q-1)^(n-1) > n q^((n-1)/2);  POW: (q-1)^m > 2^m q^(m/2).
    Both are compared after squaring, in exact integers.
    """
    q, k = spec.ctx.q, spec.param
    lhs = (q - 1) ** (2 * k)
    if spec.kind is CodeKind.MD:
        return lhs > (k + 1) ** 2 * q**k
    return lhs > 4**k * q**k


@dataclass
class InjectivityReport:
    label: str
    inequality_holds: bool
    injective: bool
    zero_words: list[int]

    @property
    def consistent(self) -> bool:
        """The inequality is sufficient, so it may never hold while injectivity fails."""
        return self.injective or not self.inequality_holds


def injectivity_check(spec: CodeSpec, budget: int = DEFAULT_BUDGET) -> InjectivityReport:
    ctx = spec.ctx
    vec = build_defining_vector(spec, budget)
    support = np.flatnonzero(np.bincount(vec.entries, minlength=ctx.q))
    zero_words = [a for a in ctx.nonzero
                  if not ctx.trace_table[ctx.mul_arr(support, a)].any()]
    return InjectivityReport(spec.label, injectivity_inequality_holds(spec), not zero_words, zero_words)


def dual_weight_enumerator(spec: CodeSpec, override: bool = False) -> WeightEnumerator:
    """Enumerator of the q-element dual code {c(a) : a in F_q}."""
    if spec.ctx.r < 3 and not (spec.allow_r2 or override):
        raise UnsupportedDegree("dual enumerator needs r >= 3 (pass allow_r2 to experiment)")
    N = spec.N
    freq = [0] * (N + 1)
    freq[0] = 1
    zero = []
    for a in spec.ctx.nonzero:
        w = dual_weight(spec, a)
        if w == 0:
            zero.append(a)
        freq[w] += 1
    if zero and not override:
        raise InjectivityFailure(f"{spec.label}: c(a) = 0 for a in {zero}")
    return WeightEnumerator(N, freq)


# -- weight distribution ----------------------------------------------------

def _slot_bytes(bound: int) -> int:
    return (bound.bit_length() + 8) // 8


def _unpack(value, nslots: int, slot_bytes: int) -> list[int]:
    raw = int(value).to_bytes(nslots * slot_bytes + 1, "little")
    return [int.from_bytes(raw[j * slot_bytes:(j + 1) * slot_bytes], "little")
            for j in range(nslots)]


def _pack(coeffs: list[int], slot_bits: int):
    out = gmpy2.mpz(0)
    for j, c in enumerate(coeffs):
        if c:
            out += gmpy2.mpz(c) << (slot_bits * j)
    return out


def weight_distribution(counts: CountTable, max_weight: int | None = None,
                        budget: int = DP_BUDGET) -> WeightEnumerator:
    """Weight distribution of {u : sum u_i g_i = 0} from the fiber counts of g.

    freq[j] = sum over {nu_beta} with sum nu = j and sum nu*beta = 0 of
    prod binom(count[beta], nu_beta).  In characteristic 2 only the parity
    of nu_beta matters for the F_q sum, so each beta contributes an even
    polynomial E(x) and an odd polynomial O(x).  The state is one weight
    polynomial per partial sum s, updated as

        new[s] = E * old[s] + O * old[s + beta].

    Polynomials are stored evaluated at X = 2^B with B wider than any
    coefficient, so one big-integer product is one polynomial product.
    """
    N = counts.total
    q = counts.q
    if max_weight is not None and max_weight < N:
        return _weight_distribution_truncated(counts, max_weight)
    if N > budget:
        raise BudgetExceeded(f"code length {N} exceeds DP budget {budget}")

    # Every coefficient of every state polynomial is at most 2^N.
    slot_bytes = _slot_bytes(1 << N)
    X = gmpy2.mpz(1) << (8 * slot_bytes)
    state = [gmpy2.mpz(0)] * q
    state[0] = gmpy2.mpz(1)
    for beta, c in enumerate(counts.counts):
        if c == 0:
            continue
        plus = (1 + X) ** c     # E + O
        if beta == 0:
            state = [plus * p for p in state]
            continue
        minus = (1 - X) ** c    # E - O
        for s in range(q):
            t = s ^ beta
            if t < s:
                continue
            a, b = state[s], state[t]
            u = plus * (a + b)
            v = minus * (a - b)
            state[s] = (u + v) >> 1
            state[t] = (u - v) >> 1
    return WeightEnumerator(N, _unpack(state[0], N + 1, slot_bytes))


def _weight_distribution_truncated(counts: CountTable, J: int) -> WeightEnumerator:
    """freq[0..J] only; the direct (non-butterfly) transfer, reduced mod x^(J+1)."""
    N, q = counts.total, counts.q
    slot_bytes = _slot_bytes(sum(comb(N, j) for j in range(J + 1)))
    bits = 8 * slot_bytes
    mask = (gmpy2.mpz(1) << (bits * (J + 1))) - 1
    state = [gmpy2.mpz(0)] * q
    state[0] = gmpy2.mpz(1)
    for beta, c in enumerate(counts.counts):
        if c == 0:
            continue
        even = _pack([comb(c, v) if v % 2 == 0 else 0 for v in range(min(c, J) + 1)], bits)
        odd = _pack([comb(c, v) if v % 2 == 1 else 0 for v in range(min(c, J) + 1)], bits)
        state = [(even * state[s] + odd * state[s ^ beta]) & mask for s in range(q)]
    return WeightEnumerator(N, _unpack(state[0], J + 1, slot_bytes), max_weight=J)


def exhaustive_weight_distribution(entries, q: int) -> WeightEnumerator:
    """Enumerate all 2^N binary words; only for N <= EXHAUSTIVE_MAX_N."""
    entries = [int(g) for g in entries]
    N = len(entries)
    if N > EXHAUSTIVE_MAX_N:
        raise BudgetExceeded(f"exhaustive enumeration limited to N <= {EXHAUSTIVE_MAX_N}")
    sums = np.zeros(1, dtype=np.int64)
    wts = np.zeros(1, dtype=np.int64)
    for g in entries:
        sums = np.concatenate([sums, sums ^ g])
        wts = np.concatenate([wts, wts + 1])
    freq = np.bincount(wts[sums == 0], minlength=N + 1)
    return WeightEnumerator(N, [int(v) for v in freq])


def krawtchouk_row(N: int, i: int) -> list[int]:
    """Coefficients of (1+x)^(N-i) (1-x)^i, via the three-term recurrence."""
    row = [1]
    if N >= 1:
        row.append(N - 2 * i)
    for j in range(1, N):
        num = (N - 2 * i) * row[j] - (N - j + 1) * row[j - 1]
        row.append(num // (j + 1))
    return row


def macwilliams_transform(dual: WeightEnumerator, N: int, dual_size: int | None = None) -> WeightEnumerator:
    """Binary MacWilliams identity: enumerator of the dual of ``dual``."""
    if dual_size is None:
        dual_size = dual.size
    if dual_size != sum(dual.freq):
        raise ValueError("dual_size does not match the enumerator total")
    acc = [0] * (N + 1)
    for i, b in enumerate(dual.freq):
        if b:
            for j, k in enumerate(krawtchouk_row(N, i)):
                acc[j] += b * k
    freq = []
    for j, v in enumerate(acc):
        quot, rem = divmod(v, dual_size)
        if rem:
            raise NonIntegralCount(f"MacWilliams coefficient {j} not divisible by {dual_size}")
        freq.append(quot)
    return WeightEnumerator(N, freq)
