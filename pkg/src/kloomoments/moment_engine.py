"""Power moments of Kloosterman sums: recursive formulas and brute-force oracle.

The recursions come from applying the Pless power-moment identity to the
q-element dual code, whose nonzero weights are (N - K)/2.  Expanding
sum_a ((N - K(a))/2)^h binomially and isolating the l = h term gives

    M[h] = sum_{l<h} (-1)^(h+l+1) C(h,l) A^(h-l) M[l]
           + q sum_{j<=min(N,h)} (-1)^(h+j) W_j sum_{t=j..h} t! S(h,t) 2^(h-t) C(N-j, N-t)

with A = N for the K_{n-1} and K^m families and A = q^2 - 3q + 1 for K_2,
W the weight distribution of the primal code, and M[0] = q - 1.  Note
that the shift is raised to h - l, not h - 1, inside the l-sum.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .char_sums import deligne_bound_holds, kloosterman_tables
from .errors import IdentityViolation, NotPowerOfTwo, UnsupportedDegree
from .fiber_counts import is_power_of_two
from .finite_field import FieldCtx
from .kloo_codes import CodeSpec, WeightEnumerator, weight_distribution


# -- Stirling numbers -------------------------------------------------------

@functools.lru_cache(maxsize=None)
def stirling2(h: int, t: int) -> int:
    """S(h, t) by the recurrence S(h,t) = t S(h-1,t) + S(h-1,t-1)."""
    if h < 0 or t < 0:
        raise ValueError("stirling2 needs nonnegative arguments")
    if t > h:
        return 0
    if h == t:
        return 1
    if t == 0:
        return 0
    return t * stirling2(h - 1, t) + stirling2(h - 1, t - 1)


def stirling2_explicit(h: int, t: int) -> int:
    """S(h, t) = (1/t!) sum_j (-1)^(t-j) C(t,j) j^h."""
    if t > h:
        return 0
    total = sum((-1) ** (t - j) * comb(t, j) * j**h for j in range(t + 1))
    quot, rem = divmod(total, factorial(t))
    assert rem == 0
    return quot


def stirling_triangle(h_max: int) -> list[list[int]]:
    return [[stirling2(h, t) for t in range(h + 1)] for h in range(h_max + 1)]


# -- moment families --------------------------------------------------------

class Family(str, enum.Enum):
    MD = "md"    # K_{n-1}, parameter n
    POW = "pow"  # K^m, parameter m
    K2 = "k2"    # K_2


@dataclass(frozen=True)
class MomentKind:
    family: Family
    param: int = 0

    @classmethod
    def md(cls, n: int) -> "MomentKind":
        return cls(Family.MD, n)

    @classmethod
    def pow(cls, m: int) -> "MomentKind":
        return cls(Family.POW, m)

    @classmethod
    def k2(cls) -> "MomentKind":
        return cls(Family.K2, 2)

    def __str__(self):
        if self.family is Family.K2:
            return "k2"
        return f"{self.family.value}({self.param})"


@dataclass
class MomentSequence:
    kind: MomentKind
    q: int
    values: list[int]

    def __getitem__(self, h: int) -> int:
        return self.values[h]

    @property
    def h_max(self) -> int:
        return len(self.values) - 1


def kvalues(ctx: FieldCtx, kind: MomentKind) -> list[int]:
    """The per-a summand whose h-th power the moment sums, over a in F_q^*."""
    if kind.family is Family.MD:
        return kloosterman_tables(ctx, kind.param - 1)[-1].as_list()
    k1 = kloosterman_tables(ctx, 1)[1].as_list()
    if kind.family is Family.POW:
        return [v**kind.param for v in k1]
    return kloosterman_tables(ctx, 2)[2].as_list()


def moment_oracle(ctx: FieldCtx, kind: MomentKind, h: int) -> int:
    """sum over a != 0 of value(a)^h, from the tabulated sums."""
    return sum(v**h for v in kvalues(ctx, kind))


def oracle_sequence(ctx: FieldCtx, kind: MomentKind, h_max: int) -> MomentSequence:
    vals = kvalues(ctx, kind)
    return MomentSequence(kind, ctx.q, [sum(v**h for v in vals) for h in range(h_max + 1)])


def moment_bound_holds(seq: MomentSequence) -> bool:
    """|M[h]| <= (q-1) B^h with B the Deligne bound of one summand."""
    q, kind = seq.q, seq.kind
    if kind.family is Family.MD:
        dim, coef = kind.param - 1, kind.param
        sq_bound = coef**2 * q**dim
    elif kind.family is Family.POW:
        sq_bound = (4 * q) ** kind.param
    else:
        sq_bound = 9 * q**2
    return all(v * v <= (q - 1) ** 2 * sq_bound**h for h, v in enumerate(seq.values))


# -- Pless identity ---------------------------------------------------------

def _pless_inner(h: int, N: int, j: int) -> int:
    """sum_{t=j..h} t! S(h,t) 2^(h-t) C(N-j, N-t); zero terms for t > N."""
    return sum(
        factorial(t) * stirling2(h, t) * 2 ** (h - t) * comb(N - j, N - t)
        for t in range(j, min(h, N) + 1)
    )


def pless_sides(dual: WeightEnumerator, code: WeightEnumerator, N: int, k: int, h: int):
    """Both sides of the binary Pless identity for the [N, k] code ``dual``."""
    lhs = sum(i**h * b for i, b in enumerate(dual.freq) if b)
    rhs = Fraction(0)
    for i in range(min(N, h) + 1):
        inner = sum(
            factorial(t) * stirling2(h, t) * Fraction(2) ** (k - t) * comb(N - i, N - t)
            for t in range(i, min(h, N) + 1)
        )
        rhs += (-1) ** i * code.freq[i] * inner
    return lhs, rhs


def pless_check(dual: WeightEnumerator, code: WeightEnumerator, N: int, k: int,
                h_max: int) -> list[dict]:
    """Check the identity for h = 0..h_max; raise at the first failure."""
    rows = []
    for h in range(h_max + 1):
        lhs, rhs = pless_sides(dual, code, N, k, h)
        if lhs != rhs:
            raise IdentityViolation("Pless power moment identity", h, lhs, rhs)
        rows.append({"h": h, "lhs": lhs, "rhs": int(rhs)})
    return rows


# -- recursions -------------------------------------------------------------

def _recurse(q: int, N: int, shift: int, dist: WeightEnumerator, h_max: int) -> list[int]:
    if dist.max_weight is not None and dist.max_weight < min(N, h_max):
        raise ValueError("weight distribution truncated below h_max")
    values = [q - 1]
    for h in range(1, h_max + 1):
        acc = sum(
            (-1) ** (h + l + 1) * comb(h, l) * shift ** (h - l) * values[l]
            for l in range(h)
        )
        acc += q * sum(
            (-1) ** (h + j) * dist.freq[j] * _pless_inner(h, N, j)
            for j in range(min(N, h) + 1)
        )
        values.append(acc)
    return values


def _require_r3(ctx: FieldCtx):
    if ctx.r < 3:
        raise UnsupportedDegree("the recursive formulas need r >= 3")


def recursive_moments_md(ctx: FieldCtx, n: int, h_max: int,
                         dist: WeightEnumerator | None = None) -> MomentSequence:
    """MK_{n-1}^h for h = 0..h_max from the weight distribution of C_{n-1}."""
    _require_r3(ctx)
    if not is_power_of_two(n) or n < 2:
        raise NotPowerOfTwo(f"n = {n} must be a power of two >= 2")
    spec = CodeSpec.md(ctx, n)
    if dist is None:
        dist = weight_distribution(spec.counts(), max_weight=h_max)
    vals = _recurse(ctx.q, spec.N, spec.N, dist, h_max)
    return MomentSequence(MomentKind.md(n), ctx.q, vals)


def recursive_moments_power(ctx: FieldCtx, m: int, h_max: int,
                            dist: WeightEnumerator | None = None) -> MomentSequence:
    """values[h] = MK^(m h), from the weight distribution of D_m."""
    _require_r3(ctx)
    spec = CodeSpec.pow(ctx, m)
    if dist is None:
        dist = weight_distribution(spec.counts(), max_weight=h_max)
    vals = _recurse(ctx.q, spec.N, spec.N, dist, h_max)
    return MomentSequence(MomentKind.pow(m), ctx.q, vals)


def recursive_moments_k2(ctx: FieldCtx, h_max: int,
                         dist: WeightEnumerator | None = None) -> MomentSequence:
    """MK_2^h via the shifted recursion (base q^2 - 3q + 1) over D_2."""
    _require_r3(ctx)
    q = ctx.q
    spec = CodeSpec.pow(ctx, 2)
    if dist is None:
        dist = weight_distribution(spec.counts(), max_weight=h_max)
    vals = _recurse(q, spec.N, q * q - 3 * q + 1, dist, h_max)
    return MomentSequence(MomentKind.k2(), q, vals)


def recursive_moments(ctx: FieldCtx, kind: MomentKind, h_max: int,
                      dist: WeightEnumerator | None = None) -> MomentSequence:
    if kind.family is Family.MD:
        return recursive_moments_md(ctx, kind.param, h_max, dist)
    if kind.family is Family.POW:
        return recursive_moments_power(ctx, kind.param, h_max, dist)
    return recursive_moments_k2(ctx, h_max, dist)


def k2_bridge(q: int, square_moments: MomentSequence) -> list[int]:
    """MK_2^h = sum_i C(h,i) (-q)^(h-i) MK^(2i), from K_2 = K^2 - q."""
    if square_moments.kind != MomentKind.pow(2):
        raise ValueError("bridge needs the m = 2 sequence")
    vals = square_moments.values
    return [sum(comb(h, i) * (-q) ** (h - i) * vals[i] for i in range(h + 1))
            for h in range(len(vals))]


def weight_moment_sides(ctx: FieldCtx, kind: MomentKind, h: int) -> tuple[Fraction, Fraction]:
    """sum_a w(a)^h directly and via 2^-h sum_l (-1)^l C(h,l) A^(h-l) MK^l."""
    q = ctx.q
    vals = kvalues(ctx, kind)
    if kind.family is Family.K2:
        shift = q * q - 3 * q + 1
    elif kind.family is Family.MD:
        shift = (q - 1) ** (kind.param - 1)
    else:
        shift = (q - 1) ** kind.param
    direct = sum(Fraction(shift - v, 2) ** h for v in vals)
    moments = [sum(v**l for v in vals) for l in range(h + 1)]
    expanded = Fraction(
        sum((-1) ** l * comb(h, l) * shift ** (h - l) * moments[l] for l in range(h + 1)),
        2**h,
    )
    return direct, expanded


def deligne_ok(ctx: FieldCtx, m: int) -> bool:
    return all(deligne_bound_holds(v, m, ctx.q)
               for _, v in kloosterman_tables(ctx, m)[m].items())
