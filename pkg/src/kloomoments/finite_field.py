"""Table-driven arithmetic in GF(2^r).

Elements are integers in ``[0, q)`` read as bitmasks of polynomial-basis
coordinates (bit i is the coefficient of x^i), so field addition is XOR.
Multiplication, inversion, trace and the canonical additive character
are table lookups over tables materialized once by :func:`build_field`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeMismatch, ReducibleModulus, UnsupportedDegree, ZeroInverse

MIN_DEGREE = 2
MAX_DEGREE = 20


# -- GF(2)[x] helpers -------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] bitmasks."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(poly, d) == 0:
            return False
    return True


def smallest_irreducible(r: int) -> int:
    for poly in range(1 << r, 1 << (r + 1)):
        if is_irreducible(poly):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _poly_powmod(a: int, e: int, m: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = poly_mulmod(result, a, m)
        a = poly_mulmod(a, a, m)
        e >>= 1
    return result


def _primitive_element(modulus: int, q: int) -> int:
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if all(_poly_powmod(g, (q - 1) // p, modulus) != 1 for p in factors):
            return g
    return 1  # q == 2 only; never reached for r >= 2


# -- field context ----------------------------------------------------------

def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """A fully materialized GF(2^r).

    ``exp`` has length ``2*(q-1)`` so that ``exp[log[x] + log[y]]`` needs no
    reduction.  ``log[0]`` is a sentinel and must not be used.
    """

    r: int
    modulus: int
    q: int
    generator: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    inverse_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)
    char_table: np.ndarray = field(repr=False)

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[self.log[x] + self.log[y]])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return int(self.inverse_table[x])

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])

    def trace(self, x: int) -> int:
        return int(self.trace_table[x])

    def char(self, x: int) -> int:
        return int(self.char_table[x])

    def mul_arr(self, x: np.ndarray, y) -> np.ndarray:
        """Vectorized product; ``y`` may be a scalar or an array."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        prod = self.exp[self.log[x] + self.log[y]]
        return np.where((x == 0) | (y == 0), 0, prod)

    def describe(self) -> dict:
        return {
            "r": self.r,
            "q": self.q,
            "modulus": format(self.modulus, "x"),
            "generator": self.generator,
            "trace_zero_count": int(np.count_nonzero(self.trace_table == 0)),
        }


def build_field(r: int, modulus: int | None = None) -> FieldCtx:
    """Construct GF(2^r) from ``modulus`` or the smallest irreducible of degree r."""
    if not MIN_DEGREE <= r <= MAX_DEGREE:
        raise UnsupportedDegree(f"r={r} outside [{MIN_DEGREE}, {MAX_DEGREE}]")
    if modulus is None:
        modulus = smallest_irreducible(r)
    else:
        if modulus.bit_length() - 1 != r:
            raise DegreeMismatch(f"modulus {modulus:#x} does not have degree {r}")
        if not is_irreducible(modulus):
            raise ReducibleModulus(f"modulus {modulus:#x} is reducible over GF(2)")
    q = 1 << r
    g = _primitive_element(modulus, q)

    exp = np.zeros(2 * (q - 1), dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    x = 1
    for i in range(q - 1):
        exp[i] = x
        log[x] = i
        x = poly_mulmod(x, g, modulus)
    exp[q - 1:] = exp[: q - 1]

    inverse = np.zeros(q, dtype=np.int64)
    inverse[1:] = exp[(q - 1 - log[1:]) % (q - 1)]

    # tr is GF(2)-linear: tabulate it on the basis x^k, then extend by parity.
    basis_trace = 0
    for k in range(r):
        y = acc = 1 << k
        for _ in range(r - 1):
            y = poly_mulmod(y, y, modulus)
            acc ^= y
        assert acc in (0, 1), "trace must land in GF(2)"
        basis_trace |= acc << k
    codes = np.arange(q, dtype=np.int64) & basis_trace
    trace = np.zeros(q, dtype=np.int64)
    for k in range(r):
        trace ^= (codes >> k) & 1
    char = 1 - 2 * trace

    return FieldCtx(
        r=r,
        modulus=modulus,
        q=q,
        generator=g,
        exp=_frozen(exp),
        log=_frozen(log),
        inverse_table=_frozen(inverse),
        trace_table=_frozen(trace),
        char_table=_frozen(char),
    )


def parse_field_spec(spec: str) -> FieldCtx:
    """Parse ``"r"`` or ``"r:modulus_hex"`` (e.g. ``"3:b"``) into a field."""
    head, _, tail = spec.partition(":")
    r = int(head)
    modulus = int(tail, 16) if tail else None
    return build_field(r, modulus)


def default_modulus_table(max_r: int = MAX_DEGREE) -> dict[int, int]:
    """The default modulus chosen for each supported degree."""
    return {r: smallest_irreducible(r) for r in range(MIN_DEGREE, max_r + 1)}


# -- spec-level operations --------------------------------------------------

def fq_mul(ctx: FieldCtx, x: int, y: int) -> int:
    return ctx.mul(x, y)


def fq_inv(ctx: FieldCtx, x: int) -> int:
    return ctx.inv(x)


def canonical_character(ctx: FieldCtx, x: int) -> int:
    """lambda(x) = (-1)^tr(x)."""
    return ctx.char(x)


def additive_character(ctx: FieldCtx, c: int, x: int) -> int:
    """psi_c(x) = lambda(c*x); ``c == 0`` gives the trivial character."""
    return ctx.char(ctx.mul(c, x))
