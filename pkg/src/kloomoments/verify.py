"""Named invariant checks behind the ``verify`` command.

Each check returns ``None`` on success or a counterexample dict (inputs plus
both computed sides), and raises :class:`Skip` when it does not apply.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .char_sums import (
    artin_schreier_sum,
    deligne_bound_holds,
    kloosterman_tables,
    value_range,
)
from .errors import BudgetExceeded, IdentityViolation, KloosError
from .fiber_counts import delta_direct, delta_formula, sigma_direct, sigma_formula
from .finite_field import FieldCtx, poly_mulmod
from .kloo_codes import (
    DP_BUDGET,
    CodeSpec,
    build_defining_vector,
    dual_codeword,
    dual_weight,
    dual_weight_enumerator,
    injectivity_check,
    macwilliams_transform,
    weight_distribution,
)
from .moment_engine import MomentKind, oracle_sequence, pless_check, recursive_moments
from .tuples import DEFAULT_BUDGET

LEVELS = ("fast", "full")


class Skip(Exception):
    pass


@dataclass
class CheckResult:
    name: str
    status: str
    elapsed: float = 0.0
    counterexample: dict | None = None
    note: str = ""

    def as_dict(self, timing: bool = True) -> dict:
        out = {"name": self.name, "status": self.status}
        if timing:
            out["elapsed"] = round(self.elapsed, 4)
        out["counterexample"] = self.counterexample
        out["note"] = self.note
        return out


@dataclass
class VerifyReport:
    field: dict
    level: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def code_specs(ctx: FieldCtx, level: str) -> list[CodeSpec]:
    if level == "fast":
        specs = [CodeSpec.md(ctx, 2), CodeSpec.pow(ctx, 1), CodeSpec.pow(ctx, 2)]
    else:
        specs = [CodeSpec.md(ctx, 2), CodeSpec.md(ctx, 4),
                 CodeSpec.pow(ctx, 1), CodeSpec.pow(ctx, 2), CodeSpec.pow(ctx, 3)]
    return specs


def _dp_limit(level: str) -> int:
    return 500 if level == "fast" else DP_BUDGET


def _require_codes(ctx: FieldCtx):
    if ctx.r < 3:
        raise Skip("code-based checks need r >= 3")


# -- individual checks ------------------------------------------------------

def check_field_axioms(ctx: FieldCtx, level: str):
    q = ctx.q
    rng = np.random.default_rng(0)
    elems = np.arange(q) if q <= 64 else rng.integers(0, q, size=64)
    x, y = np.meshgrid(elems, elems, indexing="ij")
    x, y = x.ravel(), y.ravel()
    prod = ctx.mul_arr(x, y)
    for a, b, p in zip(x[:4096], y[:4096], prod[:4096]):
        if int(p) != poly_mulmod(int(a), int(b), ctx.modulus):
            return {"x": int(a), "y": int(b), "table": int(p)}
    if not np.array_equal(prod, ctx.mul_arr(y, x)):
        return {"property": "commutativity"}
    for z in elems:
        lhs = ctx.mul_arr(prod, z)
        rhs = ctx.mul_arr(x, ctx.mul_arr(y, z))
        if not np.array_equal(lhs, rhs):
            return {"property": "associativity", "z": int(z)}
        if not np.array_equal(ctx.mul_arr(x, y ^ z), prod ^ ctx.mul_arr(x, z)):
            return {"property": "distributivity", "z": int(z)}
    nz = np.arange(1, q)
    if not np.all(ctx.mul_arr(nz, ctx.inverse_table[nz]) == 1):
        return {"property": "inverse"}
    tr = ctx.trace_table
    if not np.array_equal(tr[x ^ y], tr[x] ^ tr[y]):
        return {"property": "trace linearity"}
    all_x = np.arange(q)
    if not np.array_equal(tr[ctx.mul_arr(all_x, all_x)], tr):
        return {"property": "trace Frobenius invariance"}
    if int(np.count_nonzero(tr == 0)) != q // 2:
        return {"property": "trace kernel size", "lhs": int(np.count_nonzero(tr == 0)), "rhs": q // 2}
    return None


def check_k2_identity(ctx: FieldCtx, level: str):
    tabs = kloosterman_tables(ctx, 2)
    for a in ctx.nonzero:
        lhs, rhs = tabs[2][a], tabs[1][a] ** 2 - ctx.q
        if lhs != rhs:
            return {"a": a, "lhs": lhs, "rhs": rhs}
    return None


def check_artin_schreier(ctx: FieldCtx, level: str):
    k1 = kloosterman_tables(ctx, 1)[1]
    for beta in ctx.nonzero:
        lhs, rhs = artin_schreier_sum(ctx, beta), k1[beta] - 1
        if lhs != rhs:
            return {"beta": beta, "lhs": lhs, "rhs": rhs}
    return None


def check_deligne_and_parity(ctx: FieldCtx, level: str):
    m_max = 3 if level == "fast" else 5
    for m, tab in enumerate(kloosterman_tables(ctx, m_max)):
        if m == 0:
            continue
        for a, v in tab.items():
            if not deligne_bound_holds(v, m, ctx.q):
                return {"m": m, "a": a, "value": v, "property": "Deligne bound"}
            if ((ctx.q - 1) ** m - v) % 2:
                return {"m": m, "a": a, "value": v, "property": "parity"}
    return None


def check_counts(ctx: FieldCtx, level: str):
    params = (1, 2) if level == "fast" else (1, 2, 3)
    ran = 0
    for k in params:
        for name, direct, formula in (("delta", delta_direct, delta_formula),
                                      ("sigma", sigma_direct, sigma_formula)):
            try:
                d = direct(ctx, k, budget=DEFAULT_BUDGET if level == "full" else 10**6)
            except BudgetExceeded:
                continue
            f = formula(ctx, k)
            ran += 1
            for beta in range(ctx.q):
                if d[beta] != f[beta]:
                    return {"table": name, "param": k, "beta": beta,
                            "direct": d[beta], "formula": f[beta]}
    if not ran:
        raise Skip("enumeration budget too small for this field")
    return None


def _affordable(specs: list[CodeSpec], limit: int) -> list[CodeSpec]:
    return [s for s in specs if s.N <= limit]


def check_dual_weights(ctx: FieldCtx, level: str):
    _require_codes(ctx)
    specs = _affordable(code_specs(ctx, level), 400 if level == "fast" else 20000)
    if not specs:
        raise Skip("no affordable code")
    for spec in specs:
        vec = build_defining_vector(spec)
        for a in range(ctx.q):
            bits = int(dual_codeword(vec, a).sum())
            closed = dual_weight(spec, a)
            if bits != closed:
                return {"code": spec.label, "a": a, "bit_count": bits, "closed_form": closed}
    return None


def check_value_range(ctx: FieldCtx, level: str):
    report = value_range(ctx)
    if not report.ok:
        return {"missing": report.missing, "unexpected": report.unexpected}
    return None


def check_injectivity(ctx: FieldCtx, level: str):
    _require_codes(ctx)
    specs = _affordable(code_specs(ctx, level), 10**6)
    for spec in specs:
        rep = injectivity_check(spec)
        if not rep.injective or not rep.consistent:
            return {"code": spec.label, "inequality_holds": rep.inequality_holds,
                    "zero_words": rep.zero_words}
    return None


def check_macwilliams(ctx: FieldCtx, level: str):
    _require_codes(ctx)
    specs = _affordable(code_specs(ctx, level), _dp_limit(level))
    if not specs:
        raise Skip("no code within the DP budget")
    for spec in specs:
        dp = weight_distribution(spec.counts())
        mw = macwilliams_transform(dual_weight_enumerator(spec), spec.N)
        if dp.freq != mw.freq:
            j = next(i for i, (a, b) in enumerate(zip(dp.freq, mw.freq)) if a != b)
            return {"code": spec.label, "weight": j, "dp": str(dp.freq[j]), "macwilliams": str(mw.freq[j])}
        if dp.size != 2 ** (spec.N - ctx.r):
            return {"code": spec.label, "property": "code size", "lhs": str(dp.size)}
    return None


def make_check_pless(tamper_weight: int | None = None) -> Callable:
    def check_pless(ctx: FieldCtx, level: str):
        _require_codes(ctx)
        h_max = 8
        for spec in code_specs(ctx, level):
            dual = dual_weight_enumerator(spec)
            code = weight_distribution(spec.counts(), max_weight=h_max)
            if tamper_weight is not None and tamper_weight <= h_max:
                code.freq[tamper_weight] += 1
            try:
                pless_check(dual, code, spec.N, ctx.r, h_max)
            except IdentityViolation as err:
                return {"code": spec.label, "h": err.h, "lhs": str(err.lhs), "rhs": str(err.rhs)}
        return None
    return check_pless


def check_recursion(ctx: FieldCtx, level: str):
    _require_codes(ctx)
    kinds = [(MomentKind.md(2), 6), (MomentKind.pow(1), 5), (MomentKind.pow(2), 5), (MomentKind.k2(), 5)]
    if level == "full":
        kinds += [(MomentKind.md(4), 6), (MomentKind.pow(3), 5)]
    for kind, h_max in kinds:
        rec = recursive_moments(ctx, kind, h_max)
        orc = oracle_sequence(ctx, kind, h_max)
        for h in range(h_max + 1):
            if rec[h] != orc[h]:
                return {"kind": str(kind), "h": h, "recursive": str(rec[h]), "oracle": str(orc[h])}
    return None


def checks_for(tamper_weight: int | None = None) -> list[tuple[str, Callable]]:
    return [
        ("field_axioms", check_field_axioms),
        ("k2_identity", check_k2_identity),
        ("artin_schreier", check_artin_schreier),
        ("deligne_and_parity", check_deligne_and_parity),
        ("fiber_counts", check_counts),
        ("dual_weights", check_dual_weights),
        ("value_range", check_value_range),
        ("injectivity", check_injectivity),
        ("pless_identity", make_check_pless(tamper_weight)),
        ("recursion_vs_oracle", check_recursion),
        ("macwilliams", check_macwilliams),
    ]


def run_verify(ctx: FieldCtx, level: str = "fast", tamper_weight: int | None = None) -> VerifyReport:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    report = VerifyReport(ctx.describe(), level)
    for name, fn in checks_for(tamper_weight):
        start = time.perf_counter()
        try:
            cex = fn(ctx, level)
            result = CheckResult(name, "pass" if cex is None else "fail", counterexample=cex)
        except Skip as why:
            result = CheckResult(name, "skipped", note=str(why))
        except KloosError as err:
            result = CheckResult(name, "fail", counterexample={"error": type(err).__name__, "message": str(err)})
        result.elapsed = time.perf_counter() - start
        report.checks.append(result)
    return report
