"""Power moments of Kloosterman sums over GF(2^r) via binary codes and Pless identities."""

from .char_sums import (
    KsumTable,
    ValueRangeReport,
    artin_schreier_sum,
    kloosterman,
    kloosterman_md_all,
    kloosterman_md_direct,
    value_range,
)
from .fiber_counts import CodeKind, CountTable, delta_direct, delta_formula, sigma_direct, sigma_formula
from .finite_field import (
    FieldCtx,
    additive_character,
    build_field,
    canonical_character,
    fq_inv,
    fq_mul,
    parse_field_spec,
)
from .kloo_codes import (
    CodeSpec,
    DefiningVector,
    WeightEnumerator,
    build_defining_vector,
    dual_codeword,
    dual_weight,
    dual_weight_enumerator,
    injectivity_check,
    macwilliams_transform,
    weight_distribution,
)
from .moment_engine import (
    MomentKind,
    MomentSequence,
    moment_oracle,
    pless_check,
    recursive_moments_k2,
    recursive_moments_md,
    recursive_moments_power,
    stirling2,
)

__version__ = "0.1.0"
