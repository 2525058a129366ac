"""Proper metric and ultrametric extensions on countable discrete spaces."""
from .combinator import (
    check_isosceles, discrete_metric, join, ms_ball_structure, ms_distance, proper_metric,
    proper_ultrametric, properize, properize_ult, pullback_abs, pullback_ms, quantize_metric,
    truncate, zero_table,
)
from .errors import (
    AxiomError, EmptySubset, FiniteSubset, MembershipError, MetricExtError, MissingWitness,
    NoProperTarget, NotCharacteristic, NotUnbounded, RosterMismatch, ScanLimitError, SchemaError,
)
from .extension import (
    ExtensionResult, base_extend_metric, base_extend_ultrametric, check_extension,
    extend_function_proper, extend_metric_proper, extend_metric_proper_dense,
    extend_ultrametric_proper, extend_ultrametric_proper_dense, reference_metric,
)
from .metric import (
    Flag, MetricTable, ProperWitness, RealFunction, Report, ball, certify_function,
    certify_proper, dist_to_set, nearest, prefix_ball, preimage, proper_function_into,
    verify_axioms,
)
from .retraction import (
    BandedOrder, Retraction, bdhm_retract, extend_proper_map, lipschitz_ratio, proper_retract,
)
from .space import Space, Subset
from .valueset import (
    ExplicitList, Geometric, HalfLine, SporadicSet, ValueSet, contains, psi_floor,
    sporadic_subset,
)

__all__ = [
    "AxiomError",
    "BandedOrder",
    "EmptySubset",
    "ExplicitList",
    "ExtensionResult",
    "FiniteSubset",
    "Flag",
    "Geometric",
    "HalfLine",
    "MembershipError",
    "MetricExtError",
    "MetricTable",
    "MissingWitness",
    "NoProperTarget",
    "NotCharacteristic",
    "NotUnbounded",
    "ProperWitness",
    "RealFunction",
    "Report",
    "Retraction",
    "RosterMismatch",
    "ScanLimitError",
    "SchemaError",
    "Space",
    "SporadicSet",
    "Subset",
    "ValueSet",
    "ball",
    "base_extend_metric",
    "base_extend_ultrametric",
    "bdhm_retract",
    "certify_function",
    "certify_proper",
    "check_extension",
    "check_isosceles",
    "contains",
    "discrete_metric",
    "dist_to_set",
    "extend_function_proper",
    "extend_metric_proper",
    "extend_metric_proper_dense",
    "extend_proper_map",
    "extend_ultrametric_proper",
    "extend_ultrametric_proper_dense",
    "join",
    "lipschitz_ratio",
    "ms_ball_structure",
    "ms_distance",
    "nearest",
    "prefix_ball",
    "preimage",
    "proper_function_into",
    "proper_metric",
    "proper_retract",
    "proper_ultrametric",
    "properize",
    "properize_ult",
    "psi_floor",
    "pullback_abs",
    "pullback_ms",
    "quantize_metric",
    "reference_metric",
    "sporadic_subset",
    "truncate",
    "verify_axioms",
    "zero_table",
]

__version__ = "0.1.0"
