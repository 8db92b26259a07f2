"""Invariant pseudometrics, contraction certificates, and holomorphic
fixed-point iteration on bounded domains of C^n."""

from .domains import (
    Disk,
    Domain,
    Point,
    Polydisc,
    SemiAnalytic,
    TangentVector,
    boundary_distance,
    contains,
    diameter_bound,
    domain_from_json,
    inner_gap,
    sample,
    unit_disk,
)
from .holomap import HoloMap, RangeEvidence, compose, parse, range_check
from .metrics import (
    Bound,
    Polyline,
    caratheodory_distance,
    caratheodory_metric,
    integrated_distance,
    kobayashi_metric,
    metric_field,
    path_length,
    poincare_distance,
    poincare_metric,
)
from .contraction import (
    ContractionCertificate,
    caratheodory_diameter,
    certificate_for,
    dilate_disk,
    dilation_constant,
    tanh_diameter_constant,
    verify_metric_contraction,
)
from .fixedpoint import (
    FixedPointResult,
    IterationTrace,
    certify_tail,
    picard_solve,
    trace_to_csv,
    verify_decay,
)
from .kernels import COMPILED as KERNELS_COMPILED

__version__ = "0.1.0"

__all__ = [
    "Point",
    "TangentVector",
    "Domain",
    "Disk",
    "Polydisc",
    "SemiAnalytic",
    "unit_disk",
    "contains",
    "boundary_distance",
    "diameter_bound",
    "inner_gap",
    "sample",
    "domain_from_json",
    "HoloMap",
    "RangeEvidence",
    "parse",
    "compose",
    "range_check",
    "Bound",
    "Polyline",
    "poincare_distance",
    "poincare_metric",
    "caratheodory_metric",
    "kobayashi_metric",
    "caratheodory_distance",
    "path_length",
    "integrated_distance",
    "metric_field",
    "ContractionCertificate",
    "caratheodory_diameter",
    "tanh_diameter_constant",
    "dilation_constant",
    "certificate_for",
    "dilate_disk",
    "verify_metric_contraction",
    "IterationTrace",
    "FixedPointResult",
    "picard_solve",
    "certify_tail",
    "verify_decay",
    "trace_to_csv",
    "KERNELS_COMPILED",
    "__version__",
]
