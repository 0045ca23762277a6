"""Secure coded distributed matrix multiplication over a prime field.

Two confidential matrices are split into blocks, padded with uniformly random
blocks, and encoded as two polynomials whose evaluations form per-worker
shares.  Each worker multiplies its pair of shares; the product of the
original matrices is interpolated from any large-enough subset of worker
results, and no coalition of up to a chosen number of workers learns anything
about the inputs.

Modules:
    field          exact arithmetic in GF(p)
    blocks         block partitioning and the random-padding layouts
    codec          exponent maps, encoding plans, encode/decode, thresholds
    cluster_sim    straggler models and end-to-end simulated runs
    secrecy_audit  exhaustive information-theoretic leakage check
    cli            command-line front end
"""

from .errors import (
    BudgetExceeded,
    ConfigurationError,
    FieldMismatchError,
    NotEnoughResults,
    SgpdError,
    WrongCaseError,
)
from .field import FieldElement, PrimeField, is_prime
from .blocks import (
    AugmentationLayout,
    AugmentedPair,
    BlockMatrix,
    augment,
    augment_tall,
    augment_wide,
    augmentation_layout,
    multiply,
    partition,
    read_matrix,
    write_matrix,
)
from .codec import (
    CodeGeometry,
    CodedShare,
    EncodingPlan,
    ExponentAuditReport,
    ExponentMap,
    LoadReport,
    WorkerResult,
    build_plan,
    closed_form_thresholds,
    code_geometry,
    communication_load,
    decode,
    encode,
    exponent_audit,
    naive_secure_threshold,
    read_share,
    worker_compute,
    write_share,
)
from .cluster_sim import (
    FixedSet,
    LatencyModel,
    LatencySummary,
    RandomSubset,
    RunReport,
    latency_sweep,
    run,
)
from .secrecy_audit import (
    DEFAULT_BUDGET,
    AuditInstance,
    AuditVerdict,
    SubsetVerdict,
    audit,
    audit_all_subsets,
    report_lines,
)

__all__ = [
    "AugmentationLayout",
    "AugmentedPair",
    "AuditInstance",
    "AuditVerdict",
    "BlockMatrix",
    "BudgetExceeded",
    "CodeGeometry",
    "CodedShare",
    "ConfigurationError",
    "DEFAULT_BUDGET",
    "EncodingPlan",
    "ExponentAuditReport",
    "ExponentMap",
    "FieldElement",
    "FieldMismatchError",
    "FixedSet",
    "LatencyModel",
    "LatencySummary",
    "LoadReport",
    "NotEnoughResults",
    "PrimeField",
    "RandomSubset",
    "RunReport",
    "SgpdError",
    "SubsetVerdict",
    "WorkerResult",
    "WrongCaseError",
    "audit",
    "audit_all_subsets",
    "augment",
    "augment_tall",
    "augment_wide",
    "augmentation_layout",
    "build_plan",
    "closed_form_thresholds",
    "code_geometry",
    "communication_load",
    "decode",
    "encode",
    "exponent_audit",
    "is_prime",
    "latency_sweep",
    "multiply",
    "naive_secure_threshold",
    "partition",
    "read_matrix",
    "read_share",
    "report_lines",
    "run",
    "worker_compute",
    "write_matrix",
    "write_share",
]

__version__ = "0.1.0"
