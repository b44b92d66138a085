"""Frame bounds, Carleson partitions, and positive-operator kernel
Grammians on the unit disk."""

from .errors import (
    ConfigInvalidError,
    DegenerateKernelError,
    DimensionMismatchError,
    DuplicatePointError,
    EmptySubsetError,
    HardyFramesError,
    IllConditionedGramError,
    IndexOutOfRangeError,
    NegativeWeightError,
    NonHermitianError,
    NotAPartitionError,
    NotPSDError,
    SingletonSequenceError,
    SingularDiagonalError,
    TargetTooHighError,
    TruncationTooCoarseError,
    UnknownLabelError,
    WeightOutOfRangeError,
)
from .geometry import (
    CarlesonReport,
    DiskPoint,
    PointSequence,
    blaschke_condition_sum,
    carleson_constants,
    mobius,
    pseudo_hyperbolic,
    separation_constant,
)
from .hermitian import (
    EigenExtremes,
    HermitianMatrix,
    eig_extremes,
    loewner_defect,
    loewner_leq,
    psd_sqrt,
)
from .kernels import (
    Grammian,
    KernelVector,
    Provenance,
    TruncationContext,
    image_gram,
    kernel_matrix,
    kernel_vector,
    normalized_gram,
    range_space_gram,
    szego_gram,
    weighted_hardy_kernel,
)
from .operators import (
    InnerFunction,
    PositiveOperator,
    diagonal_operator,
    evaluate_inner,
    identity,
    projection_c_plus_phi,
    projection_model_space,
    projection_monomial_span,
    projection_phi_H2,
    range_contains_phi,
    st_construct,
    st_roundtrip_defect,
    taylor_coefficients,
    toeplitz_matrix,
)
from .frames import BoundsReport, analyze, compress, congruence_diag
from .partition import (
    Partition,
    PartitionCheck,
    minimal_carleson_classes,
    minimal_spectral_classes,
    partition_carleson,
    partition_spectral,
    verify_partition,
)
from .verify import CheckResult, SuiteConfig, run_suite, suite_passed

__version__ = "0.1.0"
