"""Uniform-label measurement model with Monte Carlo and quadrature verification.

Final measurement labels (x, y, n) are drawn uniformly over outcome-indexed
disks whose radii scale with the outcome amplitude's modulus; the package
checks, empirically and by direct area integration, that the induced outcome
distribution is the squared modulus of the amplitude.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateOutcomeError,
    InvalidAmplitudeError,
    RangeError,
    ReportIOError,
    SamplerStallError,
    ZeroStateError,
)
from .hilbert import (
    StateVector,
    amplitude,
    born_probabilities,
    born_probability,
    normalize,
    tensor,
)
from .model import (
    FinalLabel,
    InitialLabel,
    ModelConfig,
    closed_form_P,
    disk_area,
    final_from_initial,
    initial_from_final,
    jacobian,
    normalization_K,
    region_contains,
)
from .runner import RunReport, emit_report, run_scenario
from .sampler import (
    InitialBatch,
    SampleBatch,
    SamplerConfig,
    lane_generator,
    recover_initials,
    sample_batch,
    sample_final,
)
from .scenario import Scenario, load_scenario, parse_scenario
from .stats import (
    EmpiricalDistribution,
    TestReport,
    chi_square_gof,
    chi_square_homogeneity,
    ks_uniformity,
    marginalize,
    quadrature_P,
    quadrature_probabilities,
)

__all__ = [
    "__version__",
    "ConfigError",
    "DegenerateOutcomeError",
    "InvalidAmplitudeError",
    "RangeError",
    "ReportIOError",
    "SamplerStallError",
    "ZeroStateError",
    "StateVector",
    "amplitude",
    "born_probabilities",
    "born_probability",
    "normalize",
    "tensor",
    "FinalLabel",
    "InitialLabel",
    "ModelConfig",
    "closed_form_P",
    "disk_area",
    "final_from_initial",
    "initial_from_final",
    "jacobian",
    "normalization_K",
    "region_contains",
    "RunReport",
    "emit_report",
    "run_scenario",
    "InitialBatch",
    "SampleBatch",
    "SamplerConfig",
    "lane_generator",
    "recover_initials",
    "sample_batch",
    "sample_final",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "EmpiricalDistribution",
    "TestReport",
    "chi_square_gof",
    "chi_square_homogeneity",
    "ks_uniformity",
    "marginalize",
    "quadrature_P",
    "quadrature_probabilities",
]
