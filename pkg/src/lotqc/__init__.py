"""lotqc: statistical quality control for annotated datasets.

Exact hypergeometric/binomial tail kernels (compiled core with a pure-Python
fallback), conservative interval estimation with minimal-sample-size
planning, single/double/sequential acceptance-sampling plan design and
evaluation, reproducible inspection simulation, and a live sequential
inspection service.
"""

from ._kernels import BACKEND as _KERNEL_BACKEND
from .datasets import DatasetDescriptor, get as get_dataset, registry as dataset_registry
from .design import design_double, design_sequential, design_single
from .dist import cdf, pmf, quantile, sf
from .evaluate import (
    CurvePoint,
    asn,
    asn_double,
    asn_sequential,
    asn_single,
    curve,
    oc,
    oc_double,
    oc_sequential,
    oc_single,
    write_curve_csv,
)
from .intervals import (
    ProportionInterval,
    exact_interval,
    margin_of_error,
    required_sample_size,
)
from .models import (
    ConfigError,
    DefectHypothesis,
    DomainError,
    InfeasiblePlanError,
    PopulationModel,
    PRESETS,
    QualityConfig,
    RELAXED,
    STRICT,
    Sampling,
)
from .plans import (
    DoublePlan,
    SequentialPlan,
    SinglePlan,
    decide,
    dump_plan,
    load_plan,
    plan_from_dict,
)
from .simulate import SimulationReport, simulate

__version__ = "0.1.0"


def kernel_backend() -> str:
    """'native' when the compiled extension is active, else 'pure'."""
    return _KERNEL_BACKEND
