"""Probability kernel backend: compiled extension when built, pure Python otherwise.

Set LOTQC_PURE_PYTHON=1 to force the pure backend (used by the benchmark and
for debugging); lotqc.kernel_backend() reports which one is active.
"""

import os

from . import _pure

if os.environ.get("LOTQC_PURE_PYTHON") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

log_binom = _impl.log_binom
hyper_logpmf = _impl.hyper_logpmf
hyper_pmf = _impl.hyper_pmf
hyper_cdf = _impl.hyper_cdf
hyper_sf = _impl.hyper_sf
binom_logpmf = _impl.binom_logpmf
binom_pmf = _impl.binom_pmf
binom_cdf = _impl.binom_cdf
binom_sf = _impl.binom_sf
double_accept_hyper = _impl.double_accept_hyper
double_accept_binom = _impl.double_accept_binom
hyper_llr_boundaries = _impl.hyper_llr_boundaries
binom_llr_boundaries = _impl.binom_llr_boundaries
sequential_dp_hyper = _impl.sequential_dp_hyper
sequential_dp_binom = _impl.sequential_dp_binom
curtailed_stage2_mean_hyper = _impl.curtailed_stage2_mean_hyper
curtailed_stage2_mean_binom = _impl.curtailed_stage2_mean_binom
