"""reglab: a Monte-Carlo laboratory for epsilon-regularized stochastic
integrals, covariations, and the identities and counterexamples they obey."""

__version__ = "0.1.0"

from .paths import (  # noqa: F401
    Ensemble,
    Grid,
    SamplePath,
    cantor_function,
    cantor_support_indicator,
    eval_extended,
    make_ensemble,
    make_grid,
    sample_bm,
    sample_fbm,
    sample_sde_euler,
    sample_volterra,
    time_change,
)
from .regularize import (  # noqa: F401
    ConvergenceReport,
    EpsFamily,
    backward_eps,
    cov_eps,
    eps_ladder,
    forward_eps,
    functional_family,
    levy_area_eps,
    symmetric_eps,
    ucp_limit,
    vector_forward_eps,
)
from .young import holder_norm, smooth_eps, young_bound_report, young_integral  # noqa: F401
from .oracles import (  # noqa: F401
    Partition,
    cantor_measure_curve,
    ito_sum,
    qv_partition,
    stieltjes_sum,
    stratonovich_sum,
)
