"""Randomized block gossip algorithms for average consensus.

Node values are driven to their global mean by repeatedly averaging over the
connected components of randomly selected edge subsets; the same dynamics is
available in dual form as edge-weight ascent. Exact spectral analysis of the
per-step contraction factor and an experiment CLI round out the package.
"""
from .analysis import (
    AveragingTimeBound,
    CappedRunError,
    ExpectedProjection,
    RateReport,
    SpeedupRow,
    averaging_time_bound,
    convergence_rate,
    empirical_averaging_time,
    exact_rate,
    expected_projection,
    speedup_curve,
)
from .engine import (
    DEFAULT_MAX_ITERS,
    DualState,
    PrimalState,
    RunTrace,
    StepRecord,
    advice,
    dual_objective,
    initial_dual,
    initial_primal,
    primal_from_dual,
    rbk_step,
    rbk_step_projection,
    rnm_step,
    run,
)
from .graphs import (
    Component,
    DisconnectedGraphError,
    EdgeListParseError,
    Graph,
    IncidenceSystem,
    build_graph,
    complete,
    components,
    from_edge_list,
    girth,
    grid,
    incidence,
    path,
    ring,
)
from .linalg import EigenDecomposition, lambda_min_plus, pinv_psd, sym_eigen
from .sampling import (
    ENUMERATION_CAP,
    SamplerSpec,
    SketchSample,
    draw,
    enumerate_subsets,
    make_rng,
)

__version__ = "0.1.0"
