"""Scaled attachment random recursive trees: depth, height and minimum-depth
constants, exact simulation, and random k-DAG greedy distances."""

from .constants import (
    DepthConstants,
    depth_coefficients,
    solve_alpha_max,
    solve_alpha_min,
    solve_constants,
    table1,
)
from .dag_sim import KDag, build_kdag, greedy_distance, greedy_distances, reduction_check
from .distributions import (
    LAW_GRAMMAR,
    AtomMixture,
    AttachmentLaw,
    Constant,
    MaxOrder,
    MinOrder,
    MomentSummary,
    Power,
    Tabulated,
    Uniform,
    cumulant,
    neg_log_moments,
    parse_law,
    sample,
    truncate_bounded,
)
from .montecarlo import ConvergenceRow, ExperimentPlan, clt_diagnostics, run_plan
from .rate_function import RateEvaluator, legendre_dual, psi
from .report import RenderSpec, render_svg, write_csv, write_json
from .streams import RandomStream, derive_key
from .tree_sim import (
    PathTrace,
    SimOutcome,
    TreeDepths,
    build_depths,
    path_event_probability,
    renewal_bounds,
    rotation_inequality_check,
    summarize,
    trace_path,
)

__version__ = "0.1.0"
