"""Numerics for lambda-analytic function theory on the unit disk.

The deformation parameter lam >= 0 enters through the Dunkl operators
D_z, D_zbar; lam = 0 is the classical holomorphic theory.
"""
from ._core import BACKEND
from .analysis import (
    BoundReport,
    HardyNorm,
    MeanProfile,
    bergman_norm,
    boundary_norm,
    growth_exponent_check,
    hardy_norm,
    mean_profile,
    norm_equivalence_ratio,
    p_mean,
    point_bound_check,
)
from .basis import (
    CoeffSeries,
    DomainError,
    LambdaMismatch,
    LambdaZeroUnsupported,
    dunkl_dz,
    dunkl_dzbar,
    dz_series,
    phi,
    phi_table,
)
from .harness import CheckReport, SweepConfig, emit_report, run_sweep
from .kernels import (
    Adaptive,
    KernelEval,
    KernelKind,
    Strategy,
    bergman_kernel,
    cauchy_kernel,
    evaluate,
    poisson_kernel,
)
from .operators import (
    bergman_project,
    poisson_integral,
    szego_transform,
    weighted_project,
)
from .quadrature import LambdaParam, build_circle_rule, build_disk_rule

__version__ = "0.1.0"
