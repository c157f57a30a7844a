"""Optimal line fitting in the plane.

Fits lines to weighted planar point sets under the L1, L2, Linf or general
Lp (p > 1) aggregation of vertical or orthogonal point-line distances, and
describes the complete set of minimisers with certificates.  Brute-force
oracles are included for independent verification.
"""

from .errors import (
    EmptyInput,
    EmptySet,
    InsufficientPoints,
    LineFitError,
    NoConvergence,
    ParseError,
    TooLarge,
    VerticalLineForAlgebraic,
)
from .geometry import (
    IndexDecomposition,
    Line,
    LineHesse,
    LineSI,
    Point,
    PointSet,
    ScatterStats,
    decompose,
    default_tol,
    hesse_to_si,
    objective,
    orthogonal_residual,
    scatter,
    si_to_hesse,
    vertical_residual,
)
from .hull import HullPolytope, build_hull
from .io import parse_points, report_from_dict, report_to_dict
from .l1 import fit_algebraic_l1, fit_geometric_l1, l1_certificate
from .l2 import (
    CoincidenceResult,
    EigenInfo,
    L2Report,
    fit_algebraic_l2,
    fit_geometric_l2,
    l2_coincidence,
)
from .linf import MidrangeResult, fit_algebraic_linf, fit_geometric_linf, midrange_offset
from .lp import LpSolverConfig, fit_algebraic_lp, fit_geometric_lp, golden_section, lp_gradient
from .oracle import (
    ExhaustiveResult,
    GridSpec,
    OracleResult,
    ProbeResult,
    convexity_probe,
    default_grid_box,
    exhaustive_pairs_oracle,
    grid_oracle,
)
from .report import (
    AllLinesThroughPoint,
    CandidateLine,
    FitReport,
    LineFamilies,
    LineFamily,
    LinfCertificate,
    ParameterPolytope,
    UniqueLine,
    VerticalDegenerate,
    line_count,
    representatives,
)

__version__ = "0.1.0"
