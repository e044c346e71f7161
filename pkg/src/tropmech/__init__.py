"""Exact tropical tools for incentive compatibility of single-agent mechanisms
on finite type spaces."""

from .arrangement import (
    BasicCell,
    BasicCellSet,
    ConvergenceReport,
    REVerdict,
    basic_cells,
    convergence_harness,
    covector,
    enumerate_ic_outcomes,
    generic_perturbation,
    is_generic,
    is_re_type_space,
    iter_ic_outcomes,
)
from .estimators import BasicCells, GenericPerturbation, ICMechanism
from .exceptions import (
    BudgetExceeded,
    CrossCheckError,
    DimensionUnsupported,
    NegativeCycleError,
    NotIC,
    NotRealizable,
    PerturbationFailed,
)
from .mechanism import (
    allocation_matrix,
    eigenvalue,
    eq_distance_boundary_check,
    graph_of_p,
    ic_payments,
    is_ic,
    is_realizable,
    is_revenue_equivalent_mechanism,
    is_weakly_monotone,
    realize,
    sector_membership,
    sector_pair_relation,
    separates,
)
from .polytrope import HausdorffDistance, Polytrope, hausdorff_distance_2d
from .tropical import (
    DiGraph,
    critical_graph,
    find_negative_cycle,
    kleene_star,
    min_cycle_mean,
    min_plus_matmul,
    min_plus_matvec,
    strongly_connected_components,
)
from .validation import TypeSpace

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
