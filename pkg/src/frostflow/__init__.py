"""Exact dyadic flows, Frostman measures and Hausdorff content on [0, 1]."""

from .dyadic import Interval, LowerRealApprox, format_rat, interval_of_word, lower_real_value, parse_rat
from .flows import (
    CapacityTree,
    Found,
    Refuted,
    TreeFlow,
    concentrate_flow,
    max_flow_iterate,
    nonzero_flow_search,
    truncated_max_flow,
)
from .measures import (
    DyadicMeasure,
    MeasureName,
    concentrate,
    concentrated_support,
    flow_to_measure,
    frostman_check,
    measure_from_overt,
    measure_to_flow,
    point_from_measure,
    point_measure,
    support_overt,
)
from .sets import (
    CantorScheme,
    ClosedOvertName,
    ClosedSetName,
    OvertSetName,
    assemble,
    cantor_cells,
    closed_name,
    overt_name,
    rescale,
)
from .perfectcore import perfect_core
from .frostman import FrostmanTask, capacity_tree, frost, strict_frost
from .dimension import (
    CellMeasure,
    DimEstimate,
    cantor_dim_partial,
    dim_interval,
    dyadic_content,
    local_dimension,
    shmerkin_measure,
)

__version__ = "0.1.0"
