"""Maximal matching maintenance for fully dynamic graphs.

The lookahead-batched :class:`DynamicMatcher` keeps a maximal matching
current across edge insertions and deletions at logarithmic amortized
counted work per update, given buffered (peekable) updates. The
:class:`RecomputeMatcher` baseline and the validity/maximality checkers
provide the differential-testing oracle; :mod:`dynmatch.stream` handles
workload files and seeded generation; :mod:`dynmatch.bench` and the
``dynmatch`` CLI drive and measure runs.
"""

from .core import (
    DenseMateStore,
    Edge,
    LazyMatrixIndicator,
    MateStateError,
    OpCounters,
    OrderedMapMateStore,
    OrderedSetIndicator,
    SelfLoopError,
    edgelist_delete,
    edgelist_insert,
    make_edge,
    make_indicator,
    make_mate_store,
)
from .greedy import greedy
from .matcher import (
    DEFAULT_THRESHOLD,
    DynamicMatcher,
    LookaheadError,
    MatcherState,
    PhasePlan,
    UpdateOp,
    collect_batch_edges,
    erase_local_matching,
    handle_single_update,
    plan_phase,
    split_graph,
)
from .reference import RecomputeMatcher, Violation, check_maximal, check_valid
from .stream import (
    StreamEvent,
    StreamParseError,
    StreamRangeError,
    WorkloadConfig,
    generate,
    max_edges_by_replay,
    parse_stream,
    serialize_stream,
)

__all__ = [
    "DEFAULT_THRESHOLD",
    "DenseMateStore",
    "DynamicMatcher",
    "Edge",
    "LazyMatrixIndicator",
    "LookaheadError",
    "MatcherState",
    "MateStateError",
    "OpCounters",
    "OrderedMapMateStore",
    "OrderedSetIndicator",
    "PhasePlan",
    "RecomputeMatcher",
    "SelfLoopError",
    "StreamEvent",
    "StreamParseError",
    "StreamRangeError",
    "UpdateOp",
    "Violation",
    "WorkloadConfig",
    "check_maximal",
    "check_valid",
    "collect_batch_edges",
    "edgelist_delete",
    "edgelist_insert",
    "erase_local_matching",
    "generate",
    "greedy",
    "handle_single_update",
    "make_edge",
    "make_indicator",
    "make_mate_store",
    "max_edges_by_replay",
    "parse_stream",
    "plan_phase",
    "serialize_stream",
    "split_graph",
]

__version__ = "0.1.0"
