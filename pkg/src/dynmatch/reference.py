"""Recompute-from-scratch baseline and matching validity checkers.

The baseline applies each update to its edge list and rebuilds the whole
matching greedily, paying linear work per update. It is correct almost by
inspection, which makes it the differential-testing yardstick for the
lookahead matcher and the slow side of the scaling comparison.

The checkers validate a (graph, mate store) pair from first principles and
read the store without touching the counters, so verification never skews
measured work.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass

from .core import (
    DenseMateStore,
    Edge,
    OpCounters,
    edgelist_delete,
    edgelist_insert,
    make_edge,
    make_mate_store,
)
from .greedy import greedy
from .matcher import INSERT, UpdateOp


@dataclass
class Violation:
    """First failed check, with its witness."""

    kind: str  # "symmetry" | "pair-not-edge" | "expandable-edge"
    vertex: int | None = None
    edge: Edge | None = None

    def __str__(self) -> str:
        if self.kind == "symmetry":
            return f"mate symmetry broken at vertex {self.vertex}"
        if self.kind == "pair-not-edge":
            return f"mated pair {self.edge} is not an edge of the graph"
        return f"edge {self.edge} could extend the matching"


def _mate_reader(store):
    """Uncounted mate reads for verification."""
    if isinstance(store, DenseMateStore):
        slots = store.slots
        n = store.n
        return lambda u: slots[u] if 0 <= u < n else None
    keys = store._keys
    vals = store._vals

    def read(u):
        i = bisect_left(keys, u)
        return vals[i] if i < len(keys) and keys[i] == u else None

    return read


def check_valid(graph_edges, store) -> Violation | None:
    """Pass iff the store is symmetric and every mated pair is a graph edge.

    ``graph_edges`` must support membership tests; pass a set for O(1)
    lookups. Returns the first violation found, None on pass.
    """
    read = _mate_reader(store)
    for u, v in store.mated_items():
        if u == v or read(v) != u:
            return Violation("symmetry", vertex=u)
        if u < v and (u, v) not in graph_edges:
            return Violation("pair-not-edge", edge=(u, v))
    return None


def check_maximal(graph_edges, store) -> Violation | None:
    """Pass iff no graph edge has both endpoints unmated.

    For a store that already passes :func:`check_valid` this single scan
    is equivalent to non-expandability of the matching. Returns the first
    expandable edge found, None on pass.
    """
    if isinstance(store, DenseMateStore):
        slots = store.slots
        for e in graph_edges:
            if slots[e[0]] is None and slots[e[1]] is None:
                return Violation("expandable-edge", edge=e)
        return None
    read = _mate_reader(store)
    for e in graph_edges:
        if read(e[0]) is None and read(e[1]) is None:
            return Violation("expandable-edge", edge=e)
    return None


class RecomputeMatcher:
    """Baseline maintainer: apply the update, then re-match from scratch.

    Exposes the same driving surface as :class:`~dynmatch.matcher.DynamicMatcher`
    (push_update / run_until_buffer_consumed / mate_query / snapshots /
    counters) so benchmarks and differential tests can swap the two. Keeps
    its own store and counters; never aliases matcher state.
    """

    def __init__(
        self,
        n: int | None = None,
        *,
        mate_strategy: str = "dense",
        initial_edges=(),
        on_update=None,
    ):
        self.n = n
        self.counters = OpCounters()
        self.store = make_mate_store(mate_strategy, n, self.counters)
        self.on_update = on_update
        self.graph: list[Edge] = []
        for u, v in initial_edges:
            e = make_edge(u, v)
            self._check_range(e)
            if e not in self.graph:
                self.graph.append(e)
        self.matching: list[Edge] = []
        self._buffer: deque[UpdateOp] = deque()
        self.edge_count = len(self.graph)
        self.max_edges = len(self.graph)

    def _check_range(self, e: Edge) -> None:
        if self.n is not None and e[1] >= self.n:
            raise IndexError(f"edge {e} outside dense universe of size {self.n}")

    def push_update(self, op: UpdateOp) -> None:
        self._check_range(op.edge)
        self._buffer.append(op)

    def push(self, kind: str, u: int, v: int) -> None:
        self.push_update(UpdateOp(kind, make_edge(u, v)))

    def pending(self) -> int:
        return len(self._buffer)

    def run_until_buffer_consumed(self) -> None:
        while self._buffer:
            self.apply(self._buffer.popleft())

    def apply(self, op: UpdateOp) -> None:
        """One baseline step: edit the edge list, drop the old matching,
        rebuild greedily. O(current size) work."""
        counters = self.counters
        if op.kind == INSERT:
            if edgelist_insert(self.graph, op.edge, counters):
                self.edge_count += 1
                if self.edge_count > self.max_edges:
                    self.max_edges = self.edge_count
        else:
            if edgelist_delete(self.graph, op.edge, counters):
                self.edge_count -= 1
        counters.list_writes += len(self.matching)
        clear = self.store.clear_pair
        for e in self.matching:
            clear(e)
        self.matching = greedy(self.graph, self.store)
        counters.updates_processed += 1
        if self.on_update is not None:
            self.on_update(self)

    def mate_query(self, u: int) -> int | None:
        return self.store.get(u)

    def snapshot_graph(self) -> list[Edge]:
        return list(self.graph)

    def snapshot_matching(self) -> list[Edge]:
        return list(self.matching)
