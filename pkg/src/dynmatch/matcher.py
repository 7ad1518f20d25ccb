"""Lookahead-batched maintenance of a maximal matching under edge updates.

:class:`DynamicMatcher` buffers a stream of edge insertions and deletions
and consumes it in *phases*. While the current edge list is small, each
phase handles one update and rebuilds the local matching from scratch.
Once the edge list is large, a phase peeks at a batch of upcoming updates,
collects the edges they mention, splits the edge list into an untouched
part and a touched part, greedily matches the untouched part once, and
recurses on the touched part with the same batch. Because the touched
part and the batch both shrink geometrically, each update is handled at a
recursion depth logarithmic in the largest graph size, which is what
makes the amortized counted work per update logarithmic rather than
linear.

The mate store and the edge indicator are shared across all recursion
levels; each level owns only its slice of the edge list and its local
matching. The store alone therefore always describes the full current
matching, and mate queries between updates cost a single counted lookup
in dense mode.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import islice
from typing import NamedTuple

from .core import (
    Edge,
    OpCounters,
    edgelist_delete,
    edgelist_insert,
    make_edge,
    make_indicator,
    make_mate_store,
)
from .greedy import greedy

INSERT = "+"
DELETE = "-"

SINGLE = "single"
BATCH = "batch"

DEFAULT_THRESHOLD = 42


class LookaheadError(ValueError):
    """The update source ran out before the requested lookahead."""


class UpdateOp(NamedTuple):
    kind: str  # INSERT or DELETE
    edge: Edge


class PhasePlan(NamedTuple):
    mode: str  # SINGLE or BATCH
    t_prime: int
    m0: int


def plan_phase(m0: int, remaining: int, threshold: int, override: int | None = None) -> PhasePlan:
    """Decide how many of the ``remaining`` updates the next phase consumes.

    Small graphs (fewer than ``threshold`` edges) take the single-update
    path. Large graphs take a batch: half the graph size while plenty of
    updates remain, otherwise half of what is left so the tail drains in
    halving steps. ``override`` pins the batch length instead (replay
    knob); it is halved per recursion level by the driver.
    """
    if remaining < 1:
        raise ValueError("no updates remaining to plan")
    if m0 < threshold:
        return PhasePlan(SINGLE, 1, m0)
    if override is not None:
        return PhasePlan(BATCH, min(override, remaining), m0)
    if remaining > m0:
        return PhasePlan(BATCH, max(1, m0 // 2), m0)
    if remaining >= 2:
        return PhasePlan(BATCH, (remaining + 1) // 2, m0)
    return PhasePlan(SINGLE, 1, m0)


def collect_batch_edges(batch, counters: OpCounters) -> list[Edge]:
    """Distinct edges mentioned by a batch of updates, first-mention order."""
    seen = set()
    out: list[Edge] = []
    for op in batch:
        e = op.edge
        if e not in seen:
            seen.add(e)
            out.append(e)
    counters.list_writes += len(batch)
    return out


def split_graph(graph, batch_edges, indicator, counters: OpCounters):
    """Partition ``graph`` into (graph - batch, graph & batch), keeping order.

    Requires the indicator all-clear on entry; marks the batch edges,
    routes each graph edge by one membership test, then unmarks the batch
    edges so the indicator is all-clear again on return. Total cost is
    O(len(graph) + len(batch_edges)) counted ops.
    """
    iset = indicator.set
    for e in batch_edges:
        iset(e)
    diff: list[Edge] = []
    inter: list[Edge] = []
    dapp = diff.append
    iapp = inter.append
    itest = indicator.test
    for e in graph:
        if itest(e):
            iapp(e)
        else:
            dapp(e)
    counters.list_writes += len(graph)
    iclear = indicator.clear
    for e in batch_edges:
        iclear(e)
    return diff, inter


@dataclass
class MatcherState:
    """One recursion level: its edge list slice and local matching.

    The store, indicator, and counters are shared across levels. Every
    matched edge of ``matching`` is in ``graph``, and across the active
    levels the graphs are pairwise disjoint while the local matchings
    jointly equal the mated pairs in the store.
    """

    graph: list[Edge]
    matching: list[Edge]
    store: object
    indicator: object
    threshold: int
    counters: OpCounters


def erase_local_matching(state: MatcherState) -> None:
    """Unpair every edge of the local matching and empty it.

    Pairs owned by other recursion levels are untouched; the store's
    pairing checks turn any ownership violation into a hard error.
    """
    matching = state.matching
    state.counters.list_writes += len(matching)
    clear = state.store.clear_pair
    for e in matching:
        clear(e)
    matching.clear()


def handle_single_update(state: MatcherState, op: UpdateOp) -> int:
    """Apply one update directly: erase the local matching, edit the edge
    list (idempotently), and rebuild the matching greedily.

    Returns the edge-count delta (+1 insert, -1 delete, 0 no-op) so the
    caller can track the all-time maximum graph size.
    """
    erase_local_matching(state)
    counters = state.counters
    if op.kind == INSERT:
        delta = 1 if edgelist_insert(state.graph, op.edge, counters) else 0
    else:
        delta = -1 if edgelist_delete(state.graph, op.edge, counters) else 0
    state.matching = greedy(state.graph, state.store)
    counters.updates_processed += 1
    return delta


class UpdateBuffer:
    """FIFO of pending updates supporting bounded peeks (the lookahead)."""

    def __init__(self, ops=()):
        self._q: deque[UpdateOp] = deque(ops)

    def push(self, op: UpdateOp) -> None:
        self._q.append(op)

    def peek(self, k: int) -> list[UpdateOp]:
        """The next ``k`` updates without consuming them."""
        if k > len(self._q):
            raise LookaheadError(f"lookahead of {k} requested but only {len(self._q)} buffered")
        return list(islice(self._q, k))

    def pop(self) -> UpdateOp:
        if not self._q:
            raise LookaheadError("update buffer exhausted")
        return self._q.popleft()

    def __len__(self) -> int:
        return len(self._q)


class DynamicMatcher:
    """Maximal-matching maintainer over a fully dynamic edge list.

    Feed updates with :meth:`push_update` (or :meth:`push`) and consume the
    buffer with :meth:`run_until_buffer_consumed`; the run may peek at
    buffered updates ahead of the one being processed. Between runs, and
    after every single consumed update, the matching is a maximal matching
    of the current graph and :meth:`mate_query` answers from the store.

    ``n`` declares the dense vertex universe and is required by the
    ``dense`` mate strategy and the ``matrix`` indicator strategy; with
    ``map``/``set`` strategies the matcher is fully sparse. ``threshold``
    is the graph size below which updates are handled one at a time.
    ``phase_override`` pins the batch length per level (halving each level
    down) and exists to replay hand-constructed traces.

    Hooks: ``on_update(matcher)`` fires after every consumed update;
    ``on_phase_boundary(matcher)`` fires around every batch split, at the
    two points where the indicator must be all-clear. Hooks must not push
    updates.

    Single-threaded; instances may move between threads between calls.
    """

    def __init__(
        self,
        n: int | None = None,
        *,
        mate_strategy: str = "dense",
        indicator_strategy: str = "matrix",
        threshold: int = DEFAULT_THRESHOLD,
        phase_override: int | None = None,
        initial_edges=(),
        eager_clear: bool = False,
        on_update=None,
        on_phase_boundary=None,
    ):
        if threshold < 1:
            raise ValueError("threshold must be at least 1")
        if phase_override is not None and phase_override < 1:
            raise ValueError("phase override must be at least 1")
        self.n = n
        self.counters = OpCounters()
        self.store = make_mate_store(mate_strategy, n, self.counters)
        self.indicator = make_indicator(indicator_strategy, n, self.counters, eager_clear=eager_clear)
        self.threshold = threshold
        self.phase_override = phase_override
        self.on_update = on_update
        self.on_phase_boundary = on_phase_boundary

        graph: list[Edge] = []
        for u, v in initial_edges:
            e = make_edge(u, v)
            self._check_range(e)
            if e not in graph:
                graph.append(e)
        self._state = MatcherState(graph, [], self.store, self.indicator, threshold, self.counters)
        self._stack: list[MatcherState] = [self._state]
        self._buffer = UpdateBuffer()
        self._running = False
        self.edge_count = len(graph)
        self.max_edges = len(graph)

    def _check_range(self, e: Edge) -> None:
        if self.n is not None and e[1] >= self.n:
            raise IndexError(f"edge {e} outside dense universe of size {self.n}")

    # -- update feed ----------------------------------------------------

    def push_update(self, op: UpdateOp) -> None:
        if self._running:
            raise RuntimeError("cannot push updates while a run is in progress")
        if op.kind not in (INSERT, DELETE):
            raise ValueError(f"unknown update kind {op.kind!r}")
        self._check_range(op.edge)
        self._buffer.push(op)

    def push(self, kind: str, u: int, v: int) -> None:
        self.push_update(UpdateOp(kind, make_edge(u, v)))

    def pending(self) -> int:
        return len(self._buffer)

    def run_until_buffer_consumed(self) -> None:
        count = len(self._buffer)
        if count == 0:
            return
        self._running = True
        try:
            self._process(self._state, count, self.phase_override, 1)
        finally:
            self._running = False

    # -- queries and snapshots -------------------------------------------

    def mate_query(self, u: int) -> int | None:
        """Current mate of ``u`` (one counted store lookup), or None."""
        return self.store.get(u)

    def snapshot_graph(self) -> list[Edge]:
        """The full current edge list: every active level's slice in order."""
        out: list[Edge] = []
        for state in self._stack:
            out.extend(state.graph)
        return out

    def snapshot_matching(self) -> list[Edge]:
        """Every active level's local matching, concatenated."""
        out: list[Edge] = []
        for state in self._stack:
            out.extend(state.matching)
        return out

    # -- the recursive phase machine ---------------------------------------

    def _process(self, state: MatcherState, count: int, override: int | None, depth: int) -> None:
        counters = self.counters
        if depth > counters.recursion_depth_max:
            counters.recursion_depth_max = depth
        buf = self._buffer
        remaining = count
        while remaining:
            plan = plan_phase(len(state.graph), remaining, state.threshold, override)
            if plan.mode == SINGLE:
                self._single(state, buf.pop())
                remaining -= 1
                continue

            t = plan.t_prime
            batch = buf.peek(t)
            batch_edges = collect_batch_edges(batch, counters)
            erase_local_matching(state)
            self._boundary()
            diff, inter = split_graph(state.graph, batch_edges, self.indicator, counters)
            self._boundary()
            state.matching = greedy(diff, state.store)
            state.graph = diff

            child = MatcherState(inter, [], state.store, state.indicator, state.threshold, counters)
            self._stack.append(child)
            try:
                child_override = None if override is None else (override // 2) or None
                self._process(child, t, child_override, depth + 1)
            finally:
                self._stack.pop()

            counters.list_writes += len(child.graph) + len(child.matching)
            state.graph.extend(child.graph)
            state.matching.extend(child.matching)
            remaining -= t

    def _single(self, state: MatcherState, op: UpdateOp) -> None:
        delta = handle_single_update(state, op)
        if delta:
            self.edge_count += delta
            if self.edge_count > self.max_edges:
                self.max_edges = self.edge_count
        if self.on_update is not None:
            self.on_update(self)

    def _boundary(self) -> None:
        if self.on_phase_boundary is not None:
            self.on_phase_boundary(self)
