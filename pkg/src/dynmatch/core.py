"""Graph primitives for dynamic matching.

A graph is an ordered list of normalized edges (vertex pairs with the
smaller id first). On top of that this module provides the two stateful
structures every matching algorithm here shares:

* a **mate store** mapping each matched vertex to its partner, and
* an **edge indicator**, a clearable edge-membership tester used to split
  an edge list against a batch of edges in linear time.

Both come in two storage strategies. The dense variants index vertices
``0..n-1`` directly and need ``n`` declared up front; the ordered variants
keep sorted key arrays, accept arbitrary non-negative vertex ids, and pay
``O(log size)`` counted comparisons per operation. For a fixed operation
sequence the strategies are observationally equivalent.

All counted work flows into an :class:`OpCounters` instance so that cost
claims can be checked deterministically, independent of wall time.
"""

from __future__ import annotations

from dataclasses import dataclass

Edge = tuple[int, int]

MATE_STRATEGIES = ("dense", "map")
INDICATOR_STRATEGIES = ("matrix", "set")


class SelfLoopError(ValueError):
    """An edge may not connect a vertex to itself."""


class MateStateError(RuntimeError):
    """A mate update violated the pairing discipline.

    This signals a bug in the calling algorithm, not bad user input:
    pairing is only legal between two unmated vertices, and unpairing is
    only legal for a currently paired edge.
    """


@dataclass
class OpCounters:
    """Deterministic work counters for one algorithm instance.

    All fields are monotone non-decreasing over a run. ``work_total``
    is the quantity benchmarks amortize over the number of updates.
    """

    updates_processed: int = 0
    greedy_edge_visits: int = 0
    list_writes: int = 0
    indicator_ops: int = 0
    mate_ops: int = 0
    recursion_depth_max: int = 0

    def work_total(self) -> int:
        return (
            self.greedy_edge_visits
            + self.list_writes
            + self.indicator_ops
            + self.mate_ops
        )


def make_edge(u: int, v: int) -> Edge:
    """Normalized undirected edge: ``(min(u, v), max(u, v))``."""
    if u == v:
        raise SelfLoopError(f"self-loop ({u},{v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


def edgelist_insert(edges: list[Edge], e: Edge, counters: OpCounters | None = None) -> bool:
    """Append ``e`` unless already present; True when the list changed.

    Presence is checked by a full scan, so one call costs O(len) counted
    list work. Prior entries keep their order.
    """
    if counters is not None:
        counters.list_writes += len(edges) + 1
    if e in edges:
        return False
    edges.append(e)
    return True


def edgelist_delete(edges: list[Edge], e: Edge, counters: OpCounters | None = None) -> bool:
    """Remove ``e`` if present; True when the list changed.

    One full-list pass, O(len) counted work; remaining entries keep their
    relative order. Deleting an absent edge is a no-op.
    """
    if counters is not None:
        counters.list_writes += len(edges)
    try:
        edges.remove(e)
    except ValueError:
        return False
    return True


class DenseMateStore:
    """Vertex-to-mate array over the fixed universe ``0..n-1``.

    Setup writes ``n`` null entries (counted). Every get costs exactly one
    counted mate op; pairing/unpairing costs two. Between operations the
    symmetry invariant holds: ``mate(u) == v`` iff ``mate(v) == u``.
    """

    strategy = "dense"

    def __init__(self, n: int, counters: OpCounters | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.counters = counters if counters is not None else OpCounters()
        self.slots: list[int | None] = [None] * n
        self.setup_ops = n

    def get(self, u: int) -> int | None:
        if not 0 <= u < self.n:
            raise IndexError(f"vertex {u} outside dense universe of size {self.n}")
        self.counters.mate_ops += 1
        return self.slots[u]

    def set_pair(self, e: Edge) -> None:
        a, b = e
        slots = self.slots
        if slots[a] is not None or slots[b] is not None:
            raise MateStateError(f"set_pair{e}: an endpoint is already mated")
        slots[a] = b
        slots[b] = a
        self.counters.mate_ops += 2

    def clear_pair(self, e: Edge) -> None:
        a, b = e
        slots = self.slots
        if slots[a] != b or slots[b] != a:
            raise MateStateError(f"clear_pair{e}: endpoints are not mated to each other")
        slots[a] = None
        slots[b] = None
        self.counters.mate_ops += 2

    def mated_items(self):
        """Yield ``(u, mate(u))`` for every mated vertex. Uncounted: this
        is a diagnostic scan, not algorithm work."""
        for u, v in enumerate(self.slots):
            if v is not None:
                yield u, v

    def mated_pairs(self):
        """Yield each matched edge once, normalized. Uncounted."""
        for u, v in enumerate(self.slots):
            if v is not None and u < v:
                yield (u, v)


class OrderedMapMateStore:
    """Sorted-array map holding only the mated vertices.

    Constant setup, arbitrary non-negative vertex ids, and a memory
    footprint proportional to the number of mated vertices. Lookups
    binary-search the key array; every key comparison counts one mate op,
    so a lookup among k mated vertices costs ceil(log2 k) + O(1) counted
    ops. Absent keys read as unmated.
    """

    strategy = "map"

    def __init__(self, counters: OpCounters | None = None):
        self.counters = counters if counters is not None else OpCounters()
        self._keys: list[int] = []
        self._vals: list[int] = []
        self.setup_ops = 1

    def _locate(self, u: int) -> int:
        """Leftmost insertion index for ``u``, counting each comparison."""
        keys = self._keys
        lo, hi = 0, len(keys)
        comps = 0
        while lo < hi:
            mid = (lo + hi) // 2
            comps += 1
            if keys[mid] < u:
                lo = mid + 1
            else:
                hi = mid
        self.counters.mate_ops += comps
        return lo

    def get(self, u: int) -> int | None:
        if u < 0:
            raise IndexError(f"vertex {u} is negative")
        i = self._locate(u)
        keys = self._keys
        self.counters.mate_ops += 1  # final equality probe
        if i < len(keys) and keys[i] == u:
            return self._vals[i]
        return None

    def _insert(self, u: int, v: int) -> None:
        i = self._locate(u)
        self._keys.insert(i, u)
        self._vals.insert(i, v)
        self.counters.mate_ops += 1

    def _remove(self, u: int, expect: int) -> None:
        i = self._locate(u)
        keys = self._keys
        if i >= len(keys) or keys[i] != u or self._vals[i] != expect:
            raise MateStateError(f"clear_pair({u},{expect}): endpoints are not mated to each other")
        del keys[i]
        del self._vals[i]
        self.counters.mate_ops += 1

    def set_pair(self, e: Edge) -> None:
        a, b = e
        if self.get(a) is not None or self.get(b) is not None:
            raise MateStateError(f"set_pair{e}: an endpoint is already mated")
        self._insert(a, b)
        self._insert(b, a)

    def clear_pair(self, e: Edge) -> None:
        a, b = e
        self._remove(a, b)
        self._remove(b, a)

    def mated_items(self):
        yield from zip(self._keys, self._vals)

    def mated_pairs(self):
        for u, v in zip(self._keys, self._vals):
            if u < v:
                yield (u, v)


class LazyMatrixIndicator:
    """n-by-n boolean table backed by a flat zero-filled bytearray.

    Allocation relies on the runtime handing back zeroed memory, so no
    clearing pass runs at setup and ``setup_kind`` is ``"lazy"``. Passing
    ``eager_clear=True`` instead wipes the table entry by entry (counted,
    ``setup_kind`` ``"eager-n2"``), modelling platforms without cheap
    zeroed allocation.

    There is deliberately no bulk reset: callers must clear exactly the
    entries they set, which keeps the all-zero state a matter of
    discipline rather than an O(n^2) pass.
    """

    strategy = "matrix"

    def __init__(self, n: int, counters: OpCounters | None = None, *, eager_clear: bool = False):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.counters = counters if counters is not None else OpCounters()
        self.table = bytearray(n * n)
        if eager_clear:
            table = self.table
            for i in range(n * n):
                table[i] = 0
            self.setup_ops = n * n
            self.setup_kind = "eager-n2"
        else:
            self.setup_ops = 1
            self.setup_kind = "lazy"

    def set(self, e: Edge) -> None:
        a, b = e
        self.table[a * self.n + b] = 1
        self.counters.indicator_ops += 1

    def test(self, e: Edge) -> bool:
        a, b = e
        self.counters.indicator_ops += 1
        return self.table[a * self.n + b] != 0

    def clear(self, e: Edge) -> None:
        a, b = e
        self.table[a * self.n + b] = 0
        self.counters.indicator_ops += 1


class OrderedSetIndicator:
    """Sorted edge array with binary-searched membership.

    Constant setup, arbitrary vertex ids, O(log size) counted comparisons
    per operation; the sparse alternative to the matrix indicator.
    """

    strategy = "set"
    setup_kind = "lazy"

    def __init__(self, counters: OpCounters | None = None):
        self.counters = counters if counters is not None else OpCounters()
        self._edges: list[Edge] = []
        self.setup_ops = 1

    def _locate(self, e: Edge) -> int:
        edges = self._edges
        lo, hi = 0, len(edges)
        comps = 0
        while lo < hi:
            mid = (lo + hi) // 2
            comps += 1
            if edges[mid] < e:
                lo = mid + 1
            else:
                hi = mid
        self.counters.indicator_ops += comps + 1  # probes plus equality check
        return lo

    def set(self, e: Edge) -> None:
        i = self._locate(e)
        edges = self._edges
        if i < len(edges) and edges[i] == e:
            return
        edges.insert(i, e)
        self.counters.indicator_ops += 1

    def test(self, e: Edge) -> bool:
        i = self._locate(e)
        edges = self._edges
        return i < len(edges) and edges[i] == e

    def clear(self, e: Edge) -> None:
        i = self._locate(e)
        edges = self._edges
        if i < len(edges) and edges[i] == e:
            del edges[i]
            self.counters.indicator_ops += 1


def make_mate_store(strategy: str, n: int | None = None, counters: OpCounters | None = None):
    if strategy == "dense":
        if n is None:
            raise ValueError("dense mate store needs a declared vertex count")
        return DenseMateStore(n, counters)
    if strategy == "map":
        return OrderedMapMateStore(counters)
    raise ValueError(f"unknown mate strategy {strategy!r}")


def make_indicator(
    strategy: str,
    n: int | None = None,
    counters: OpCounters | None = None,
    *,
    eager_clear: bool = False,
):
    if strategy == "matrix":
        if n is None:
            raise ValueError("matrix indicator needs a declared vertex count")
        return LazyMatrixIndicator(n, counters, eager_clear=eager_clear)
    if strategy == "set":
        return OrderedSetIndicator(counters)
    raise ValueError(f"unknown indicator strategy {strategy!r}")
