"""Stream execution, per-update verification, and CSV bench records.

`run_stream` drives either maintainer over a parsed event stream, answers
queries inline at their stream position, and (with ``verify=True``) checks
after every single update that the maintainer's edge set matches an
independently tracked replica and that the store passes the validity and
maximality checks. `run_scaling` produces the doubling-series records the
amortized-growth comparison is judged on.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .core import Edge, make_edge
from .matcher import DEFAULT_THRESHOLD, DynamicMatcher, UpdateOp
from .reference import RecomputeMatcher, Violation, check_maximal, check_valid
from .stream import QUERY, StreamEvent, WorkloadConfig, generate

CSV_FIELDS = (
    "stream_id,algorithm,indicator,mate,n,m_max,updates,wall_ns,amortized_ns,"
    "greedy_edge_visits,list_writes,indicator_ops,mate_ops,depth_max,setup_kind"
)

LOOKAHEAD = "lookahead"
RECOMPUTE = "recompute"


class VerificationError(Exception):
    """A per-update check failed; carries the 1-based update index."""

    def __init__(self, update_index: int, violation: Violation | str):
        super().__init__(f"update {update_index}: {violation}")
        self.update_index = update_index
        self.violation = violation


@dataclass
class BenchRecord:
    stream_id: str
    algorithm: str
    indicator: str
    mate: str
    n: int | None
    m_max: int
    updates: int
    wall_ns: int
    amortized_ns: int
    greedy_edge_visits: int
    list_writes: int
    indicator_ops: int
    mate_ops: int
    depth_max: int
    setup_kind: str

    def csv_row(self) -> str:
        n = "" if self.n is None else self.n
        return (
            f"{self.stream_id},{self.algorithm},{self.indicator},{self.mate},{n},"
            f"{self.m_max},{self.updates},{self.wall_ns},{self.amortized_ns},"
            f"{self.greedy_edge_visits},{self.list_writes},{self.indicator_ops},"
            f"{self.mate_ops},{self.depth_max},{self.setup_kind}"
        )

    def work_per_update(self) -> float:
        work = self.greedy_edge_visits + self.list_writes + self.indicator_ops + self.mate_ops
        return work / self.updates if self.updates else 0.0


@dataclass
class RunResult:
    record: BenchRecord
    driver: object
    answers: list[tuple[int, int, int | None]]  # (update index, vertex, mate)


def split_events(events) -> tuple[list[UpdateOp], dict[int, list[int]]]:
    """Separate updates from queries; queries are keyed by how many updates
    precede them, so they can be answered at their stream position."""
    updates: list[UpdateOp] = []
    queries: dict[int, list[int]] = {}
    for ev in events:
        if ev.kind == QUERY:
            queries.setdefault(len(updates), []).append(ev.u)
        else:
            updates.append(UpdateOp(ev.kind, make_edge(ev.u, ev.v)))
    return updates, queries


def build_driver(
    mode: str,
    n: int | None,
    *,
    indicator: str = "matrix",
    mate: str = "dense",
    threshold: int = DEFAULT_THRESHOLD,
    phase_override: int | None = None,
    on_update=None,
    on_phase_boundary=None,
):
    if mode == LOOKAHEAD:
        return DynamicMatcher(
            n,
            mate_strategy=mate,
            indicator_strategy=indicator,
            threshold=threshold,
            phase_override=phase_override,
            on_update=on_update,
            on_phase_boundary=on_phase_boundary,
        )
    if mode == RECOMPUTE:
        return RecomputeMatcher(n, mate_strategy=mate, on_update=on_update)
    raise ValueError(f"unknown mode {mode!r}")


def run_stream(
    events,
    *,
    header_n: int | None = None,
    mode: str = LOOKAHEAD,
    indicator: str = "matrix",
    mate: str = "dense",
    threshold: int = DEFAULT_THRESHOLD,
    phase_override: int | None = None,
    verify: bool = False,
    stream_id: str = "<memory>",
    on_update_extra=None,
    on_phase_boundary=None,
) -> RunResult:
    """Drive one algorithm over ``events`` and return its bench record.

    Queries are answered inline and collected into the result. With
    ``verify`` set, every consumed update is followed by a full check:
    the maintainer's edge set must equal the replica set, and the store
    must pass validity and maximality; the first failure raises
    :class:`VerificationError` with the update index.
    """
    updates, queries = split_events(events)
    answers: list[tuple[int, int, int | None]] = []
    replica: set[Edge] = set()

    def handle(driver) -> None:
        i = driver.counters.updates_processed
        if verify:
            op = updates[i - 1]
            if op.kind == "+":
                replica.add(op.edge)
            else:
                replica.discard(op.edge)
            snap = driver.snapshot_graph()
            if len(snap) != len(replica) or set(snap) != replica:
                raise VerificationError(i, "graph edge set diverged from replica")
            bad = check_valid(replica, driver.store) or check_maximal(replica, driver.store)
            if bad is not None:
                raise VerificationError(i, bad)
        for u in queries.get(i, ()):
            answers.append((i, u, driver.mate_query(u)))
        if on_update_extra is not None:
            on_update_extra(driver)

    driver = build_driver(
        mode,
        header_n,
        indicator=indicator,
        mate=mate,
        threshold=threshold,
        phase_override=phase_override,
        on_update=handle,
        on_phase_boundary=on_phase_boundary,
    )

    start = time.perf_counter_ns()
    for u in queries.get(0, ()):
        answers.append((0, u, driver.mate_query(u)))
    for op in updates:
        driver.push_update(op)
    driver.run_until_buffer_consumed()
    wall = time.perf_counter_ns() - start

    c = driver.counters
    if mode == LOOKAHEAD:
        ind_name = driver.indicator.strategy
        setup_kind = driver.indicator.setup_kind
    else:
        ind_name = "-"
        setup_kind = "-"
    record = BenchRecord(
        stream_id=stream_id,
        algorithm=mode,
        indicator=ind_name,
        mate=driver.store.strategy,
        n=header_n,
        m_max=driver.max_edges,
        updates=c.updates_processed,
        wall_ns=wall,
        amortized_ns=wall // c.updates_processed if c.updates_processed else 0,
        greedy_edge_visits=c.greedy_edge_visits,
        list_writes=c.list_writes,
        indicator_ops=c.indicator_ops,
        mate_ops=c.mate_ops,
        depth_max=c.recursion_depth_max,
        setup_kind=setup_kind,
    )
    return RunResult(record, driver, answers)


# -- doubling-series scaling ---------------------------------------------


def scaling_vertex_count(size: int) -> int:
    """Universe size for an insert-only stream peaking at ``size`` edges:
    the smallest power of two whose pair count leaves 2x headroom, which
    keeps absent-pair rejection sampling cheap."""
    n = 4
    while n * (n - 1) // 2 < 2 * size:
        n *= 2
    return n


def scaling_stream(size: int, seed: int) -> tuple[int, list[StreamEvent]]:
    """Insert-heavy stream with exactly ``size`` updates and m_max == size."""
    n = scaling_vertex_count(size)
    cfg = WorkloadConfig(n=n, updates=size, seed=seed, p_delete=0.0, query_rate=0.0)
    return n, generate(cfg)


def run_scaling(
    sizes,
    *,
    modes=(LOOKAHEAD, RECOMPUTE),
    indicator: str = "matrix",
    mate: str = "dense",
    threshold: int = DEFAULT_THRESHOLD,
    seed: int = 1,
    recompute_cap: int | None = None,
) -> list[BenchRecord]:
    """One record per (size, mode). ``recompute_cap`` skips the linear
    baseline above that size, where its quadratic total work dominates the
    whole series."""
    records: list[BenchRecord] = []
    for size in sizes:
        n, events = scaling_stream(size, seed)
        for mode in modes:
            if mode == RECOMPUTE and recompute_cap is not None and size > recompute_cap:
                continue
            result = run_stream(
                events,
                header_n=n,
                mode=mode,
                indicator=indicator,
                mate=mate,
                threshold=threshold,
                stream_id=f"scale-{size}-seed{seed}",
            )
            records.append(result.record)
    return records


def doubling_ratios(records) -> list[tuple[int, float]]:
    """Consecutive ratios of amortized counter work, ordered by m_max.

    Returns (larger m_max, work ratio) per doubling step.
    """
    ordered = sorted(records, key=lambda r: r.m_max)
    out: list[tuple[int, float]] = []
    for prev, cur in zip(ordered, ordered[1:]):
        prev_work = prev.work_per_update()
        if prev_work > 0:
            out.append((cur.m_max, cur.work_per_update() / prev_work))
    return out


def fit_log_model(records) -> tuple[float, float, float]:
    """Least-squares fit of amortized work to a*log2(m_max) + b.

    Returns (a, b, max relative residual over the fitted points).
    """
    points = [(math.log2(r.m_max), r.work_per_update()) for r in records if r.m_max > 0]
    k = len(points)
    if k < 2:
        raise ValueError("need at least two sizes to fit")
    sx = sum(x for x, _ in points)
    sy = sum(y for _, y in points)
    sxx = sum(x * x for x, _ in points)
    sxy = sum(x * y for x, y in points)
    denom = k * sxx - sx * sx
    a = (k * sxy - sx * sy) / denom
    b = (sy - a * sx) / k
    worst = max(abs(y - (a * x + b)) / y for x, y in points)
    return a, b, worst
