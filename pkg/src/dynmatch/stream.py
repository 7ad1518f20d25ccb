"""Update-stream file format and seeded workload generation.

Stream files are UTF-8 text, one record per line; ``#`` starts a comment
line. An optional first record ``n <int>`` declares a dense vertex
universe; without it the stream is sparse. Update records are
``+ <u> <v>`` and ``- <u> <v>`` with non-negative decimal vertex ids and
``u != v``; query records are ``? <u>``. The serializer emits exactly this
grammar with single-space separators and newline-terminated lines, so
generated streams diff cleanly and round-trip through the parser.

Workload generation is driven by a Mersenne Twister (`random.Random`)
seeded from the config, with all integer draws routed through a
rejection-sampled ``getrandbits`` helper. That keeps generated streams
byte-identical across platforms and interpreter versions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from .core import Edge, make_edge

INSERT = "+"
DELETE = "-"
QUERY = "?"

NOOP_RATE = 0.1  # share of no-op updates injected when allow_noop is set


class StreamEvent(NamedTuple):
    kind: str  # "+", "-" or "?"
    u: int
    v: int | None = None


class StreamParseError(ValueError):
    """Malformed stream input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class StreamRangeError(StreamParseError):
    """Vertex id outside the declared dense universe."""


@dataclass(frozen=True)
class WorkloadConfig:
    n: int
    updates: int
    seed: int
    p_delete: float = 0.0
    query_rate: float = 0.0
    allow_noop: bool = False

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.updates < 0:
            raise ValueError("update count must be non-negative")
        if not 0.0 <= self.p_delete <= 1.0:
            raise ValueError("p_delete must lie in [0, 1]")
        if not 0.0 <= self.query_rate <= 10.0:
            raise ValueError("query_rate must lie in [0, 10]")


def parse_stream(text: str) -> tuple[int | None, list[StreamEvent]]:
    """Parse stream text into (declared n or None, events in file order)."""
    header: int | None = None
    events: list[StreamEvent] = []
    saw_record = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "n":
            if saw_record or header is not None:
                raise StreamParseError(lineno, "header must be the first record")
            if len(fields) != 2:
                raise StreamParseError(lineno, "header is 'n <int>'")
            header = _parse_int(lineno, fields[1])
            continue
        saw_record = True
        if tag in (INSERT, DELETE):
            if len(fields) != 3:
                raise StreamParseError(lineno, f"update is '{tag} <u> <v>'")
            u = _parse_int(lineno, fields[1])
            v = _parse_int(lineno, fields[2])
            if u == v:
                raise StreamParseError(lineno, f"self-loop ({u},{v})")
            _check_range(lineno, header, u, v)
            events.append(StreamEvent(tag, u, v))
        elif tag == QUERY:
            if len(fields) != 2:
                raise StreamParseError(lineno, "query is '? <u>'")
            u = _parse_int(lineno, fields[1])
            _check_range(lineno, header, u)
            events.append(StreamEvent(QUERY, u))
        else:
            raise StreamParseError(lineno, f"unknown record {tag!r}")
    return header, events


def _parse_int(lineno: int, token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise StreamParseError(lineno, f"not an integer: {token!r}") from None
    if value < 0:
        raise StreamParseError(lineno, f"negative id {value}")
    return value


def _check_range(lineno: int, header: int | None, *ids: int) -> None:
    if header is None:
        return
    for u in ids:
        if u >= header:
            raise StreamRangeError(lineno, f"vertex {u} outside declared universe of {header}")


def serialize_stream(header_n: int | None, events) -> str:
    """Emit the exact line grammar; inverse of :func:`parse_stream`."""
    lines: list[str] = []
    if header_n is not None:
        lines.append(f"n {header_n}")
    for ev in events:
        if ev.kind == QUERY:
            lines.append(f"? {ev.u}")
        else:
            lines.append(f"{ev.kind} {ev.u} {ev.v}")
    return "".join(line + "\n" for line in lines)


def _randbelow(rng: random.Random, bound: int) -> int:
    # getrandbits + rejection: the draw sequence is pinned to the MT bit
    # stream, unlike randrange whose internals have shifted across versions.
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound == 1:
        return 0
    bits = (bound - 1).bit_length()
    while True:
        r = rng.getrandbits(bits)
        if r < bound:
            return r


def generate(cfg: WorkloadConfig) -> list[StreamEvent]:
    """Seeded workload: exactly ``cfg.updates`` update events, interleaved
    with queries at ``cfg.query_rate`` expected queries per update.

    Inserts draw a uniformly random absent pair; with probability
    ``p_delete`` an update instead deletes a uniformly random present edge
    (never emitted while the tracked graph is empty). Once the graph is
    complete, further inserts repeat present edges, which the consumers
    treat as no-ops. ``allow_noop`` additionally injects explicit no-op
    updates (re-inserts and absent deletes) at a fixed rate.
    """
    cfg.validate()
    rng = random.Random(cfg.seed)
    n = cfg.n
    total_pairs = n * (n - 1) // 2
    present: list[Edge] = []
    index: dict[Edge, int] = {}
    events: list[StreamEvent] = []

    def random_pair() -> Edge:
        u = _randbelow(rng, n)
        v = _randbelow(rng, n - 1)
        if v >= u:
            v += 1
        return make_edge(u, v)

    def insert_absent() -> None:
        while True:
            e = random_pair()
            if e not in index:
                break
        index[e] = len(present)
        present.append(e)
        events.append(StreamEvent(INSERT, e[0], e[1]))

    def delete_present() -> None:
        i = _randbelow(rng, len(present))
        e = present[i]
        last = present[-1]
        present[i] = last
        index[last] = i
        present.pop()
        del index[e]
        events.append(StreamEvent(DELETE, e[0], e[1]))

    def emit_noop() -> None:
        # Re-insert a present edge, or delete an absent pair; pick whichever
        # exists, by coin when both do.
        want_insert = bool(present) and (len(present) == total_pairs or rng.random() < 0.5)
        if want_insert:
            e = present[_randbelow(rng, len(present))]
            events.append(StreamEvent(INSERT, e[0], e[1]))
        else:
            while True:
                e = random_pair()
                if e not in index:
                    break
            events.append(StreamEvent(DELETE, e[0], e[1]))

    for _ in range(cfg.updates):
        if cfg.allow_noop and rng.random() < NOOP_RATE and total_pairs > len(present) > 0:
            emit_noop()
        elif present and rng.random() < cfg.p_delete:
            delete_present()
        elif len(present) == total_pairs:
            # Saturated universe: only idempotent repeats remain.
            e = present[_randbelow(rng, len(present))]
            events.append(StreamEvent(INSERT, e[0], e[1]))
        else:
            insert_absent()

        queries = int(cfg.query_rate)
        if rng.random() < cfg.query_rate - queries:
            queries += 1
        for _ in range(queries):
            events.append(StreamEvent(QUERY, _randbelow(rng, n)))

    return events


def max_edges_by_replay(events) -> int:
    """All-time maximum edge count of a stream, by direct set replay."""
    edges: set[Edge] = set()
    best = 0
    for ev in events:
        if ev.kind == INSERT:
            edges.add(make_edge(ev.u, ev.v))
            if len(edges) > best:
                best = len(edges)
        elif ev.kind == DELETE:
            edges.discard(make_edge(ev.u, ev.v))
    return best
