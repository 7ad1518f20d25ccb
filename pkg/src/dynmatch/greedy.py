"""Greedy maximal matching over an edge list, respecting existing mates."""

from __future__ import annotations

from .core import DenseMateStore, Edge


def greedy(graph: list[Edge], store) -> list[Edge]:
    """Match edges of ``graph`` in list order wherever both endpoints are free.

    Pairs each matched edge in ``store`` and returns the matches in
    encounter order. Entries that are mated on entry are never modified,
    so the result is a maximal matching of the subgraph spanned by the
    initially unmated vertices. Deterministic for a fixed (graph order,
    store state); one pass, O(len(graph)) counted mate ops.
    """
    counters = store.counters
    counters.greedy_edge_visits += len(graph)
    if isinstance(store, DenseMateStore):
        matched = _greedy_dense(graph, store)
    else:
        matched = _greedy_generic(graph, store)
    counters.list_writes += len(matched)
    return matched


def _greedy_dense(graph, store):
    # Hot path: index the slot array directly and settle the counted
    # mate ops in one batch at the end.
    slots = store.slots
    matched: list[Edge] = []
    append = matched.append
    gets = 0
    sets = 0
    for e in graph:
        u, v = e
        if slots[u] is None:
            gets += 2
            if slots[v] is None:
                slots[u] = v
                slots[v] = u
                sets += 2
                append(e)
        else:
            gets += 1
    store.counters.mate_ops += gets + sets
    return matched


def _greedy_generic(graph, store):
    matched: list[Edge] = []
    get = store.get
    for e in graph:
        if get(e[0]) is None and get(e[1]) is None:
            store.set_pair(e)
            matched.append(e)
    return matched
