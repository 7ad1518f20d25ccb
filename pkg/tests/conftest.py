"""Shared fixtures: a brute-force matching oracle and small strategies."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from dynmatch import make_edge


def all_matchings(edges):
    """Every subset of ``edges`` with pairwise disjoint endpoints,
    by exhaustive enumeration. Only usable for tiny graphs."""
    out = []
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            verts = [v for e in combo for v in e]
            if len(verts) == len(set(verts)):
                out.append(frozenset(combo))
    return out


def maximal_matchings(edges):
    """All maximal matchings of ``edges``, by brute enumeration."""
    ms = all_matchings(edges)
    pool = set(ms)
    return [m for m in ms if not any(m < other for other in pool)]


def edges_strategy(max_vertex=9, max_size=10):
    pair = st.tuples(
        st.integers(0, max_vertex), st.integers(0, max_vertex)
    ).filter(lambda p: p[0] != p[1]).map(lambda p: make_edge(*p))
    return st.lists(pair, max_size=max_size, unique=True)


def ops_strategy(max_vertex=9, max_size=30):
    pair = st.tuples(
        st.integers(0, max_vertex), st.integers(0, max_vertex)
    ).filter(lambda p: p[0] != p[1]).map(lambda p: make_edge(*p))
    return st.lists(st.tuples(st.sampled_from("+-"), pair), max_size=max_size)


@pytest.fixture(scope="session")
def letters():
    """Vertex ids for the seven-vertex worked example."""
    return dict(zip("abcdefg", range(7)))
