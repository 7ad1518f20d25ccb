from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmatch import (
    DenseMateStore,
    DynamicMatcher,
    LookaheadError,
    MatcherState,
    OpCounters,
    OrderedSetIndicator,
    UpdateOp,
    check_maximal,
    check_valid,
    collect_batch_edges,
    erase_local_matching,
    handle_single_update,
    make_edge,
    plan_phase,
    split_graph,
)
from dynmatch.matcher import BATCH, SINGLE, UpdateBuffer

from conftest import maximal_matchings, ops_strategy

GOLDEN_INITIAL = [(0, 1), (1, 6), (0, 5), (4, 6), (2, 6), (3, 4)]
GOLDEN_UPDATES = [("+", 5, 6), ("-", 0, 5), ("+", 3, 2)]
GOLDEN_FINAL_GRAPH = {(0, 1), (1, 6), (2, 6), (4, 6), (3, 4), (5, 6), (2, 3)}
GOLDEN_FINAL_MATCHING = {(0, 1), (4, 6), (2, 3)}


class TestPlanPhase:
    def test_batch_is_half_the_graph(self):
        plan = plan_phase(6, 100, 1)
        assert plan == (BATCH, 3, 6)

    def test_small_graph_goes_single(self):
        plan = plan_phase(1, 5, 42)
        assert plan == (SINGLE, 1, 1)

    def test_tail_halves_the_remainder(self):
        # remaining 8 on an 8-edge graph: 4 now, rest to the successor
        assert plan_phase(8, 8, 2) == (BATCH, 4, 8)
        assert plan_phase(8, 4, 2) == (BATCH, 2, 8)

    def test_last_update_goes_single_even_on_big_graphs(self):
        assert plan_phase(100, 1, 2).mode == SINGLE

    def test_override_pins_batch_length(self):
        assert plan_phase(6, 100, 1, override=3) == (BATCH, 3, 6)
        assert plan_phase(6, 2, 1, override=3) == (BATCH, 2, 6)

    def test_no_work_is_an_error(self):
        with pytest.raises(ValueError):
            plan_phase(5, 0, 42)

    @given(st.integers(0, 500), st.integers(1, 500), st.integers(1, 64))
    def test_plan_invariants(self, m0, remaining, threshold):
        plan = plan_phase(m0, remaining, threshold)
        assert 1 <= plan.t_prime <= remaining
        if plan.mode == SINGLE:
            assert plan.t_prime == 1
        else:
            assert m0 >= threshold
            if remaining > m0:  # steady state keeps t' within a quarter band
                assert m0 // 4 <= plan.t_prime <= (m0 + 1) // 2

    @given(st.integers(0, 200), st.integers(1, 300), st.integers(1, 50))
    def test_planning_loop_consumes_exactly_remaining(self, m0, remaining, threshold):
        left = remaining
        steps = 0
        while left:
            left -= plan_phase(m0, left, threshold).t_prime
            steps += 1
            assert steps <= 2 * remaining + 10
        assert left == 0


class TestCollectBatchEdges:
    def test_worked_example_batch(self):
        batch = [
            UpdateOp("+", make_edge(5, 6)),
            UpdateOp("-", make_edge(0, 5)),
            UpdateOp("+", make_edge(3, 2)),
        ]
        assert collect_batch_edges(batch, OpCounters()) == [(5, 6), (0, 5), (2, 3)]

    def test_empty(self):
        assert collect_batch_edges([], OpCounters()) == []

    def test_dedup_across_mentions(self):
        batch = [
            UpdateOp("+", make_edge(1, 2)),
            UpdateOp("-", make_edge(1, 2)),
            UpdateOp("+", make_edge(2, 1)),
        ]
        assert collect_batch_edges(batch, OpCounters()) == [(1, 2)]


class TestSplitGraph:
    def test_worked_example_split(self):
        g = [(0, 1), (1, 6), (0, 5), (4, 6), (2, 6), (3, 4)]
        gp = [(5, 6), (0, 5), (2, 3)]
        c = OpCounters()
        diff, inter = split_graph(g, gp, OrderedSetIndicator(c), c)
        assert diff == [(0, 1), (1, 6), (4, 6), (2, 6), (3, 4)]
        assert inter == [(0, 5)]

    def test_empty_graph(self):
        c = OpCounters()
        assert split_graph([], [(1, 2)], OrderedSetIndicator(c), c) == ([], [])

    def test_full_intersection(self):
        c = OpCounters()
        diff, inter = split_graph([(1, 2)], [(1, 2)], OrderedSetIndicator(c), c)
        assert (diff, inter) == ([], [(1, 2)])

    @given(ops_strategy(max_vertex=9, max_size=20))
    @settings(max_examples=60)
    def test_partition_preserves_order_and_restores_indicator(self, ops):
        graph = []
        for _, e in ops:
            if e not in graph:
                graph.append(e)
        batch = [e for _, e in ops[: len(ops) // 2]]
        batch = list(dict.fromkeys(batch))
        c = OpCounters()
        ind = OrderedSetIndicator(c)
        diff, inter = split_graph(list(graph), batch, ind, c)
        bset = set(batch)
        assert diff == [e for e in graph if e not in bset]
        assert inter == [e for e in graph if e in bset]
        for e in graph + batch:
            assert not ind.test(e)


class TestEraseLocalMatching:
    def _state(self, n=8):
        c = OpCounters()
        return MatcherState([], [], DenseMateStore(n, c), OrderedSetIndicator(c), 42, c)

    def test_single_pair(self):
        state = self._state()
        state.store.set_pair((0, 1))
        state.matching = [(0, 1)]
        erase_local_matching(state)
        assert state.matching == []
        assert state.store.get(0) is None
        assert state.store.get(1) is None

    def test_empty_is_noop(self):
        state = self._state()
        erase_local_matching(state)
        assert state.matching == []

    def test_outer_pairs_survive(self):
        state = self._state()
        state.store.set_pair((6, 7))  # owned by an enclosing level
        for e in [(0, 1), (4, 5)]:
            state.store.set_pair(e)
        state.matching = [(0, 1), (4, 5)]
        erase_local_matching(state)
        for u in (0, 1, 4, 5):
            assert state.store.get(u) is None
        assert state.store.get(6) == 7
        assert state.store.get(7) == 6


class TestHandleSingleUpdate:
    def test_insert_blocked_by_outer_mates(self, letters):
        # a-b and g-e are mated by an enclosing level; inserting (f,g)
        # grows the local graph but matches nothing here.
        a, b, c, d, e, f, g = (letters[x] for x in "abcdefg")
        cnt = OpCounters()
        store = DenseMateStore(7, cnt)
        store.set_pair(make_edge(a, b))
        store.set_pair(make_edge(g, e))
        state = MatcherState([make_edge(a, f)], [], store, OrderedSetIndicator(cnt), 42, cnt)
        delta = handle_single_update(state, UpdateOp("+", make_edge(f, g)))
        assert delta == 1
        assert state.graph == [make_edge(a, f), make_edge(f, g)]
        assert state.matching == []

    def test_delete_to_empty(self, letters):
        a, f = letters["a"], letters["f"]
        cnt = OpCounters()
        state = MatcherState(
            [make_edge(a, f)], [], DenseMateStore(7, cnt), OrderedSetIndicator(cnt), 42, cnt
        )
        delta = handle_single_update(state, UpdateOp("-", make_edge(a, f)))
        assert delta == -1
        assert state.graph == []
        assert state.matching == []

    def test_insert_matches_free_pair(self, letters):
        c, d, e, f, g = (letters[x] for x in "cdefg")
        cnt = OpCounters()
        store = DenseMateStore(7, cnt)
        store.set_pair(make_edge(g, e))  # g is outer-mated
        state = MatcherState([make_edge(g, f)], [], store, OrderedSetIndicator(cnt), 42, cnt)
        delta = handle_single_update(state, UpdateOp("+", make_edge(d, c)))
        assert delta == 1
        assert state.graph == [make_edge(g, f), make_edge(c, d)]
        assert state.matching == [make_edge(c, d)]

    def test_noop_insert_reports_zero_delta(self):
        cnt = OpCounters()
        state = MatcherState([(1, 2)], [], DenseMateStore(4, cnt), OrderedSetIndicator(cnt), 42, cnt)
        assert handle_single_update(state, UpdateOp("+", (1, 2))) == 0
        assert handle_single_update(state, UpdateOp("-", (0, 3))) == 0


class TestUpdateBuffer:
    def test_peek_does_not_consume(self):
        buf = UpdateBuffer([UpdateOp("+", (0, 1)), UpdateOp("-", (0, 1))])
        assert buf.peek(2) == [UpdateOp("+", (0, 1)), UpdateOp("-", (0, 1))]
        assert len(buf) == 2

    def test_peek_past_end_is_an_error(self):
        buf = UpdateBuffer([UpdateOp("+", (0, 1))])
        with pytest.raises(LookaheadError):
            buf.peek(2)

    def test_pop_empty_is_an_error(self):
        with pytest.raises(LookaheadError):
            UpdateBuffer().pop()


def run_golden(**kwargs) -> DynamicMatcher:
    m = DynamicMatcher(7, initial_edges=GOLDEN_INITIAL, **kwargs)
    for kind, u, v in GOLDEN_UPDATES:
        m.push(kind, u, v)
    m.run_until_buffer_consumed()
    return m


class TestGoldenReplay:
    def test_threshold_one(self):
        m = run_golden(threshold=1)
        assert set(m.snapshot_graph()) == GOLDEN_FINAL_GRAPH
        assert set(m.snapshot_matching()) == GOLDEN_FINAL_MATCHING

    def test_threshold_one_with_override(self):
        # pinned top-level batch of 3, halving to 1 below: the
        # hand-traceable phase structure; same final state.
        m = run_golden(threshold=1, phase_override=3)
        assert set(m.snapshot_graph()) == GOLDEN_FINAL_GRAPH
        assert set(m.snapshot_matching()) == GOLDEN_FINAL_MATCHING

    def test_default_threshold(self):
        m = run_golden()
        assert set(m.snapshot_graph()) == GOLDEN_FINAL_GRAPH
        assert set(m.snapshot_matching()) == GOLDEN_FINAL_MATCHING

    def test_from_empty_graph_via_inserts(self):
        m = DynamicMatcher(7, threshold=1)
        for u, v in GOLDEN_INITIAL:
            m.push("+", u, v)
        for kind, u, v in GOLDEN_UPDATES:
            m.push(kind, u, v)
        m.run_until_buffer_consumed()
        assert set(m.snapshot_graph()) == GOLDEN_FINAL_GRAPH
        assert set(m.snapshot_matching()) == GOLDEN_FINAL_MATCHING

    def test_mate_queries_after_replay(self, letters):
        m = run_golden(threshold=1)
        assert m.mate_query(letters["a"]) == letters["b"]
        assert m.mate_query(letters["f"]) is None

    def test_query_on_isolated_vertex(self):
        m = DynamicMatcher(9)
        m.push("+", 0, 1)
        m.run_until_buffer_consumed()
        assert m.mate_query(8) is None

    def test_single_insert_on_empty_graph(self):
        m = DynamicMatcher(4)
        m.push("+", 1, 2)
        m.run_until_buffer_consumed()
        assert m.snapshot_graph() == [(1, 2)]
        assert m.snapshot_matching() == [(1, 2)]


class TestDriver:
    def test_push_validates_range_in_dense_mode(self):
        m = DynamicMatcher(4)
        with pytest.raises(IndexError):
            m.push("+", 1, 7)

    def test_sparse_mode_accepts_any_ids(self):
        m = DynamicMatcher(mate_strategy="map", indicator_strategy="set")
        m.push("+", 10**9, 7)
        m.run_until_buffer_consumed()
        assert m.snapshot_graph() == [(7, 10**9)]
        assert m.mate_query(10**9) == 7

    def test_dense_strategies_require_n(self):
        with pytest.raises(ValueError):
            DynamicMatcher(mate_strategy="dense", indicator_strategy="set")
        with pytest.raises(ValueError):
            DynamicMatcher(mate_strategy="map", indicator_strategy="matrix")

    def test_initial_edges_checked_and_deduped(self):
        m = DynamicMatcher(4, initial_edges=[(0, 1), (1, 0), (2, 3)])
        assert m.snapshot_graph() == [(0, 1), (2, 3)]
        with pytest.raises(IndexError):
            DynamicMatcher(3, initial_edges=[(0, 5)])

    def test_hook_fires_once_per_update(self):
        seen = []
        m = DynamicMatcher(10, threshold=2, on_update=lambda d: seen.append(d.counters.updates_processed))
        for i in range(9):
            m.push("+", i, i + 1)
        m.run_until_buffer_consumed()
        assert seen == list(range(1, 10))

    def test_hooks_may_not_push(self):
        def evil(driver):
            driver.push("+", 0, 1)

        m = DynamicMatcher(4, on_update=evil)
        m.push("+", 2, 3)
        with pytest.raises(RuntimeError):
            m.run_until_buffer_consumed()


def apply_ops_to_model(model: set, ops) -> None:
    for kind, e in ops:
        if kind == "+":
            model.add(e)
        else:
            model.discard(e)


@given(ops_strategy(max_vertex=9, max_size=40), st.integers(1, 8))
@settings(max_examples=120, deadline=None)
def test_maximal_and_valid_after_every_update(ops, threshold):
    """The core safety property, cross-checked against an incrementally
    maintained edge-set model after every single consumed update."""
    model: set = set()
    consumed = list(ops)
    prefix: list = []

    def check(driver):
        i = driver.counters.updates_processed
        while len(prefix) < i:
            prefix.append(consumed[len(prefix)])
        expected = set()
        apply_ops_to_model(expected, prefix)
        snap = driver.snapshot_graph()
        assert len(snap) == len(set(snap))
        assert set(snap) == expected
        assert check_valid(expected, driver.store) is None
        assert check_maximal(expected, driver.store) is None

    m = DynamicMatcher(10, threshold=threshold, on_update=check)
    for kind, e in ops:
        m.push_update(UpdateOp(kind, e))
    m.run_until_buffer_consumed()
    apply_ops_to_model(model, ops)
    assert set(m.snapshot_graph()) == model


@given(ops_strategy(max_vertex=7, max_size=16))
@settings(max_examples=60, deadline=None)
def test_final_matching_is_brute_force_maximal(ops):
    m = DynamicMatcher(8, threshold=2)
    for kind, e in ops:
        m.push_update(UpdateOp(kind, e))
    m.run_until_buffer_consumed()
    graph = m.snapshot_graph()
    if len(graph) <= 9:
        assert frozenset(m.snapshot_matching()) in maximal_matchings(graph)


@given(ops_strategy(max_vertex=9, max_size=40), st.integers(1, 6))
@settings(max_examples=80, deadline=None)
def test_matching_ownership(ops, threshold):
    """The concatenated local matchings equal the store's mated pairs."""
    m = DynamicMatcher(10, threshold=threshold)
    for kind, e in ops:
        m.push_update(UpdateOp(kind, e))
    m.run_until_buffer_consumed()
    assert sorted(m.snapshot_matching()) == sorted(m.store.mated_pairs())


@given(ops_strategy(max_vertex=9, max_size=60))
@settings(max_examples=60, deadline=None)
def test_recursion_depth_bound(ops):
    m = DynamicMatcher(10, threshold=2)
    for kind, e in ops:
        m.push_update(UpdateOp(kind, e))
    m.run_until_buffer_consumed()
    bound = math.ceil(math.log2(max(m.max_edges, 1))) + 2 if m.max_edges else 2
    assert m.counters.recursion_depth_max <= max(bound, 2)


def test_phase_isolation():
    """While a batch is being processed below, the untouched slice of every
    enclosing level stays exactly as it was at its split."""
    m = DynamicMatcher(40, threshold=2)
    snapshots = {}

    def watch(driver):
        for idx, state in enumerate(driver._stack[:-1]):
            key = (idx, id(state))
            frozen = tuple(state.graph)
            if key in snapshots:
                assert snapshots[key] == frozen
            else:
                snapshots[key] = frozen

    m.on_update = watch
    for i in range(39):
        m.push("+", i, i + 1)
    for i in range(0, 30, 3):
        m.push("-", i, i + 1)
    m.run_until_buffer_consumed()
    assert snapshots  # batches actually happened


def test_counters_are_monotone():
    m = DynamicMatcher(16, threshold=2)
    last = [0]

    def watch(driver):
        c = driver.counters
        total = c.work_total() + c.updates_processed
        assert total >= last[0]
        last[0] = total

    m.on_update = watch
    for i in range(15):
        m.push("+", i, i + 1)
    m.run_until_buffer_consumed()


def test_noop_updates_flow_through_batches():
    # duplicate inserts and absent deletes inside one buffered run
    m = DynamicMatcher(12, threshold=2)
    ops = [("+", 0, 1), ("+", 1, 2), ("+", 2, 3), ("+", 3, 4), ("+", 4, 5),
           ("+", 0, 1), ("-", 7, 8), ("+", 2, 3), ("-", 0, 1), ("-", 0, 1)]
    for kind, u, v in ops:
        m.push(kind, u, v)
    m.run_until_buffer_consumed()
    model: set = set()
    apply_ops_to_model(model, [(k, make_edge(u, v)) for k, u, v in ops])
    assert set(m.snapshot_graph()) == model
    assert m.counters.updates_processed == len(ops)
    assert check_maximal(model, m.store) is None


def test_strategy_equivalence_smoke():
    ops = [("+", i % 7, (i * 3 + 1) % 7) for i in range(25)]
    ops += [("-", i % 7, (i * 3 + 1) % 7) for i in range(0, 25, 4)]
    outcomes = []
    for mate in ("dense", "map"):
        for ind in ("matrix", "set"):
            m = DynamicMatcher(7, mate_strategy=mate, indicator_strategy=ind, threshold=3)
            for kind, u, v in ops:
                if u != v:
                    m.push(kind, u, v)
            m.run_until_buffer_consumed()
            outcomes.append((set(m.snapshot_graph()), set(m.snapshot_matching())))
    assert all(o == outcomes[0] for o in outcomes)
