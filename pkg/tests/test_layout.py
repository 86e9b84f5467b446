"""Tests for the force-directed layout engine."""

import math
import random
import statistics

import pytest

from graphlens import (
    LayoutParams,
    LayoutState,
    MissingPosition,
    build_graph,
    jitter_near,
    pin,
    position_for,
    run,
    seed_positions,
    step,
    unpin,
    with_positions,
)
from .generators import random_connected_graph


def cycle_graph(n):
    ids = [f"n{i}" for i in range(n)]
    edges = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    return build_graph(ids, edges), ids


def distance(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


class TestParams:
    def test_defaults(self):
        params = LayoutParams()
        assert params.area_width == 1000.0
        assert params.area_height == 1000.0
        assert params.initial_temperature == 100.0
        assert params.cooling == 0.95
        assert params.temperature_floor == 0.5

    def test_ideal_edge_length(self):
        params = LayoutParams()
        assert params.ideal_edge_length(4) == pytest.approx(500.0)
        assert params.ideal_edge_length(1) == pytest.approx(1000.0)

    def test_ideal_edge_length_scales_with_constant(self):
        params = LayoutParams(c_constant=2.0)
        assert params.ideal_edge_length(4) == pytest.approx(1000.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"cooling": 1.0},
            {"cooling": 0.0},
            {"area_width": 0.0},
            {"area_height": -5.0},
            {"c_constant": 0.0},
            {"min_separation": 0.0},
            {"temperature_floor": -0.1},
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            LayoutParams(**kwargs)


class TestSeeding:
    def test_positions_inside_area(self):
        params = LayoutParams()
        for i in range(100):
            x, y = position_for(f"node{i}", params)
            assert 0.0 <= x <= params.area_width
            assert 0.0 <= y <= params.area_height

    def test_position_deterministic(self):
        params = LayoutParams(seed=3)
        assert position_for("a", params) == position_for("a", params)

    def test_position_depends_on_id_and_seed(self):
        params = LayoutParams()
        assert position_for("a", params) != position_for("b", params)
        assert position_for("a", params) != position_for("a", LayoutParams(seed=1))

    def test_seed_positions_covers_all_ids(self):
        state = seed_positions(["a", "b", "c"])
        assert set(state.positions) == {"a", "b", "c"}
        assert state.temperature == 100.0
        assert state.iteration == 0
        assert state.pinned == set()

    def test_jitter_stays_near_anchor(self):
        params = LayoutParams()
        anchor = (500.0, 500.0)
        for i in range(50):
            p = jitter_near(anchor, f"n{i}", params)
            # radius is bounded by 1.5 * min(w, h) / 50
            assert distance(anchor, p) <= 1.5 * 1000.0 / 50.0 + 1e-9

    def test_jitter_deterministic_and_clamped(self):
        params = LayoutParams()
        assert jitter_near((0.0, 0.0), "x", params) == jitter_near((0.0, 0.0), "x", params)
        x, y = jitter_near((0.0, 0.0), "x", params)
        assert x >= 0.0 and y >= 0.0

    def test_with_positions_merges(self):
        state = seed_positions(["a"])
        merged = with_positions(state, {"b": (1.0, 2.0)})
        assert merged.positions["b"] == (1.0, 2.0)
        assert "b" not in state.positions


class TestPinning:
    def test_pin_then_unpin_roundtrip(self):
        state = seed_positions(["a", "b"])
        pinned = pin(state, "a")
        assert pinned.pinned == {"a"}
        assert state.pinned == set()
        assert unpin(pinned, "a") == state

    def test_pin_requires_position(self):
        state = seed_positions(["a"])
        with pytest.raises(MissingPosition):
            pin(state, "ghost")
        with pytest.raises(MissingPosition):
            unpin(state, "ghost")

    def test_pinned_node_never_moves(self):
        g, ids = cycle_graph(6)
        state = pin(seed_positions(ids), "n0")
        anchor = state.positions["n0"]
        state = run(g, ids, state, iterations=50)
        assert state.positions["n0"] == anchor

    def test_unpinned_nodes_still_move(self):
        g, ids = cycle_graph(6)
        state = pin(seed_positions(ids), "n0")
        moved = step(g, ids, state)
        assert moved.positions["n1"] != state.positions["n1"]


class TestStep:
    def test_visible_node_without_position_rejected(self):
        g, ids = cycle_graph(3)
        state = seed_positions(ids[:2])
        with pytest.raises(MissingPosition):
            step(g, ids, state)

    def test_empty_visible_only_cools(self):
        g, _ = cycle_graph(3)
        state = seed_positions([])
        after = step(g, [], state)
        assert after.positions == {}
        assert after.iteration == 1
        assert after.temperature == 100.0 * 0.95

    def test_single_node_stays_put(self):
        g = build_graph(["a"], [])
        state = seed_positions(["a"])
        after = step(g, ["a"], state)
        assert after.positions["a"] == state.positions["a"]

    def test_unconnected_nodes_repel(self):
        g = build_graph(["a", "b"], [])
        state = with_positions(
            LayoutState(temperature=10.0), {"a": (500.0, 500.0), "b": (510.0, 500.0)}
        )
        after = step(g, ["a", "b"], state)
        assert distance(after.positions["a"], after.positions["b"]) > 10.0

    def test_connected_distant_nodes_attract(self):
        g = build_graph(["a", "b"], [("a", "b")])
        state = with_positions(
            LayoutState(temperature=10.0), {"a": (100.0, 500.0), "b": (900.0, 500.0)}
        )
        after = step(g, ["a", "b"], state)
        assert distance(after.positions["a"], after.positions["b"]) < 800.0

    def test_displacement_capped_by_entry_temperature(self):
        g = build_graph(["a", "b"], [])
        state = with_positions(
            LayoutState(temperature=7.5),
            {"a": (500.0, 500.0), "b": (500.001, 500.0)},
        )
        after = step(g, ["a", "b"], state)
        for node_id in ("a", "b"):
            moved = distance(state.positions[node_id], after.positions[node_id])
            assert moved <= 7.5 + 1e-9
        # forces here are enormous, so the cap is actually reached
        assert distance(state.positions["a"], after.positions["a"]) == pytest.approx(7.5)

    def test_positions_clamped_to_area(self):
        g = build_graph(["a", "b"], [])
        state = with_positions(
            LayoutState(temperature=100.0), {"a": (1.0, 1.0), "b": (2.0, 1.0)}
        )
        for _ in range(30):
            state = step(g, ["a", "b"], state)
            for x, y in state.positions.values():
                assert 0.0 <= x <= 1000.0
                assert 0.0 <= y <= 1000.0

    def test_self_loop_produces_no_force(self):
        g = build_graph(["a"], [("a", "a")])
        state = seed_positions(["a"])
        after = step(g, ["a"], state)
        assert after.positions["a"] == state.positions["a"]

    def test_hidden_nodes_ignored(self):
        g, ids = cycle_graph(6)
        state = seed_positions(ids)
        after = step(g, ids[:3], state)
        for node_id in ids[3:]:
            assert after.positions[node_id] == state.positions[node_id]


class TestCoincident:
    def test_pair_separates_deterministically(self):
        g = build_graph(["a", "b"], [])
        start = {"a": (400.0, 400.0), "b": (400.0, 400.0)}
        first = step(g, ["a", "b"], with_positions(LayoutState(temperature=100.0), dict(start)))
        second = step(g, ["a", "b"], with_positions(LayoutState(temperature=100.0), dict(start)))
        assert first.positions == second.positions
        assert first.positions["a"] != first.positions["b"]

    def test_connected_coincident_pair_separates(self):
        g = build_graph(["a", "b"], [("a", "b")])
        start = with_positions(
            LayoutState(temperature=100.0), {"a": (10.0, 10.0), "b": (10.0, 10.0)}
        )
        after = step(g, ["a", "b"], start)
        assert after.positions["a"] != after.positions["b"]
        for x, y in after.positions.values():
            assert math.isfinite(x) and math.isfinite(y)

    def test_many_coincident_nodes_recover(self):
        ids = [f"n{i}" for i in range(50)]
        g = build_graph(ids, [])
        state = with_positions(
            LayoutState(temperature=100.0), {i: (500.0, 500.0) for i in ids}
        )
        state = run(g, ids, state, iterations=100)
        seen = set(state.positions.values())
        assert len(seen) == len(ids)
        for x, y in seen:
            assert math.isfinite(x) and math.isfinite(y)
            assert 0.0 <= x <= 1000.0 and 0.0 <= y <= 1000.0


class TestTemperature:
    def test_schedule_is_exact_geometric_decay_with_floor(self):
        g = build_graph(["a"], [])
        params = LayoutParams()
        state = seed_positions(["a"], params)
        for i in range(1, 160):
            state = step(g, ["a"], state, params)
            assert state.iteration == i
            assert state.temperature == max(100.0 * 0.95**i, 0.5)

    def test_floor_reached(self):
        g = build_graph(["a"], [])
        state = run(g, ["a"], seed_positions(["a"]), iterations=150)
        assert state.temperature == 0.5

    def test_custom_schedule(self):
        params = LayoutParams(initial_temperature=10.0, cooling=0.5, temperature_floor=2.0)
        g = build_graph(["a"], [])
        state = seed_positions(["a"], params)
        state = step(g, ["a"], state, params)
        assert state.temperature == 5.0
        state = step(g, ["a"], state, params)
        assert state.temperature == 2.5
        state = step(g, ["a"], state, params)
        assert state.temperature == 2.0


class TestRun:
    def test_zero_iterations_returns_equal_state(self):
        g, ids = cycle_graph(4)
        state = seed_positions(ids)
        assert run(g, ids, state, iterations=0) == state

    def test_negative_iterations_rejected(self):
        g, ids = cycle_graph(4)
        with pytest.raises(ValueError):
            run(g, ids, seed_positions(ids), iterations=-1)

    def test_run_equals_repeated_steps(self):
        g, ids = cycle_graph(5)
        by_run = run(g, ids, seed_positions(ids), iterations=10)
        by_steps = seed_positions(ids)
        for _ in range(10):
            by_steps = step(g, ids, by_steps)
        assert by_run == by_steps

    def test_observer_sees_every_iteration(self):
        g, ids = cycle_graph(4)
        seen = []
        run(g, ids, seed_positions(ids), iterations=5,
            observer=lambda s: seen.append(s.iteration))
        assert seen == [1, 2, 3, 4, 5]

    def test_observer_can_cancel(self):
        g, ids = cycle_graph(4)
        state = run(g, ids, seed_positions(ids), iterations=100,
                    observer=lambda s: s.iteration < 3)
        assert state.iteration == 3

    def test_deterministic_across_runs(self):
        rng = random.Random(9)
        g = random_connected_graph(rng, 30, 15)
        ids = g.node_ids()
        first = run(g, ids, seed_positions(ids), iterations=50)
        second = run(g, ids, seed_positions(ids), iterations=50)
        assert first.positions == second.positions
        assert first == second


class TestLayoutQuality:
    @staticmethod
    def ring_spread(state, ids):
        lengths = [
            distance(state.positions[ids[i]], state.positions[ids[(i + 1) % len(ids)]])
            for i in range(len(ids))
        ]
        return statistics.pstdev(lengths) / statistics.mean(lengths)

    def test_cycle_settles_into_even_ring(self):
        # An 8-cycle should relax toward evenly spaced neighbors: the
        # standard deviation of adjacent distances stays well under the
        # mean.  Measured per seed against an independent reimplementation
        # of the same forces; one seed (3) settles into a folded local
        # minimum at 0.274, which untwists given more iterations, so the
        # frozen bounds are 0.30 overall with at most one outlier over 0.20.
        g, ids = cycle_graph(8)
        spreads = []
        for seed in range(10):
            params = LayoutParams(seed=seed)
            state = run(g, ids, seed_positions(ids, params), params=params,
                        iterations=300)
            spreads.append(self.ring_spread(state, ids))
        assert all(s < 0.30 for s in spreads)
        assert sum(s < 0.20 for s in spreads) >= 9
        assert spreads[0] < 0.05

    def test_longer_run_improves_folded_seed(self):
        g, ids = cycle_graph(8)
        params = LayoutParams(seed=3)

        def spread_after(iterations):
            state = run(g, ids, seed_positions(ids, params), params=params,
                        iterations=iterations)
            return self.ring_spread(state, ids)

        assert spread_after(2000) < spread_after(300)
