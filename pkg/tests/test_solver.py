"""
Tests for the fast solver, its union-find, reconstruction and heap contracts.
"""

import numpy as np
import pytest

from chainpart.instance import (
    SHAPES,
    Infeasible,
    Instance,
    augment,
    evaluate_partition,
    generate_random,
    parse_text,
)
from chainpart.oracle import expected_snapshot, full_f, naive_solve, next_scan, s_maximal_set
from chainpart.solver import NextIndex, SolverState, reconstruct, solve


def star():
    """Root r=1 (w=1, s=3) with children a=2 (s=1), b=3 (s=5), c=4 (s=2)."""
    return Instance.build(2, [0, 1, 1, 1], [1, 1, 1, 1], [3, 1, 5, 2])


def random_instances(count, n_max, seed, w_low=1):
    """Seeded instances across all shapes, optionally with zero weights."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(1, n_max + 1))
        shape = SHAPES[k % len(SHAPES)]
        mode = "tight" if k % 3 else "loose"
        inst = generate_random(n, mode, shape, w_max=6, s_max=int(rng.integers(1, 30)),
                               seed=int(rng.integers(0, 2**31)))
        if w_low == 0:
            w = [int(x) for x in rng.integers(0, 4, size=n)]
            inst = Instance(n, max(1, inst.w0 // 2), inst.parent, tuple(w), inst.s)
        yield inst


class TestExamples:
    """Hand-checked instances."""

    def test_single_vertex(self):
        sol = solve(augment(parse_text("1 5\n0 3 7\n")))
        assert sol.F == [7]
        assert sol.optimal == 7

    def test_three_path(self):
        t = augment(parse_text("3 4\n0 2 1\n1 2 5\n2 2 2\n"))
        sol = solve(t)
        assert sol.optimal == 6
        assert reconstruct(t, sol).to_lists() == [[1], [2, 3]]

    def test_star(self):
        t = augment(star())
        sol = solve(t)
        assert sol.optimal == 8
        assert reconstruct(t, sol).to_lists() == [[1, 3], [2], [4]]

    def test_single_chain_when_w0_covers_path(self):
        inst = Instance.build(10, [0, 1, 2, 3], [1, 2, 3, 4], [4, 9, 2, 7])
        assert solve(augment(inst)).optimal == 9

    def test_two_path(self):
        inst = Instance.build(2, [0, 1], [1, 1], [4, 1])
        sol = solve(augment(inst))
        assert sol.F == [4, 1]

    def test_two_path_forced_singletons(self):
        inst = Instance.build(1, [0, 1], [1, 1], [4, 1])
        assert solve(augment(inst)).F == [5, 1]

    def test_deep_path_has_no_recursion_limit(self):
        inst = generate_random(20_000, "tight", "path", seed=1)
        sol = solve(augment(inst))
        assert sol.optimal > 0


class TestNextIndex:
    """Union-find behind next()."""

    def test_fresh_sets_answer_themselves(self):
        d = NextIndex(5)
        assert [d.find(x) for x in range(5)] == [0, 1, 2, 3, 4]

    def test_absorb_keeps_target_anchor(self):
        d = NextIndex(6)
        d.absorb(2, 1)
        d.absorb(3, 2)
        d.absorb(1, 5)
        assert d.find(3) == 5
        assert d.find(2) == 5
        assert d.find(4) == 4

    def test_child_of_fresh_root_points_at_root(self):
        t = augment(parse_text("3 4\n0 2 1\n1 2 5\n2 2 2\n"))
        st = SolverState(t)
        assert st.next_of(2) == 1

    def test_matches_ancestor_scan(self):
        for inst in random_instances(30, 40, seed=5):
            t = augment(inst)
            seen = []

            def hook(v, snap):
                for e, nxt in snap.nexts.items():
                    assert nxt == next_scan(t, v, e)
                seen.append(v)

            solve(t, audit=hook)
            assert len(seen) == inst.n


class TestOracleEquivalence:
    """Fast solver against the naive dynamic program."""

    @pytest.mark.parametrize("seed", range(8))
    def test_random_instances(self, seed):
        for inst in random_instances(25, 200, seed=seed):
            t = augment(inst)
            assert solve(t).F == naive_solve(t).F

    @pytest.mark.parametrize("seed", range(4))
    def test_zero_weights(self, seed):
        for inst in random_instances(40, 30, seed=100 + seed, w_low=0):
            t = augment(inst)
            assert solve(t).F == naive_solve(t).F

    def test_equal_costs_everywhere(self):
        for seed in range(20):
            base = generate_random(25, "tight", SHAPES[seed % 5], w_max=3, seed=seed)
            inst = Instance(base.n, base.w0, base.parent, base.w, (4,) * base.n)
            t = augment(inst)
            assert solve(t).F == naive_solve(t).F

    def test_smax_regrouping_on_path(self):
        inst = Instance.build(10, [0, 1, 2], [1, 1, 1], [9, 1, 2])
        t = augment(inst)
        assert s_maximal_set(t, 1) == {1}
        assert solve(t).F == naive_solve(t).F


class TestReconstruction:
    """Rebuilt partitions are feasible and optimal."""

    @pytest.mark.parametrize("seed", range(4))
    def test_partition_matches_optimal(self, seed):
        for inst in random_instances(30, 150, seed=200 + seed):
            t = augment(inst)
            sol = solve(t)
            cost = evaluate_partition(inst, reconstruct(t, sol))
            assert not isinstance(cost, Infeasible), cost
            assert cost == sol.optimal

    def test_single_vertex(self):
        t = augment(parse_text("1 5\n0 3 7\n"))
        assert reconstruct(t, solve(t)).to_lists() == [[1]]


class TestAmortizedCounters:
    """Each vertex leaves the window and loses s-maximality at most once."""

    def test_counters(self):
        for inst in random_instances(40, 200, seed=300):
            sol = solve(augment(inst))
            sol.stats.assert_amortized()
            assert max(sol.stats.window_exits) <= 1
            assert max(sol.stats.smax_losses) <= 1

    def test_key_visits_logarithmic(self):
        inst = generate_random(4000, "tight", "uniform-attach", seed=3)
        sol = solve(augment(inst))
        assert sol.stats.max_key_visits <= 14

    def test_assert_amortized_detects_repeat(self):
        sol = solve(augment(star()))
        sol.stats.window_exits[2] = 2
        with pytest.raises(AssertionError):
            sol.stats.assert_amortized()


class TestHeapContracts:
    """Heap contents at every vertex match the definitional recomputation."""

    @pytest.mark.parametrize("seed", range(10))
    def test_snapshots(self, seed):
        for inst in random_instances(20, 60, seed=400 + seed):
            t = augment(inst)
            F = full_f(t, naive_solve(t))

            def hook(v, snap):
                want = expected_snapshot(t, v, F)
                assert snap.window == want.window, f"W({v})"
                assert snap.s_heaps == want.s_heaps, f"S at {v}"
                assert snap.f_heaps == want.f_heaps, f"H_f at {v}"
                assert snap.mf_heaps == want.mf_heaps, f"H_mf at {v}"
                assert snap.second == want.second, f"H_s({v})"
                assert snap.second_margin == want.second_margin, f"H_ms({v})"
                assert snap.nexts == want.nexts

            solve(t, audit=hook)

    def test_snapshots_with_zero_weights(self):
        for inst in random_instances(40, 25, seed=500, w_low=0):
            t = augment(inst)
            F = full_f(t, naive_solve(t))

            def hook(v, snap):
                want = expected_snapshot(t, v, F)
                assert snap.window == want.window
                assert snap.f_heaps == want.f_heaps
                assert snap.mf_heaps == want.mf_heaps

            solve(t, audit=hook)

    @pytest.mark.parametrize("shape", ["star", "caterpillar", "binary"])
    def test_second_layer_on_bushy_trees(self, shape):
        # many children leave the window while their family minimum sits in H_ms
        for seed in range(15):
            inst = generate_random(45, "tight", shape, w_max=4, s_max=20, seed=seed)
            t = augment(inst)
            F = full_f(t, naive_solve(t))

            def hook(v, snap):
                want = expected_snapshot(t, v, F)
                assert snap.second == want.second, f"H_s({v})"
                assert snap.second_margin == want.second_margin, f"H_ms({v})"
                assert snap.mf_heaps == want.mf_heaps, f"H_mf at {v}"

            assert solve(t, audit=hook).F == naive_solve(t).F
