"""
Tests for the reference solvers and definitional helpers.
"""

import numpy as np
import pytest

from chainpart.instance import SHAPES, Instance, augment, generate_random, parse_text
from chainpart.oracle import (
    OracleError,
    brute_cost,
    exhaustive_solve,
    full_f,
    margin_of,
    naive_solve,
    next_scan,
    offset_identity_holds,
    restricted_min_holds,
    s_maximal_set,
    window_of,
)

PATH3 = "3 4\n0 2 1\n1 2 5\n2 2 2\n"


def small_instances(count, seed, n_max=10):
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(1, n_max + 1))
        yield generate_random(
            n,
            "tight" if k % 2 else "loose",
            SHAPES[k % len(SHAPES)],
            w_max=int(rng.integers(1, 6)),
            s_max=int(rng.integers(0, 12)),
            seed=int(rng.integers(0, 2**31)),
        )


class TestNaiveSolve:
    """Chain-enumerating dynamic program."""

    def test_single_vertex(self):
        sol = naive_solve(augment(parse_text("1 5\n0 3 7\n")))
        assert sol.F == [7]

    def test_three_path(self):
        assert naive_solve(augment(parse_text(PATH3))).optimal == 6

    def test_leaf_values(self):
        inst = generate_random(40, seed=8)
        t = augment(inst)
        sol = naive_solve(t)
        for leaf in (v for v in range(1, 41) if not t.real_children[v]):
            assert sol.F[leaf - 1] == inst.s[leaf - 1]

    def test_matches_exhaustive(self):
        for inst in small_instances(500, seed=1):
            assert naive_solve(augment(inst)).optimal == exhaustive_solve(inst)


class TestExhaustiveSolve:
    """Brute-force enumeration of chain partitions."""

    def test_single_vertex(self):
        assert exhaustive_solve(parse_text("1 5\n0 3 7\n")) == 7

    def test_two_path_closed_form(self):
        for s1, s2 in ((4, 1), (1, 4), (3, 3), (0, 5)):
            inst = Instance.build(100, [0, 1], [1, 1], [s1, s2])
            assert exhaustive_solve(inst) == min(s1 + s2, max(s1, s2))

    def test_star(self):
        inst = Instance.build(2, [0, 1, 1, 1], [1, 1, 1, 1], [3, 1, 5, 2])
        assert exhaustive_solve(inst) == 8

    def test_guard(self):
        inst = generate_random(13, seed=0)
        with pytest.raises(OracleError):
            exhaustive_solve(inst)


class TestDefinitionalSets:
    """Window, margin, s-maximal and next recomputation."""

    def test_window_covers_subtree_when_w0_large(self):
        inst = generate_random(30, "loose", "uniform-attach", seed=2)
        t = augment(inst)
        assert window_of(t, 1) == set(range(1, 31))

    def test_three_path_window_and_margin(self):
        t = augment(parse_text(PATH3))
        assert window_of(t, 1) == {1, 2}
        assert margin_of(t, 1) == {3}

    def test_margin_includes_aux_of_window_leaf(self):
        t = augment(parse_text(PATH3))
        assert margin_of(t, 2) == {4}

    def test_increasing_costs_all_s_maximal(self):
        inst = Instance.build(10, [0, 1, 2, 3], [1, 1, 1, 1], [1, 2, 3, 4])
        assert s_maximal_set(augment(inst), 1) == {1, 2, 3, 4}

    def test_ties_lose_to_ancestor(self):
        inst = Instance.build(10, [0, 1, 2], [1, 1, 1], [3, 3, 5])
        t = augment(inst)
        assert s_maximal_set(t, 1) == {1, 3}
        assert next_scan(t, 1, 3) == 1
        assert next_scan(t, 1, 4) == 3


class TestIdentities:
    """Restricted minimum and offset identity on oracle costs."""

    def test_brute_cost_of_chain_end(self):
        t = augment(parse_text(PATH3))
        F = full_f(t, naive_solve(t))
        # chain {1} leaves T_2 to its own optimum
        assert brute_cost(t, 1, 2, F) == 1 + F[2]

    @pytest.mark.parametrize("seed", range(5))
    def test_identities_hold(self, seed):
        rng = np.random.default_rng(seed)
        for k in range(40):
            n = int(rng.integers(1, 60))
            inst = generate_random(n, "tight", SHAPES[k % 5], w_max=5, s_max=20,
                                   seed=int(rng.integers(0, 2**31)))
            t = augment(inst)
            F = full_f(t, naive_solve(t))
            for v in range(1, n + 1):
                assert restricted_min_holds(t, v, F)
                assert offset_identity_holds(t, v, F)
