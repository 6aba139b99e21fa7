"""
Oracle - Reference computations straight from the definitions.

Nothing here is fast. The naive solver walks every downward chain from every
vertex, the exhaustive solver enumerates every chain partition of a tiny
tree, and the set helpers recompute windows, margins, s-maximal vertices and
next() by scanning. Tests and the verify harness compare the fast solver
against these.
"""
import logging
from typing import Dict, List, Optional, Sequence, Set

from chainpart.instance import AugmentedTree, Instance
from chainpart.solver import MARGIN, WINDOW, HeapSnapshot, Solution

logger = logging.getLogger(__name__)

EXHAUSTIVE_GUARD = 12


class OracleError(ValueError):
    """Raised when an oracle is asked for more than it can do."""
    pass


def full_f(t: AugmentedTree, sol: Solution) -> List[int]:
    """F indexed by vertex id 0..size (auxiliary vertices and slot 0 hold 0)."""
    return [0] + list(sol.F) + [0] * (t.size - t.n)


def _child_f_sum(t: AugmentedTree, F: Sequence[int], u: int) -> int:
    return sum(F[c] for c in t.real_children[u])


# ----------------------------------------------------------------------
# Solvers
# ----------------------------------------------------------------------


def naive_solve(t: AugmentedTree) -> Solution:
    """
    F for every real vertex by enumerating all feasible chains from it.

    Worst case O(n^2) chains, each extended in O(1).
    """
    n, w0 = t.n, t.w0
    F = [0] * (t.size + 1)
    csum = [0] * (t.size + 1)
    choice = [0] * (n + 1)
    layer = [""] * (n + 1)
    for v in t.postorder:
        csum[v] = sum(F[c] for c in t.real_children[v])
        best = None
        # (chain end, path weight, max s, F of off-chain children above the end)
        stack = [(v, t.w[v], t.s[v], 0)]
        while stack:
            u, pw, top, acc = stack.pop()
            first = t.children[u][0]
            end_weight = pw + t.w[first]
            candidate = (top + acc + csum[u], first)
            if best is None or candidate < best[:2]:
                kind = WINDOW if first <= n and end_weight <= w0 else MARGIN
                best = (candidate[0], candidate[1], kind)
            for c in t.real_children[u]:
                if pw + t.w[c] <= w0:
                    stack.append((c, pw + t.w[c], max(top, t.s[c]), acc + csum[u] - F[c]))
        F[v], choice[v], layer[v] = best
    root = t.root
    return Solution(F=F[1 : n + 1], optimal=F[root], choice=choice[1:], layer=layer[1:])


def exhaustive_solve(inst: Instance, guard: int = EXHAUSTIVE_GUARD) -> int:
    """
    Minimum partition cost by enumerating every chain partition.

    Each vertex, taken parents-first, either opens a new chain or extends the
    chain whose open end is its parent.

    Raises:
        OracleError: If n exceeds the guard
    """
    n = inst.n
    if n > guard:
        raise OracleError(f"exhaustive_solve limited to n <= {guard}, got n={n}")
    kids: List[List[int]] = [[] for _ in range(n + 1)]
    for i, p in enumerate(inst.parent, start=1):
        if p is not None:
            kids[p].append(i)
    order = [inst.root]
    for v in order:
        order.extend(kids[v])

    chain_of = [0] * (n + 1)
    end_of: List[int] = []
    weight: List[int] = []
    top: List[int] = []
    best: List[Optional[int]] = [None]

    def place(k: int) -> None:
        if k == n:
            cost = sum(top)
            if best[0] is None or cost < best[0]:
                best[0] = cost
            return
        v = order[k]
        wv, sv = inst.w[v - 1], inst.s[v - 1]
        p = inst.parent[v - 1]
        if p is not None:
            c = chain_of[p]
            if end_of[c] == p and weight[c] + wv <= inst.w0:
                saved = (weight[c], top[c])
                end_of[c], weight[c], top[c] = v, weight[c] + wv, max(top[c], sv)
                chain_of[v] = c
                place(k + 1)
                end_of[c] = p
                weight[c], top[c] = saved
        chain_of[v] = len(end_of)
        end_of.append(v)
        weight.append(wv)
        top.append(sv)
        place(k + 1)
        end_of.pop()
        weight.pop()
        top.pop()

    place(0)
    return best[0]


# ----------------------------------------------------------------------
# Definitional sets
# ----------------------------------------------------------------------


def path_weights(t: AugmentedTree, v: int) -> Dict[int, int]:
    """Path weight from v to every window vertex of v."""
    out = {v: t.w[v]}
    stack = [v]
    while stack:
        u = stack.pop()
        for c in t.real_children[u]:
            pw = out[u] + t.w[c]
            if pw <= t.w0:
                out[c] = pw
                stack.append(c)
    return out


def window_of(t: AugmentedTree, v: int) -> Set[int]:
    """Vertices u of T_v whose chain v..u weighs at most w0."""
    return set(path_weights(t, v))


def margin_of(t: AugmentedTree, v: int) -> Set[int]:
    """Children of window vertices outside the window, leaf auxiliaries included."""
    window = window_of(t, v)
    return {c for u in window for c in t.children[u] if c not in window}


def s_maximal_set(t: AugmentedTree, v: int) -> Set[int]:
    """Vertices u of T_v with s_u above every s on the path from v to parent(u)."""
    out = {v}
    stack = [(v, t.s[v])]
    while stack:
        u, top = stack.pop()
        for c in t.real_children[u]:
            if t.s[c] > top:
                out.add(c)
            stack.append((c, max(top, t.s[c])))
    return out


def _path_down(t: AugmentedTree, v: int, j: int) -> List[int]:
    """Vertices v..j, root end first."""
    path = [j]
    while path[-1] != v:
        path.append(t.parent[path[-1]])
    path.reverse()
    return path


def next_scan(t: AugmentedTree, v: int, j: int) -> int:
    """Nearest s-maximal proper ancestor of j within T_v."""
    best = v
    for u in _path_down(t, v, t.parent[j]):
        if t.s[u] > t.s[best]:
            best = u
    return best


def brute_sum(t: AugmentedTree, v: int, i: int, F: Sequence[int]) -> int:
    """F summed over the off-chain children of the chain v..parent(i), i included."""
    chain = _path_down(t, v, t.parent[i])
    total = sum(_child_f_sum(t, F, u) for u in chain)
    return total - sum(F[u] for u in chain[1:])


def brute_cost(t: AugmentedTree, v: int, i: int, F: Sequence[int]) -> int:
    """Best cost of T_v among partitions holding the chain v..parent(i)."""
    chain = _path_down(t, v, t.parent[i])
    return brute_sum(t, v, i, F) + max(t.s[u] for u in chain)


def candidates(t: AugmentedTree, v: int) -> Set[int]:
    """Elements whose parent lies in the window of v."""
    window = window_of(t, v)
    return (window - {v}) | margin_of(t, v)


def restricted_min_holds(t: AugmentedTree, v: int, F: Sequence[int]) -> bool:
    """The minimum over all candidates equals the minimum over s-maximal ones and F[v]."""
    window = window_of(t, v)
    margin = margin_of(t, v)
    everything = (window - {v}) | margin
    restricted = ((window & s_maximal_set(t, v)) - {v}) | margin
    full = min(brute_cost(t, v, i, F) for i in everything)
    reduced = min(brute_cost(t, v, i, F) for i in restricted)
    return full == reduced == F[v]


def offset_identity_holds(t: AugmentedTree, v: int, F: Sequence[int]) -> bool:
    """cost(v, i) - cost(k, i) == sum(v, k) - F[k] for k = next(v, i) below v."""
    for i in candidates(t, v):
        k = next_scan(t, v, i)
        if k == v:
            continue
        lhs = brute_cost(t, v, i, F) - brute_cost(t, k, i, F)
        if lhs != brute_sum(t, v, k, F) - F[k]:
            logger.warning(f"Offset identity fails at v={v}, i={i}, k={k}")
            return False
    return True


def expected_snapshot(t: AugmentedTree, v: int, F: Sequence[int]) -> HeapSnapshot:
    """The heap contents the fast solver must hold right after fixing F[v]."""
    snap = HeapSnapshot(root=v)
    snap.window = path_weights(t, v)
    smax = s_maximal_set(t, v)
    for i in snap.window:
        if i == v or i not in smax:
            continue
        x = next_scan(t, v, i)
        snap.s_heaps.setdefault(x, {})[i] = t.s[i]
        snap.f_heaps.setdefault(x, {})[i] = brute_cost(t, x, i, F)
    for i in margin_of(t, v):
        x = next_scan(t, v, i)
        snap.mf_heaps.setdefault(x, {})[i] = brute_cost(t, x, i, F)
    for families, second in ((snap.f_heaps, snap.second), (snap.mf_heaps, snap.second_margin)):
        for members in families.values():
            rep = min(members, key=lambda e: (members[e], e))
            second[rep] = brute_cost(t, v, rep, F)
            for e in members:
                snap.nexts[e] = next_scan(t, v, e)
    return snap
