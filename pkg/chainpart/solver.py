"""
Solver - O(n log n) chain partition dynamic program over an augmented tree.

Vertices are processed in post-order. For the current root v the solver keeps

    W(v)      max-heap of the window of v, keyed by path weight from v
    S(x)      min-heap per s-maximal anchor x, keyed s_i
    H_f(x)    min-heap per anchor x of window vertices, keyed cost(x, i)
    H_mf(x)   min-heap per anchor x of margin vertices, keyed cost(x, i)
    H_s(v)    one representative per non-empty H_f family, keyed cost(v, .)
    H_ms(v)   one representative per non-empty H_mf family, keyed cost(v, .)

and a union-find that maps every vertex to its nearest s-maximal
ancestor-or-self, which answers next(v, j) = find(parent(j)).

F[v] is the smaller of the two second-layer minima.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from chainpart.instance import AugmentedTree, Partition
from chainpart.lazyheap import MAX, MIN, HeapFamily, LazyHeap

logger = logging.getLogger(__name__)

WINDOW = "window"
MARGIN = "margin"


class NextIndex:
    """
    Union-find over vertex ids answering next().

    Each set carries an anchor: the s-maximal vertex all of its members
    report. Union by size with path compression.
    """

    def __init__(self, size: int):
        self.up = list(range(size))
        self.weight = [1] * size
        self.anchor = list(range(size))

    def _root(self, x: int) -> int:
        root = x
        up = self.up
        while up[root] != root:
            root = up[root]
        while up[x] != root:
            nxt = up[x]
            up[x] = root
            x = nxt
        return root

    def find(self, x: int) -> int:
        return self.anchor[self._root(x)]

    def absorb(self, y: int, v: int) -> None:
        """Merge y's set into v's set; the result answers v."""
        ry, rv = self._root(y), self._root(v)
        if ry == rv:
            return
        anchor = self.anchor[rv]
        if self.weight[ry] > self.weight[rv]:
            ry, rv = rv, ry
        self.up[ry] = rv
        self.weight[rv] += self.weight[ry]
        self.anchor[rv] = anchor


@dataclass
class SolverStats:
    """Per-run accounting of window exits and s-maximality losses."""

    window_exits: List[int]
    smax_losses: List[int]
    margin_iterations: int = 0
    smax_iterations: int = 0
    max_key_visits: int = 0

    @classmethod
    def for_size(cls, size: int) -> "SolverStats":
        return cls([0] * (size + 1), [0] * (size + 1))

    def assert_amortized(self) -> None:
        """Every vertex leaves the window at most once and loses s-maximality at most once."""
        for v, count in enumerate(self.window_exits):
            assert count <= 1, f"vertex {v} left the window {count} times"
        for v, count in enumerate(self.smax_losses):
            assert count <= 1, f"vertex {v} lost s-maximality {count} times"


@dataclass
class Solution:
    """
    F values and argmin choices per real vertex.

    F[i - 1] is the optimal cost of T_i. choice[i - 1] is the element whose
    cost realized F[i]: the chain through i ends at its parent.
    """

    F: List[int]
    optimal: int
    choice: List[int]
    layer: List[str]
    stats: Optional[SolverStats] = None


@dataclass
class HeapSnapshot:
    """Heap contents at the moment F[root] is fixed, as element -> key maps."""

    root: int
    window: Dict[int, int] = field(default_factory=dict)
    s_heaps: Dict[int, Dict[int, int]] = field(default_factory=dict)
    f_heaps: Dict[int, Dict[int, int]] = field(default_factory=dict)
    mf_heaps: Dict[int, Dict[int, int]] = field(default_factory=dict)
    second: Dict[int, int] = field(default_factory=dict)
    second_margin: Dict[int, int] = field(default_factory=dict)
    nexts: Dict[int, int] = field(default_factory=dict)


AuditHook = Callable[[int, HeapSnapshot], None]


class SolverState:
    """Mutable state of one solver run."""

    def __init__(self, t: AugmentedTree):
        size = t.size
        self.tree = t
        self.F = [0] * (size + 1)
        self.child_f_sum = [0] * (size + 1)
        self.choice = [0] * (size + 1)
        self.layer = [""] * (size + 1)
        self.nexts = NextIndex(size + 1)
        self.stats = SolverStats.for_size(size)

        # Deeper vertices leave a zero-weight tie first.
        w_rank = [-t.depth[v] * (size + 1) + v for v in range(size + 1)]
        self.fam_w = HeapFamily("W", tiebreak=w_rank)
        self.fam_s = HeapFamily("S")
        self.fam_f = HeapFamily("H_f")
        self.fam_mf = HeapFamily("H_mf")
        self.fam_hs = HeapFamily("H_s")
        self.fam_hms = HeapFamily("H_ms")

        self.W: List[Optional[LazyHeap]] = [None] * (size + 1)
        self.S: List[Optional[LazyHeap]] = [None] * (size + 1)
        self.Hf: List[Optional[LazyHeap]] = [None] * (size + 1)
        self.Hmf: List[Optional[LazyHeap]] = [None] * (size + 1)
        self.Hs: List[Optional[LazyHeap]] = [None] * (size + 1)
        self.Hms: List[Optional[LazyHeap]] = [None] * (size + 1)

    def next_of(self, j: int) -> int:
        """First s-maximal proper ancestor of j within the current root's subtree."""
        return self.nexts.find(self.tree.parent[j])

    # ------------------------------------------------------------------
    # Main step
    # ------------------------------------------------------------------

    def step_main(self, v: int) -> int:
        t = self.tree
        F = self.F
        s_v, w_v = t.s[v], t.w[v]
        kids = t.real_children[v]
        a = sum(F[c] for c in kids)
        self.child_f_sum[v] = a

        W_v = self.W[v] = LazyHeap(MAX, self.fam_w)
        S_v = self.S[v] = LazyHeap(MIN, self.fam_s)
        Hf_v = self.Hf[v] = LazyHeap(MIN, self.fam_f)
        Hmf_v = self.Hmf[v] = LazyHeap(MIN, self.fam_mf)
        Hs_v = self.Hs[v] = LazyHeap(MIN, self.fam_hs)
        Hms_v = self.Hms[v] = LazyHeap(MIN, self.fam_hms)

        aux = t.aux_of[v]
        if aux:
            Hmf_v.insert(aux, s_v)

        for i in kids:
            Hf_v.insert(i, a + s_v)
            S_v.insert(i, t.s[i])
            W_i = self.W[i]
            W_i.add_all(w_v)
            self.margin_sweep(i, v)
            W_v.meld(W_i)
            b = a - F[i]
            Hs_i, Hms_i = self.Hs[i], self.Hms[i]
            Hs_i.add_all(b)
            Hs_v.meld(Hs_i)
            Hms_i.add_all(b)
            Hms_v.meld(Hms_i)
            self.W[i] = self.Hs[i] = self.Hms[i] = None

        self.smax_sweep(v)
        W_v.insert(v, w_v)

        for first, second in ((Hf_v, Hs_v), (Hmf_v, Hms_v)):
            rep = first.find_extreme()
            if rep is not None:
                second.insert(rep, first.key_value(rep))

        best: Optional[Tuple[int, int, str]] = None
        for heap, layer in ((Hs_v, WINDOW), (Hms_v, MARGIN)):
            e = heap.find_extreme()
            if e is None:
                continue
            k = heap.key_value(e)
            if best is None or (k, e) < (best[0], best[1]):
                best = (k, e, layer)
        if best is None:
            raise RuntimeError(f"no chain end available at vertex {v}")
        F[v], self.choice[v], self.layer[v] = best
        logger.debug(f"F[{v}] = {F[v]} via {best[2]} element {best[1]}")
        return F[v]

    # ------------------------------------------------------------------
    # Window exits
    # ------------------------------------------------------------------

    def _family_offset(self, a: int, Hs_i: LazyHeap, Hms_i: LazyHeap) -> int:
        """Offset mapping cost(a, .) to cost(i, .), read off a representative."""
        for first, second in ((self.Hf[a], Hs_i), (self.Hmf[a], Hms_i)):
            rep = first.find_extreme()
            if rep is not None:
                return second.key_value(rep) - first.key_value(rep)
        raise RuntimeError(f"anchor {a} has no representative")

    def margin_sweep(self, i: int, v: int) -> None:
        """Move every vertex heavier than w0 from v out of W(i) into the margin."""
        W_i = self.W[i]
        w0 = self.tree.w0
        while True:
            x = W_i.find_extreme()
            if x is None or W_i.key_value(x) <= w0:
                return
            self._exit_window(x, i, v)
            W_i.delete(x)
            self.stats.margin_iterations += 1

    def _exit_window(self, x: int, i: int, v: int) -> None:
        t = self.tree
        nexts = self.nexts
        Hs_i, Hms_i = self.Hs[i], self.Hms[i]
        a = nexts.find(t.parent[x])
        f = nexts.find(x)
        smax = f == x
        ga = self._family_offset(a, Hs_i, Hms_i) if a != v else 0

        # Margin elements live in H_mf of their anchor, and a family's
        # representative only ever sits in the second layer holding that
        # family, so family-wide membership stands in for contains().
        fam_mf, fam_hms, fam_hs = self.fam_mf, self.fam_hms, self.fam_hs

        # x's children leave the margin.
        Hmf_f = self.Hmf[f]
        g_child: Optional[int] = None
        for j in t.children[x]:
            if not fam_mf.holds(j):
                continue
            g_child = Hmf_f.key_value(j)
            if fam_hms.holds(j):
                g1 = Hms_i.key_value(j) - g_child
                Hms_i.delete(j)
                Hmf_f.delete(j)
                k1 = Hmf_f.find_extreme()
                if k1 is not None:
                    Hms_i.insert(k1, Hmf_f.key_value(k1) + g1)
            else:
                Hmf_f.delete(j)

        # x leaves the window.
        if smax:
            Hf_a = self.Hf[a]
            g3 = Hf_a.key_value(x)
            if fam_hs.holds(x):
                Hs_i.delete(x)
                Hf_a.delete(x)
                k2 = Hf_a.find_extreme()
                if k2 is not None:
                    Hs_i.insert(k2, Hf_a.key_value(k2) + ga)
            else:
                Hf_a.delete(x)
            self.S[a].delete(x)
        else:
            if g_child is None:
                raise RuntimeError(f"vertex {x} has no child in the margin")
            g3 = g_child - self.child_f_sum[x] + self.F[x]

        # x joins the margin of the current root.
        Hmf_a = self.Hmf[a]
        old = Hmf_a.find_extreme()
        Hmf_a.insert(x, g3)
        if a != v and Hmf_a.find_extreme() == x:
            if old is not None:
                Hms_i.delete(old)
            Hms_i.insert(x, g3 + ga)
        self.stats.window_exits[x] += 1
        logger.debug(f"vertex {x} left the window below {v} (anchor {a})")

    # ------------------------------------------------------------------
    # s-maximality losses
    # ------------------------------------------------------------------

    def smax_sweep(self, v: int) -> None:
        """Regroup every anchor y with s_y <= s_v under v."""
        t = self.tree
        s_v = t.s[v]
        S_v, Hf_v, Hmf_v = self.S[v], self.Hf[v], self.Hmf[v]
        Hs_v, Hms_v = self.Hs[v], self.Hms[v]
        while True:
            y = S_v.find_extreme()
            if y is None or S_v.key_value(y) > s_v:
                return
            Hf_y, Hmf_y = self.Hf[y], self.Hmf[y]
            g: Optional[int] = None
            for first, second in ((Hf_y, Hs_v), (Hmf_y, Hms_v)):
                rep = first.find_extreme()
                if rep is None:
                    continue
                if g is None:
                    g = second.key_value(rep) + s_v - t.s[y] - first.key_value(rep)
                second.delete(rep)
            if g is not None:
                Hf_y.add_all(g)
                Hmf_y.add_all(g)
            Hf_v.meld(Hf_y)
            Hmf_v.meld(Hmf_y)
            S_v.meld(self.S[y])
            S_v.delete(y)
            Hf_v.delete(y)
            Hmf_v.delete(y)
            self.nexts.absorb(y, v)
            self.S[y] = self.Hf[y] = self.Hmf[y] = None
            self.stats.smax_losses[y] += 1
            self.stats.smax_iterations += 1
            logger.debug(f"vertex {y} is no longer s-maximal under {v}")

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def snapshot(self, v: int) -> HeapSnapshot:
        """Full-traversal copy of the heaps of v's subtree."""
        snap = HeapSnapshot(root=v)
        snap.window = self.W[v].items()
        snap.second = self.Hs[v].items()
        snap.second_margin = self.Hms[v].items()
        for x in self.tree.subtree(v):
            for table, target in (
                (self.S, snap.s_heaps),
                (self.Hf, snap.f_heaps),
                (self.Hmf, snap.mf_heaps),
            ):
                heap = table[x]
                if heap is not None and heap.size():
                    target[x] = heap.items()
        for heaps in (snap.f_heaps, snap.mf_heaps):
            for members in heaps.values():
                for e in members:
                    snap.nexts[e] = self.next_of(e)
        return snap


def solve(t: AugmentedTree, audit: Optional[AuditHook] = None) -> Solution:
    """
    Compute F for every real vertex of t.

    Args:
        t: Augmented tree
        audit: Optional callback receiving (v, HeapSnapshot) right after F[v]
            is fixed. Snapshots cost a full traversal; use on small trees only.

    Returns:
        Solution with F, argmin choices and run statistics
    """
    st = SolverState(t)
    for v in t.postorder:
        st.step_main(v)
        if audit is not None:
            audit(v, st.snapshot(v))
    n = t.n
    st.stats.max_key_visits = max(
        fam.max_visits for fam in (st.fam_w, st.fam_s, st.fam_f, st.fam_mf, st.fam_hs, st.fam_hms)
    )
    logger.info(
        f"Solved n={n}: optimal={st.F[t.root]}, "
        f"{st.stats.margin_iterations} window exits, {st.stats.smax_iterations} regroupings"
    )
    return Solution(
        F=st.F[1 : n + 1],
        optimal=st.F[t.root],
        choice=st.choice[1 : n + 1],
        layer=st.layer[1 : n + 1],
        stats=st.stats,
    )


def reconstruct(t: AugmentedTree, sol: Solution) -> Partition:
    """
    Rebuild an optimal partition from the per-vertex choices.

    The chain through v runs from v down to the parent of choice[v]; every
    off-chain child then heads a chain of its own.
    """
    chains: List[Tuple[int, ...]] = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        end = t.parent[sol.choice[v - 1]]
        chain = [end]
        while chain[-1] != v:
            chain.append(t.parent[chain[-1]])
        chain.reverse()
        chains.append(tuple(chain))
        for k, u in enumerate(chain):
            on_chain = chain[k + 1] if k + 1 < len(chain) else 0
            for c in t.real_children[u]:
                if c != on_chain:
                    stack.append(c)
    chains.sort()
    return Partition(tuple(chains))
