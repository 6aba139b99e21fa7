"""
LazyHeap - Addressable meldable binomial heap with lazy additive tags.

Every node carries a lazy tag that applies to its whole binomial subtree, and
every heap carries an offset that applies to all of its trees. The effective
key of an element is therefore

    stored key + tags on the path from its node to the tree root + heap offset

Linking a tree under another root subtracts the new parent's tag from the
linked root ("negative pushdown"), so no tag is ever pushed to O(log n)
children. Deleting an element swaps it up to the root, compensating each
swapped-down key for the tag it moves under.

Heaps belong to a HeapFamily, which owns the element -> node registry. All
heaps of one family share it, so meld never copies registry entries and an
element can live in at most one heap of a family at a time.
"""
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

MIN = "min"
MAX = "max"


class HeapError(Exception):
    """Raised when a heap operation violates its contract."""
    pass


class _Node:
    """Binomial tree node. Only roots keep a valid owner reference."""

    __slots__ = ("elem", "key", "tag", "parent", "children", "owner")

    def __init__(self, elem: int, key: int):
        self.elem = elem
        self.key = key
        self.tag = 0
        self.parent: Optional["_Node"] = None
        self.children: List["_Node"] = []
        self.owner: Optional["LazyHeap"] = None

    @property
    def rank(self) -> int:
        return len(self.children)


class HeapFamily:
    """
    Registry shared by a group of heaps.

    Args:
        name: Label used in log and error messages
        tiebreak: Optional per-element tie rank; equal keys favour the smaller
            rank. Defaults to the element id itself.
    """

    def __init__(self, name: str = "heap", tiebreak: Optional[Sequence[int]] = None):
        self.name = name
        self.nodes: Dict[int, _Node] = {}
        self.tiebreak = tiebreak
        self.last_visits = 0
        self.max_visits = 0

    def holds(self, elem: int) -> bool:
        """True if elem sits in some heap of this family. O(1)."""
        return elem in self.nodes

    def _record_visits(self, visits: int) -> None:
        self.last_visits = visits
        if visits > self.max_visits:
            self.max_visits = visits


class LazyHeap:
    """
    Binomial heap over integer element ids with integer keys.

    Table of costs:

        find_extreme                    O(1), cached root, zero node visits
        add_all                         O(1), heap-level offset folded into root tags on meld
        insert, meld, key_value         O(log n)
        contains, delete                O(log n), climbs to the tree root to find the owner

    Only roots know their heap, so asking whether an element is in this
    particular heap costs a climb. HeapFamily.holds answers the cheaper
    question of whether it is in any heap of the family.
    """

    def __init__(self, order: str = MIN, family: Optional[HeapFamily] = None):
        if order not in (MIN, MAX):
            raise HeapError(f"Unknown heap order: {order!r}")
        self.order = order
        self._min = order == MIN
        self.family = family if family is not None else HeapFamily()
        self.roots: List[Optional[_Node]] = []
        self.offset = 0
        self.count = 0
        self._top: Optional[_Node] = None

    # ------------------------------------------------------------------
    # Ordering
    # ------------------------------------------------------------------

    def _before(self, ka: int, ea: int, kb: int, eb: int) -> bool:
        """True if (ka, ea) sorts ahead of (kb, eb) in this heap's order."""
        if ka != kb:
            return ka < kb if self._min else ka > kb
        tiebreak = self.family.tiebreak
        if tiebreak is None:
            return ea < eb
        return tiebreak[ea] < tiebreak[eb]

    def _root_before(self, a: _Node, b: _Node) -> bool:
        # Both are roots of this heap, so the heap offset cancels.
        return self._before(a.key + a.tag, a.elem, b.key + b.tag, b.elem)

    # ------------------------------------------------------------------
    # Tree plumbing
    # ------------------------------------------------------------------

    def _link(self, a: _Node, b: _Node) -> _Node:
        if self._root_before(b, a):
            a, b = b, a
        b.tag -= a.tag
        b.parent = a
        b.owner = None
        a.children.append(b)
        return a

    def _merge_roots(self, incoming: Sequence[Optional[_Node]]) -> None:
        """Binary-add a rank-indexed root list into this heap's roots."""
        mine = self.roots
        length = max(len(mine), len(incoming))
        merged: List[Optional[_Node]] = []
        carry: Optional[_Node] = None
        for r in range(length):
            trees = []
            if r < len(mine) and mine[r] is not None:
                trees.append(mine[r])
            if r < len(incoming) and incoming[r] is not None:
                trees.append(incoming[r])
            if carry is not None:
                trees.append(carry)
                carry = None
            if len(trees) == 1:
                merged.append(trees[0])
            elif len(trees) == 2:
                merged.append(None)
                carry = self._link(trees[0], trees[1])
            elif len(trees) == 3:
                merged.append(trees[2])
                carry = self._link(trees[0], trees[1])
            else:
                merged.append(None)
        if carry is not None:
            merged.append(carry)
        while merged and merged[-1] is None:
            merged.pop()
        for root in merged:
            if root is not None:
                root.owner = self
                root.parent = None
        self.roots = merged

    def _rescan_top(self) -> None:
        top = None
        for root in self.roots:
            if root is not None and (top is None or self._root_before(root, top)):
                top = root
        self._top = top

    def _climb(self, node: _Node) -> Tuple[_Node, int, int]:
        """Return (tree root, key + tags up to the root, nodes visited)."""
        total = node.key
        visits = 1
        cur = node
        while True:
            total += cur.tag
            if cur.parent is None:
                return cur, total, visits
            cur = cur.parent
            visits += 1

    def _node_of(self, elem: int) -> Optional[_Node]:
        node = self.family.nodes.get(elem)
        if node is None:
            return None
        root, _, _ = self._climb(node)
        return node if root.owner is self else None

    # ------------------------------------------------------------------
    # Public operations
    # ------------------------------------------------------------------

    def insert(self, elem: int, key: int) -> None:
        """
        Insert elem with effective key `key`.

        Raises:
            HeapError: If elem is already registered in this heap's family
        """
        if elem in self.family.nodes:
            raise HeapError(f"{self.family.name}: element {elem} already present")
        node = _Node(elem, key - self.offset)
        self.family.nodes[elem] = node
        if self._top is None or self._root_before(node, self._top):
            self._top = node
        self._merge_roots([node])
        self.count += 1

    def find_extreme(self) -> Optional[int]:
        """Element with the minimal (maximal) key, or None if empty."""
        self.family.last_visits = 0
        return self._top.elem if self._top is not None else None

    def key_value(self, elem: int) -> int:
        """
        Effective key of elem, by climbing to its tree root.

        Raises:
            HeapError: If elem is not in this heap
        """
        node = self.family.nodes.get(elem)
        if node is None:
            raise HeapError(f"{self.family.name}: element {elem} not present")
        root, total, visits = self._climb(node)
        if root.owner is not self:
            raise HeapError(f"{self.family.name}: element {elem} not in this heap")
        self.family._record_visits(visits)
        return total + self.offset

    def add_all(self, delta: int) -> None:
        """Shift every effective key by delta."""
        self.offset += delta

    def meld(self, other: "LazyHeap") -> None:
        """
        Absorb other into this heap; other is left empty.

        Raises:
            HeapError: If the heaps have different orders
        """
        if other is self or other.count == 0:
            return
        if other.order != self.order:
            raise HeapError(
                f"Cannot meld {other.order}-heap into {self.order}-heap"
            )
        if other.family is not self.family:
            # Standalone heaps: hand the registry entries over.
            for node in other._iter_nodes():
                if node.elem in self.family.nodes:
                    raise HeapError(f"{self.family.name}: element {node.elem} in both heaps")
                self.family.nodes[node.elem] = node
                del other.family.nodes[node.elem]
        shift = other.offset - self.offset
        for root in other.roots:
            if root is not None:
                root.tag += shift
        if other._top is not None and (
            self._top is None or self._root_before(other._top, self._top)
        ):
            self._top = other._top
        incoming = other.roots
        self.count += other.count
        other.roots = []
        other.count = 0
        other.offset = 0
        other._top = None
        self._merge_roots(incoming)

    def delete(self, elem: int) -> None:
        """Remove elem if it is in this heap; otherwise do nothing."""
        node = self._node_of(elem)
        if node is None:
            return
        nodes = self.family.nodes
        # Push the element up as if its key were -inf (+inf for max order).
        while node.parent is not None:
            up = node.parent
            moved = up.elem
            node.elem = moved
            node.key = up.key - node.tag
            nodes[moved] = node
            up.elem = elem
            node = up
        self.roots[node.rank] = None
        while self.roots and self.roots[-1] is None:
            self.roots.pop()
        orphans = node.children
        node.children = []
        for child in orphans:
            child.parent = None
            child.tag += node.tag
        del nodes[elem]
        self.count -= 1
        self._merge_roots(orphans)
        self._rescan_top()

    def contains(self, elem: int) -> bool:
        return self._node_of(elem) is not None

    def size(self) -> int:
        return self.count

    def __len__(self) -> int:
        return self.count

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def _iter_nodes(self) -> Iterator[_Node]:
        stack = [root for root in self.roots if root is not None]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def items(self) -> Dict[int, int]:
        """Map of element -> effective key, by full traversal."""
        result: Dict[int, int] = {}
        stack = [(root, self.offset) for root in self.roots if root is not None]
        while stack:
            node, above = stack.pop()
            here = above + node.tag
            result[node.elem] = node.key + here
            stack.extend((child, here) for child in node.children)
        return result

    def audit(self) -> Tuple[List[int], Dict[int, int]]:
        """
        Check every structural invariant by full traversal.

        Returns:
            (ranks of the trees present, element -> effective key)

        Raises:
            HeapError: On the first broken invariant
        """
        name = self.family.name
        ranks: List[int] = []
        keys: Dict[int, int] = {}
        total = 0
        for r, root in enumerate(self.roots):
            if root is None:
                continue
            if root.rank != r:
                raise HeapError(f"{name}: root in slot {r} has rank {root.rank}")
            if root.owner is not self or root.parent is not None:
                raise HeapError(f"{name}: root {root.elem} has a stale owner or parent")
            ranks.append(r)
            stack = [(root, self.offset + root.tag)]
            size = 0
            while stack:
                node, eff_tags = stack.pop()
                size += 1
                eff = node.key + eff_tags
                keys[node.elem] = eff
                if self.family.nodes.get(node.elem) is not node:
                    raise HeapError(f"{name}: registry does not point at node of {node.elem}")
                for i, child in enumerate(node.children):
                    if child.parent is not node:
                        raise HeapError(f"{name}: broken parent link under {node.elem}")
                    if child.rank != i:
                        raise HeapError(f"{name}: child {i} of {node.elem} has rank {child.rank}")
                    child_tags = eff_tags + child.tag
                    if self._before(child.key + child_tags, child.elem, eff, node.elem):
                        raise HeapError(f"{name}: heap order broken at {child.elem}")
                    stack.append((child, child_tags))
            if size != 1 << r:
                raise HeapError(f"{name}: rank-{r} tree holds {size} nodes")
            total += size
        if total != self.count:
            raise HeapError(f"{name}: count {self.count} but {total} nodes reachable")
        if keys:
            best = None
            for elem, key in keys.items():
                if best is None or self._before(key, elem, keys[best], best):
                    best = elem
            if self.find_extreme() != best:
                raise HeapError(f"{name}: cached extreme {self.find_extreme()} != {best}")
        elif self._top is not None:
            raise HeapError(f"{name}: empty heap caches an extreme")
        return ranks, keys

    def __repr__(self) -> str:
        return f"LazyHeap({self.order}, size={self.count}, top={self.find_extreme()})"


def create(order: str = MIN, family: Optional[HeapFamily] = None) -> LazyHeap:
    """Create an empty heap."""
    return LazyHeap(order, family)
