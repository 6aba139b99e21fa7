"""
Instance - Problem instances: a rooted tree with vertex weights w and costs s.

Covers parsing and emitting the text format, validation, seeded random
generation, augmentation with auxiliary leaf children, and evaluation of a
candidate chain partition.

Text format (UTF-8, lines starting with '#' are comments):

    n w0
    parent w s        # one record per vertex 1..n, parent 0 marks the root
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

KEY_BITS = 127
TOKEN_MAX = (1 << 63) - 1
_DIGITS = re.compile(r"[0-9]+")
_NEGATIVE = re.compile(r"-[0-9]+")

SHAPES = ("uniform-attach", "path", "star", "caterpillar", "binary")
W0_MODES = ("tight", "loose")


class InstanceError(ValueError):
    """Raised when an instance cannot be parsed or fails validation."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Instance:
    """
    A rooted tree on vertices 1..n.

    parent[i - 1], w[i - 1] and s[i - 1] describe vertex i; the root's
    parent is None.
    """

    n: int
    w0: int
    parent: Tuple[Optional[int], ...]
    w: Tuple[int, ...]
    s: Tuple[int, ...]

    @classmethod
    def build(
        cls,
        w0: int,
        parent: Sequence[Optional[int]],
        w: Sequence[int],
        s: Sequence[int],
    ) -> "Instance":
        """Build an instance from 1-based parent ids (0 or None for the root)."""
        parents = tuple(None if p in (None, 0) else int(p) for p in parent)
        return cls(len(parents), int(w0), parents, tuple(int(x) for x in w), tuple(int(x) for x in s))

    @property
    def root(self) -> int:
        return self.parent.index(None) + 1


@dataclass(frozen=True)
class Partition:
    """Chains of 1-based vertex ids, each listed root-end first."""

    chains: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, chains: Sequence[Sequence[int]]) -> "Partition":
        return cls(tuple(tuple(c) for c in chains))

    def to_lists(self) -> List[List[int]]:
        return [list(c) for c in self.chains]


@dataclass(frozen=True)
class Infeasible:
    """First partition rule broken by a candidate partition."""

    reason: str


@dataclass(frozen=True)
class AugmentedTree:
    """
    Instance plus one auxiliary child (w=0, s=0) per leaf.

    Arrays are indexed by vertex id 0..size; slot 0 is unused. Auxiliary ids
    are n+1..n+L, assigned in increasing order of their leaf.
    """

    base: Instance
    size: int
    parent: Tuple[int, ...]
    children: Tuple[Tuple[int, ...], ...]
    real_children: Tuple[Tuple[int, ...], ...]
    w: Tuple[int, ...]
    s: Tuple[int, ...]
    depth: Tuple[int, ...]
    aux: FrozenSet[int]
    aux_of: Tuple[int, ...]
    postorder: Tuple[int, ...]
    root: int

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def w0(self) -> int:
        return self.base.w0

    def subtree(self, v: int) -> List[int]:
        """Real vertices of T_v in preorder."""
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.real_children[u]))
        return out


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------


def _violations(inst: Instance, key_bits: int = KEY_BITS) -> List[Tuple[Optional[int], str]]:
    """(vertex or None, message) pairs in a stable order."""
    found: List[Tuple[Optional[int], str]] = []
    n = inst.n
    if n < 1:
        return [(None, "instance has no vertices")]
    if not (len(inst.parent) == len(inst.w) == len(inst.s) == n):
        return [(None, "parent, w and s must all have length n")]
    if inst.w0 < 0:
        found.append((None, "w0 is negative"))

    roots = [i + 1 for i, p in enumerate(inst.parent) if p is None]
    if not roots:
        found.append((None, "no root"))
    elif len(roots) > 1:
        found.append((roots[1], "multiple roots"))

    parent: List[Optional[int]] = [None] * (n + 1)
    for i in range(1, n + 1):
        p = inst.parent[i - 1]
        if p is not None and not 1 <= p <= n:
            found.append((i, f"parent {p} of vertex {i} out of range"))
        else:
            parent[i] = p
        if inst.w[i - 1] < 0 or inst.s[i - 1] < 0:
            found.append((i, f"vertex {i} has a negative weight or cost"))
        if inst.w[i - 1] > inst.w0:
            found.append((i, f"w_{i} exceeds w0"))

    state = [0] * (n + 1)
    cyclic = False
    for v in range(1, n + 1):
        walk = []
        u: Optional[int] = v
        while u is not None and state[u] == 0:
            state[u] = 1
            walk.append(u)
            u = parent[u]
        if u is not None and state[u] == 1:
            found.append((u, f"cycle at {u}"))
            cyclic = True
        for x in walk:
            state[x] = 2

    if not found and not cyclic:
        limit = (1 << key_bits) - 1
        depth = _depths(parent, n)
        if n * max(inst.s) > limit:
            found.append((None, "sum of costs overflows the key range"))
        if (max(depth[1:]) + 1) * max(inst.w) > limit:
            found.append((None, "path weight overflows the key range"))
    return found


def _depths(parent: Sequence[Optional[int]], n: int) -> List[int]:
    depth = [-1] * (n + 1)
    for v in range(1, n + 1):
        walk = []
        u: Optional[int] = v
        while u is not None and depth[u] < 0:
            walk.append(u)
            u = parent[u]
        base = -1 if u is None else depth[u]
        for x in reversed(walk):
            base += 1
            depth[x] = base
    return depth


def validate(inst: Instance, key_bits: int = KEY_BITS) -> List[str]:
    """
    Check the tree and weight invariants of an instance.

    Returns:
        Violation messages; an empty list means the instance is valid
    """
    return [message for _, message in _violations(inst, key_bits)]


# ----------------------------------------------------------------------
# Text and JSON formats
# ----------------------------------------------------------------------


def _ints(tokens: List[str], lineno: int, expected: int, what: str) -> List[int]:
    if len(tokens) != expected:
        raise InstanceError(f"malformed line: expected '{what}'", lineno)
    values = []
    for tok in tokens:
        if _NEGATIVE.fullmatch(tok):
            raise InstanceError(f"negative value {tok}", lineno)
        # int() alone would take '+3', '1_000' and non-ASCII digits
        if not _DIGITS.fullmatch(tok):
            raise InstanceError(f"malformed line: {tok!r} is not an integer", lineno)
        value = int(tok) if len(tok) <= 40 else TOKEN_MAX + 1
        if value > TOKEN_MAX:
            raise InstanceError(f"token overflow: {tok}", lineno)
        values.append(value)
    return values


def parse_text(source: Union[str, TextIO], key_bits: int = KEY_BITS) -> Instance:
    """
    Parse and validate an instance in the text format.

    Args:
        source: Instance text or a readable text stream

    Returns:
        A validated Instance

    Raises:
        InstanceError: With the offending line number where one applies
    """
    text = source if isinstance(source, str) else source.read()
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            records.append((lineno, stripped.split()))
    if not records:
        raise InstanceError("missing header 'n w0'", 1)

    header_line, header = records[0]
    n, w0 = _ints(header, header_line, 2, "n w0")
    if n < 1:
        raise InstanceError("n must be at least 1", header_line)
    body = records[1:]
    if len(body) < n:
        last = body[-1][0] if body else header_line
        raise InstanceError(f"expected {n} vertex records, found {len(body)}", last)
    if len(body) > n:
        raise InstanceError("unexpected trailing data", body[n][0])

    line_of = [header_line] + [lineno for lineno, _ in body]
    parent: List[Optional[int]] = []
    w: List[int] = []
    s: List[int] = []
    root_line = None
    for lineno, tokens in body:
        p, wi, si = _ints(tokens, lineno, 3, "parent w s")
        if p == 0:
            if root_line is not None:
                raise InstanceError("duplicate root", lineno)
            root_line = lineno
        elif p > n:
            raise InstanceError(f"parent {p} out of range 1..{n}", lineno)
        parent.append(p or None)
        w.append(wi)
        s.append(si)
    if root_line is None:
        raise InstanceError("no root", header_line)

    inst = Instance(n, w0, tuple(parent), tuple(w), tuple(s))
    problems = _violations(inst, key_bits)
    if problems:
        vertex, message = problems[0]
        raise InstanceError(message, line_of[vertex] if vertex is not None else None)
    logger.debug(f"Parsed instance with n={n}, w0={w0}")
    return inst


def parse_file(path: Union[str, Path], key_bits: int = KEY_BITS) -> Instance:
    """Read a UTF-8 instance file and parse it."""
    return parse_bytes(Path(path).read_bytes(), key_bits)


def parse_bytes(raw: bytes, key_bits: int = KEY_BITS) -> Instance:
    """
    Decode UTF-8 input and parse it.

    Raises:
        InstanceError: Also when the input is not valid UTF-8
    """
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        raise InstanceError("input is not valid UTF-8", line) from None
    return parse_text(text, key_bits)


def emit_text(inst: Instance) -> str:
    """Render an instance in the text format; inverse of parse_text."""
    lines = [f"{inst.n} {inst.w0}"]
    for p, wi, si in zip(inst.parent, inst.w, inst.s):
        lines.append(f"{p or 0} {wi} {si}")
    return "\n".join(lines) + "\n"


def to_json(inst: Instance) -> Dict[str, Any]:
    return {
        "n": inst.n,
        "w0": inst.w0,
        "parent": [p or 0 for p in inst.parent],
        "w": list(inst.w),
        "s": list(inst.s),
    }


def from_json(data: Dict[str, Any], key_bits: int = KEY_BITS) -> Instance:
    """
    Build an instance from its JSON mirror.

    Raises:
        InstanceError: If fields are missing or the instance is invalid
    """
    try:
        inst = Instance.build(data["w0"], data["parent"], data["w"], data["s"])
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceError(f"malformed instance JSON: {e}") from e
    if "n" in data and data["n"] != inst.n:
        raise InstanceError(f"n={data['n']} but {inst.n} vertex records")
    problems = validate(inst, key_bits)
    if problems:
        raise InstanceError(problems[0])
    return inst


# ----------------------------------------------------------------------
# Generation and augmentation
# ----------------------------------------------------------------------


def generate_random(
    n: int,
    w0_mode: str = "tight",
    shape: str = "uniform-attach",
    w_max: int = 10,
    s_max: int = 100,
    seed: int = 0,
) -> Instance:
    """
    Generate a valid random instance rooted at vertex 1.

    Args:
        n: Vertex count (>= 1)
        w0_mode: "tight" sets w0 = 2 * w_max, "loose" sets w0 = n * w_max
        shape: One of SHAPES
        w_max: Weights are drawn uniformly from 1..w_max
        s_max: Costs are drawn uniformly from 0..s_max
        seed: Seed for numpy's default_rng; equal arguments give equal instances

    Raises:
        InstanceError: On an unknown shape or mode, or out-of-range arguments
    """
    if n < 1:
        raise InstanceError(f"n must be at least 1, got {n}")
    if shape not in SHAPES:
        raise InstanceError(f"unknown shape {shape!r}; choose from {', '.join(SHAPES)}")
    if w0_mode not in W0_MODES:
        raise InstanceError(f"unknown w0 mode {w0_mode!r}; choose from {', '.join(W0_MODES)}")
    if w_max < 1 or s_max < 0:
        raise InstanceError("w_max must be >= 1 and s_max >= 0")

    rng = np.random.default_rng(seed)
    ids = np.arange(2, n + 1)
    if shape == "uniform-attach":
        parents = rng.integers(1, ids) if n > 1 else ids
    elif shape == "path":
        parents = ids - 1
    elif shape == "star":
        parents = np.ones_like(ids)
    elif shape == "binary":
        parents = ids // 2
    else:
        spine = (n + 1) // 2
        legs = rng.integers(1, spine + 1, size=n - spine)
        parents = np.concatenate([np.arange(1, spine), legs])

    w = rng.integers(1, w_max + 1, size=n)
    s = rng.integers(0, s_max + 1, size=n)
    w0 = 2 * w_max if w0_mode == "tight" else n * w_max
    parent = (None,) + tuple(int(p) for p in parents)
    return Instance(n, w0, parent, tuple(int(x) for x in w), tuple(int(x) for x in s))


def augment(inst: Instance) -> AugmentedTree:
    """
    Attach one auxiliary child to every leaf and precompute traversal data.

    Raises:
        InstanceError: If the instance is invalid
    """
    problems = validate(inst)
    if problems:
        raise InstanceError(problems[0])
    n = inst.n
    kids: List[List[int]] = [[] for _ in range(n + 1)]
    for i, p in enumerate(inst.parent, start=1):
        if p is not None:
            kids[p].append(i)
    leaves = [v for v in range(1, n + 1) if not kids[v]]
    size = n + len(leaves)

    parent = [0] * (size + 1)
    for i, p in enumerate(inst.parent, start=1):
        parent[i] = p or 0
    aux_of = [0] * (size + 1)
    children: List[Tuple[int, ...]] = [tuple(k) for k in kids]
    for offset, leaf in enumerate(leaves, start=1):
        a = n + offset
        parent[a] = leaf
        aux_of[leaf] = a
        children[leaf] = (a,)
    children.extend(() for _ in leaves)

    root = inst.root
    depth = [0] * (size + 1)
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for c in children[v]:
            depth[c] = depth[v] + 1
            stack.append(c)
    postorder = tuple(v for v in reversed(order) if v <= n)

    zeros = (0,) * len(leaves)
    return AugmentedTree(
        base=inst,
        size=size,
        parent=tuple(parent),
        children=tuple(children),
        real_children=tuple(tuple(k) for k in kids) + ((),) * len(leaves),
        w=(0,) + inst.w + zeros,
        s=(0,) + inst.s + zeros,
        depth=tuple(depth),
        aux=frozenset(range(n + 1, size + 1)),
        aux_of=tuple(aux_of),
        postorder=postorder,
        root=root,
    )


# ----------------------------------------------------------------------
# Partition evaluation
# ----------------------------------------------------------------------


def evaluate_partition(
    inst: Instance, p: Union[Partition, Sequence[Sequence[int]]]
) -> Union[int, Infeasible]:
    """
    Total cost of a chain partition, or the first rule it breaks.

    Chains must be non-empty, parent/child-consecutive from the root end,
    within w0 in total weight, pairwise disjoint and covering 1..n.
    """
    chains = p.chains if isinstance(p, Partition) else p
    seen = [False] * (inst.n + 1)
    total = 0
    for chain in chains:
        if not chain:
            return Infeasible("empty chain")
        for v in chain:
            if not 1 <= v <= inst.n:
                return Infeasible(f"vertex {v} out of range")
        for a, b in zip(chain, chain[1:]):
            if inst.parent[b - 1] != a:
                return Infeasible(f"{a},{b} not parent/child-consecutive")
        weight = sum(inst.w[v - 1] for v in chain)
        if weight > inst.w0:
            return Infeasible(f"chain weight {weight} > {inst.w0}")
        for v in chain:
            if seen[v]:
                return Infeasible(f"vertex {v} in more than one chain")
            seen[v] = True
        total += max(inst.s[v - 1] for v in chain)
    for v in range(1, inst.n + 1):
        if not seen[v]:
            return Infeasible(f"vertex {v} not covered")
    return total
