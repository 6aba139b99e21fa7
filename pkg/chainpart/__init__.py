"""
chainpart - Minimum sum-of-max chain partitions of weighted rooted trees.
"""
from chainpart.instance import (
    AugmentedTree,
    Infeasible,
    Instance,
    InstanceError,
    Partition,
    augment,
    evaluate_partition,
    generate_random,
    parse_bytes,
    parse_text,
    validate,
)
from chainpart.lazyheap import HeapError, LazyHeap
from chainpart.solver import Solution, reconstruct, solve

__version__ = "0.1.0"

__all__ = [
    "AugmentedTree",
    "HeapError",
    "Infeasible",
    "Instance",
    "InstanceError",
    "LazyHeap",
    "Partition",
    "Solution",
    "augment",
    "evaluate_partition",
    "generate_random",
    "parse_bytes",
    "parse_text",
    "reconstruct",
    "solve",
    "validate",
]
