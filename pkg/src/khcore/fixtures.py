"""A 14-vertex running example with known (k,2)-core numbers.

Vertex labels are 1..14 (dense ids 0..13). With h = 2 the core numbers are
4 for labels 1-3, 5 for labels 4-7 and 6 for labels 8-14. Label 10 is a hub
that puts every vertex of {8..14} within two hops of the others.
"""

from __future__ import annotations

from .graph import Graph

RUNNING_EXAMPLE_EDGES = [
    (1, 2), (1, 3), (2, 4), (3, 6),
    (4, 5), (5, 6), (5, 7),
    (4, 8), (7, 8), (6, 9), (7, 9),
    (8, 10), (8, 11), (9, 10), (9, 12),
    (10, 11), (10, 12), (10, 13), (10, 14),
    (11, 12), (13, 14),
]

RUNNING_EXAMPLE_CORES_H2 = {**{v: 4 for v in (1, 2, 3)},
                            **{v: 5 for v in (4, 5, 6, 7)},
                            **{v: 6 for v in range(8, 15)}}


def running_example() -> Graph:
    edges = [(a - 1, b - 1) for a, b in RUNNING_EXAMPLE_EDGES]
    return Graph.from_edges(edges, n=14, labels=list(range(1, 15)))


def running_example_edge_list() -> str:
    return "".join(f"{a} {b}\n" for a, b in RUNNING_EXAMPLE_EDGES)
