"""Undirected simple graphs in compressed adjacency form, plus h-hop BFS.

Vertices are dense ids ``0..n-1``. Deletions during peeling are logical:
an :class:`AliveMask` hides dead vertices from every traversal.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np


class EdgeListParseError(ValueError):
    """Raised for a malformed line in an edge-list file."""

    def __init__(self, line_no: int, line: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {line!r}")
        self.line_no = line_no


class EmptyGraphError(ValueError):
    pass


class ContractViolation(RuntimeError):
    """A precondition of a graph primitive was not met."""


@dataclass(frozen=True, eq=False)
class Graph:
    offsets: np.ndarray
    neighbors: np.ndarray
    labels: np.ndarray  # dense id -> original label

    @property
    def vertex_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def edge_count(self) -> int:
        return len(self.neighbors) // 2

    n = vertex_count
    m = edge_count

    @cached_property
    def id_map(self) -> dict[int, int]:
        """Original label -> dense id."""
        return {int(lab): i for i, lab in enumerate(self.labels)}

    @cached_property
    def adj(self) -> list[list[int]]:
        # python lists are much faster than numpy scalars in the BFS loops
        nb = self.neighbors.tolist()
        off = self.offsets.tolist()
        return [nb[off[i]:off[i + 1]] for i in range(self.vertex_count)]

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u, nbrs in enumerate(self.adj) for w in nbrs if u < w]

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: int | None = None,
        labels: Sequence[int] | None = None,
    ) -> "Graph":
        """Build from dense-id edges. Self-loops and duplicates are dropped."""
        pairs = {(min(u, w), max(u, w)) for u, w in edges if u != w}
        if n is None:
            n = 1 + max((w for _, w in pairs), default=-1)
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int64)
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("edge endpoint out of range")
            src = np.concatenate([arr[:, 0], arr[:, 1]])
            dst = np.concatenate([arr[:, 1], arr[:, 0]])
        else:
            src = dst = np.empty(0, dtype=np.int64)
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        counts = np.bincount(src, minlength=n)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int64)
        if len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        return cls(offsets, dst.astype(np.int64), labels)


@dataclass
class LoadOptions:
    comment_prefixes: tuple[str, ...] = ("#", "%")
    # Konect files carry weight/timestamp columns after the pair
    ignore_extra_columns: bool = True


def load_edge_list(source: IO | str | bytes, options: LoadOptions | None = None) -> Graph:
    """Parse a whitespace-separated edge list.

    Labels are remapped to dense ids in first-appearance order. Direction is
    ignored; self-loops and duplicate edges are dropped.
    """
    options = options or LoadOptions()
    if isinstance(source, bytes):
        source = io.StringIO(source.decode())
    elif isinstance(source, str):
        source = io.StringIO(source)
    id_map: dict[int, int] = {}
    labels: list[int] = []
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.decode() if isinstance(raw, bytes) else raw
        stripped = line.strip()
        if not stripped or stripped.startswith(options.comment_prefixes):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise EdgeListParseError(line_no, stripped, "expected two vertex labels")
        if len(tokens) > 2 and not options.ignore_extra_columns:
            raise EdgeListParseError(line_no, stripped, "unexpected extra columns")
        pair = []
        for tok in tokens[:2]:
            try:
                lab = int(tok)
            except ValueError:
                raise EdgeListParseError(line_no, stripped, f"non-integer token {tok!r}") from None
            if lab < 0:
                raise EdgeListParseError(line_no, stripped, "negative vertex label")
            dense = id_map.get(lab)
            if dense is None:
                dense = id_map[lab] = len(labels)
                labels.append(lab)
            pair.append(dense)
        edges.append((pair[0], pair[1]))
    if not labels:
        raise EmptyGraphError("edge list contains no edges")
    return Graph.from_edges(edges, n=len(labels), labels=labels)


def read_edge_list(path: str, options: LoadOptions | None = None) -> Graph:
    with open(path, "rb") as fh:
        return load_edge_list(fh, options)


class AliveMask:
    """Per-vertex alive flags with a running count."""

    __slots__ = ("flags", "alive_count")

    def __init__(self, n: int):
        self.flags = bytearray(b"\x01") * n
        self.alive_count = n

    def __contains__(self, v: int) -> bool:
        return bool(self.flags[v])

    def kill(self, v: int) -> None:
        if self.flags[v]:
            self.flags[v] = 0
            self.alive_count -= 1

    def copy(self) -> "AliveMask":
        other = AliveMask.__new__(AliveMask)
        other.flags = bytearray(self.flags)
        other.alive_count = self.alive_count
        return other

    def alive_vertices(self) -> list[int]:
        return [v for v, f in enumerate(self.flags) if f]


class BFSScratch:
    """Visit stamps reused across BFS calls; bumping the epoch clears them."""

    __slots__ = ("stamp", "epoch")

    def __init__(self, n: int):
        self.stamp = [0] * n
        self.epoch = 0

    def next_epoch(self) -> int:
        self.epoch += 1
        return self.epoch


@dataclass
class HNeighborhood:
    """Alive vertices within ``h`` hops of ``source``, in BFS order.

    ``layer_end[t]`` is the number of members at distance ``<= t``, so the
    members of the ``t``-hop prefix are ``vertices[:layer_end[t]]``.
    """

    source: int
    h: int
    vertices: list[int]
    dist: list[int]
    layer_end: list[int]
    local_index: dict[int, int] = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.vertices)

    @property
    def members(self) -> list[tuple[int, int]]:
        return list(zip(self.vertices, self.dist))

    def prefix(self, t: int) -> list[int]:
        """Members at distance at most ``t`` (empty for ``t <= 0``)."""
        if t <= 0:
            return []
        return self.vertices[: self.layer_end[min(t, self.h)]]


def h_bfs(
    g: Graph,
    alive: AliveMask,
    v: int,
    h: int,
    scratch: BFSScratch | None = None,
) -> HNeighborhood:
    if h < 1:
        raise ValueError("h must be >= 1")
    if not alive.flags[v]:
        raise ContractViolation(f"vertex {v} is not alive")
    if scratch is None:
        scratch = BFSScratch(g.vertex_count)
    adj = g.adj
    flags = alive.flags
    stamp = scratch.stamp
    ep = scratch.next_epoch()
    stamp[v] = ep
    vertices: list[int] = []
    dist: list[int] = []
    layer_end = [0]
    frontier = [v]
    for s in range(1, h + 1):
        nxt = []
        for x in frontier:
            for w in adj[x]:
                if stamp[w] != ep and flags[w]:
                    stamp[w] = ep
                    nxt.append(w)
        vertices.extend(nxt)
        dist.extend([s] * len(nxt))
        layer_end.append(len(vertices))
        if not nxt:
            layer_end.extend([len(vertices)] * (h - s))
            break
        frontier = nxt
    local_index = {u: i for i, u in enumerate(vertices)}
    return HNeighborhood(v, h, vertices, dist, layer_end, local_index)


def h_degree(
    g: Graph, alive: AliveMask, v: int, h: int, scratch: BFSScratch | None = None
) -> int:
    """Count of alive vertices within ``h`` hops of ``v``, without building the neighborhood."""
    if scratch is None:
        scratch = BFSScratch(g.vertex_count)
    adj = g.adj
    flags = alive.flags
    stamp = scratch.stamp
    ep = scratch.next_epoch()
    stamp[v] = ep
    count = 0
    frontier = [v]
    for _ in range(h):
        nxt = []
        for x in frontier:
            for w in adj[x]:
                if stamp[w] != ep and flags[w]:
                    stamp[w] = ep
                    nxt.append(w)
        if not nxt:
            break
        count += len(nxt)
        frontier = nxt
    return count


def induced_local_subgraph(
    g: Graph, alive: AliveMask, nbh: HNeighborhood
) -> list[tuple[int, int]]:
    """Alive edges among the members of ``nbh`` as local-index pairs ``(i, j)``, ``i < j``."""
    adj = g.adj
    flags = alive.flags
    local = nbh.local_index
    edges = []
    for i, u in enumerate(nbh.vertices):
        if not flags[u]:
            raise ContractViolation("neighborhood is stale: member no longer alive")
        for w in adj[u]:
            j = local.get(w)
            if j is not None and j > i:
                edges.append((i, j))
    return edges
