"""Exact (k,h)-core decomposition by peeling.

Three drivers share one bucket loop:

* :func:`peel_baseline` recomputes the h-degree of every affected vertex by
  a fresh bounded BFS after each deletion.
* :func:`peel_khcore` updates h-degrees incrementally by exploring only the
  subgraph induced by the peeled vertex's h-neighborhood, either with Python
  sets (``"set_based"``) or 64-bit-word bitmaps (``"bitmap"``).
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import (
    AliveMask,
    BFSScratch,
    Graph,
    HNeighborhood,
    h_bfs,
    h_degree,
    induced_local_subgraph,
)
from .reach import LocalEdges, ReachSetTable, ReachTable, prefix_mask

VARIANTS = ("set_based", "bitmap")


@dataclass
class CoreResult:
    h: int
    algorithm: str
    core: np.ndarray
    elapsed: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def k_max_h(self) -> int:
        return int(self.core.max()) if len(self.core) else 0

    @property
    def n(self) -> int:
        return len(self.core)


@dataclass
class UpdateOutcome:
    """Degree changes of the h-neighbors of a peeled vertex, in neighborhood order."""

    vertices: list[int]
    lost: list[int]
    new_hdeg: list

    def as_dict(self) -> dict[int, object]:
        return dict(zip(self.vertices, self.new_hdeg))


@dataclass
class PeelEvent:
    vertex: int
    k: int
    outcome: UpdateOutcome
    entered: list[int]


class PeelState:
    """Mutable state of one peeling run."""

    def __init__(self, g: Graph, h: int, hdeg: Sequence | None = None):
        if h < 1:
            raise ValueError("h must be >= 1")
        self.g = g
        self.h = h
        n = g.vertex_count
        self.alive = AliveMask(n)
        self.scratch = BFSScratch(n)
        self.reach = ReachTable()
        self.hdeg = list(hdeg) if hdeg is not None else initial_h_degrees(g, h, self.scratch)
        self.core = [0] * n
        self.current_min = 0

    def neighborhood(self, v: int) -> HNeighborhood:
        return h_bfs(self.g, self.alive, v, self.h, self.scratch)


def initial_h_degrees(
    g: Graph, h: int, scratch: BFSScratch | None = None, vertices: Iterable[int] | None = None
) -> list[int]:
    scratch = scratch or BFSScratch(g.vertex_count)
    alive = AliveMask(g.vertex_count)
    vs = range(g.vertex_count) if vertices is None else vertices
    return [h_degree(g, alive, v, h, scratch) for v in vs]


Updater = Callable[[PeelState, int, HNeighborhood], UpdateOutcome]


def _bucket_key(x) -> int:
    return x if isinstance(x, int) else math.floor(x)


def run_peeling(
    state: PeelState,
    update: Updater,
    trace: list[PeelEvent] | None = None,
) -> list[int]:
    """Peel every vertex of ``state`` and return the core number array.

    Buckets are lists indexed by degree and validated lazily when the cursor
    reaches them. The current round ``B`` is a heap so ties go to the
    smallest vertex id. Degrees never increase, so the cursor only moves up.
    """
    g, alive, deg, core = state.g, state.alive, state.hdeg, state.core
    n = g.vertex_count
    keys = [_bucket_key(x) for x in deg]
    buckets: list[list[int]] = [[] for _ in range((max(keys) if keys else 0) + 1)]
    for v, key in enumerate(keys):
        buckets[key].append(v)
    in_round = bytearray(n)
    k = 0
    flags = alive.flags
    while alive.alive_count:
        while True:
            pending = [v for v in buckets[k] if flags[v] and not in_round[v] and keys[v] == k]
            buckets[k] = []
            if pending:
                break
            k += 1
        state.current_min = k
        round_heap = sorted(set(pending))
        for v in round_heap:
            in_round[v] = 1
        while round_heap:
            v = heapq.heappop(round_heap)
            core[v] = k
            nbh = state.neighborhood(v)
            alive.kill(v)
            outcome = update(state, v, nbh)
            entered = []
            for u, new in zip(outcome.vertices, outcome.new_hdeg):
                deg[u] = new
                key = _bucket_key(new)
                keys[u] = key
                if in_round[u]:
                    continue
                if key <= k:
                    in_round[u] = 1
                    heapq.heappush(round_heap, u)
                    entered.append(u)
                else:
                    buckets[key].append(u)
            if trace is not None:
                trace.append(PeelEvent(v, k, outcome, entered))
    return core


def recompute_lost(
    g: Graph, alive: AliveMask, h: int, v: int, nbh: HNeighborhood, scratch: BFSScratch
) -> list[int]:
    """Degree loss of each h-neighbor by two fresh BFS runs, with and without ``v``."""
    was_alive = alive.flags[v]
    alive.flags[v] = 1
    before = [h_degree(g, alive, u, h, scratch) for u in nbh.vertices]
    alive.flags[v] = 0
    after = [h_degree(g, alive, u, h, scratch) for u in nbh.vertices]
    alive.flags[v] = was_alive
    return [b - a for b, a in zip(before, after)]


def recompute_update(state: PeelState, v: int, nbh: HNeighborhood) -> UpdateOutcome:
    """Fresh bounded BFS for every h-neighbor (``v`` already marked dead)."""
    new = [h_degree(state.g, state.alive, u, state.h, state.scratch) for u in nbh.vertices]
    lost = [state.hdeg[u] - d for u, d in zip(nbh.vertices, new)]
    return UpdateOutcome(list(nbh.vertices), lost, new)


def set_lost_counts(g: Graph, alive: AliveMask, h: int, nbh: HNeighborhood) -> list[int]:
    """Set-based ``1 + |F_u|`` for every member of ``nbh``.

    A neighbor ``u`` at distance ``s`` loses the peeled vertex plus every
    member within ``h - s`` of it that ``u`` cannot reach within ``h`` hops
    inside the induced neighborhood subgraph.
    """
    edges = induced_local_subgraph(g, alive, nbh)
    table = ReachSetTable()
    table.seed(nbh, h)
    table.dp_expand(edges, h)
    lost = []
    for i, s in enumerate(nbh.dist):
        row = table.row(i)
        c = 1
        if s < h:
            for j in range(nbh.layer_end[h - s]):
                if j not in row:
                    c += 1
        lost.append(c)
    return lost


def bitmap_lost_counts(table: ReachTable, nbh: HNeighborhood, h: int) -> np.ndarray:
    """``1 + |F_u|`` for every member, read off the active bank with word-wise AND."""
    lost = np.ones(nbh.degree, dtype=np.int64)
    act = table.active
    words = table.words_per_row
    for s in range(1, h):
        lo, hi = nbh.layer_end[s - 1], nbh.layer_end[s]
        if hi == lo:
            continue
        c = nbh.layer_end[h - s]
        hit = np.bitwise_count(act[lo:hi] & prefix_mask(c, words)).sum(axis=1, dtype=np.int64)
        lost[lo:hi] += c - hit
    return lost


def bitmap_lost(
    g: Graph, alive: AliveMask, h: int, nbh: HNeighborhood, table: ReachTable
) -> list[int]:
    edges = LocalEdges(induced_local_subgraph(g, alive, nbh))
    table.seed(nbh, h)
    table.dp_expand(edges, h)
    return bitmap_lost_counts(table, nbh, h).tolist()


def _outcome(state: PeelState, nbh: HNeighborhood, lost: list[int]) -> UpdateOutcome:
    new = [state.hdeg[u] - c for u, c in zip(nbh.vertices, lost)]
    return UpdateOutcome(list(nbh.vertices), lost, new)


def update_nbr(state: PeelState, v: int, nbh: HNeighborhood) -> UpdateOutcome:
    """Set-based incremental update of the h-degrees around peeled vertex ``v``."""
    return _outcome(state, nbh, set_lost_counts(state.g, state.alive, state.h, nbh))


def bitmap_update(state: PeelState, v: int, nbh: HNeighborhood) -> UpdateOutcome:
    return _outcome(state, nbh, bitmap_lost(state.g, state.alive, state.h, nbh, state.reach))


UPDATERS: dict[str, Updater] = {"set_based": update_nbr, "bitmap": bitmap_update}


def classic_core_numbers(g: Graph) -> np.ndarray:
    """Linear-time bin-sort k-core decomposition (the h = 1 case)."""
    n = g.vertex_count
    deg = np.diff(g.offsets).tolist()
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    md = max(deg)
    bin_start = [0] * (md + 1)
    for d in deg:
        bin_start[d] += 1
    start = 0
    for d in range(md + 1):
        num = bin_start[d]
        bin_start[d] = start
        start += num
    pos = [0] * n
    order = [0] * n
    for v in range(n):
        pos[v] = bin_start[deg[v]]
        order[pos[v]] = v
        bin_start[deg[v]] += 1
    for d in range(md, 0, -1):
        bin_start[d] = bin_start[d - 1]
    bin_start[0] = 0
    adj = g.adj
    for i in range(n):
        v = order[i]
        for u in adj[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = order[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    order[pu], order[pw] = w, u
                bin_start[du] += 1
                deg[u] -= 1
    return np.asarray(deg, dtype=np.int64)


def peel_baseline(g: Graph, h: int, trace: list[PeelEvent] | None = None) -> CoreResult:
    t0 = time.perf_counter()
    state = PeelState(g, h)
    core = run_peeling(state, recompute_update, trace)
    return CoreResult(h, "baseline", np.asarray(core, dtype=np.int64), time.perf_counter() - t0)


def peel_khcore(
    g: Graph,
    h: int,
    variant: str = "bitmap",
    trace: list[PeelEvent] | None = None,
    fast_h1: bool = True,
) -> CoreResult:
    if variant not in UPDATERS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    algo = "khcore" if variant == "set_based" else "khcore-bitmap"
    t0 = time.perf_counter()
    if h == 1 and fast_h1 and trace is None:
        core = classic_core_numbers(g)
        return CoreResult(h, algo, core, time.perf_counter() - t0)
    state = PeelState(g, h)
    core = run_peeling(state, UPDATERS[variant], trace)
    return CoreResult(h, algo, np.asarray(core, dtype=np.int64), time.perf_counter() - t0)


def extract_core(result: CoreResult, g: Graph, k: int) -> list[int]:
    """Vertices with core number at least ``k``, ascending."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return np.flatnonzero(result.core >= k).tolist()


def validate_core(g: Graph, h: int, vertices: Iterable[int], k: int) -> bool:
    """True iff every member has at least ``k`` members within ``h`` hops inside the induced subgraph."""
    members = list(vertices)
    if not members:
        return True
    mask = AliveMask(g.vertex_count)
    mask.flags = bytearray(g.vertex_count)
    for v in members:
        mask.flags[v] = 1
    mask.alive_count = len(set(members))
    scratch = BFSScratch(g.vertex_count)
    return all(h_degree(g, mask, v, h, scratch) >= k for v in members)
