"""Brute-force reference implementations for differential testing.

Nothing here is incremental or reuses scratch state: every quantity is
recomputed from its definition with a plain BFS. Only the :class:`Graph`
type is shared with the fast paths.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .decomp import CoreResult
from .graph import Graph


def bfs_distances(g: Graph, alive: set[int] | None, src: int, limit: int | None = None) -> dict[int, int]:
    """Distances from ``src`` to every vertex reachable through ``alive`` (all vertices if None)."""
    dist = {src: 0}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if limit is not None and dist[x] >= limit:
            continue
        for w in g.adj[x]:
            if w in dist or (alive is not None and w not in alive):
                continue
            dist[w] = dist[x] + 1
            queue.append(w)
    return dist


def brute_h_neighborhood(g: Graph, alive: set[int] | None, v: int, h: int) -> set[int]:
    d = bfs_distances(g, alive, v, limit=h)
    return {u for u, s in d.items() if 0 < s <= h}


def brute_h_degree(g: Graph, alive: set[int] | None, v: int, h: int) -> int:
    return len(brute_h_neighborhood(g, alive, v, h))


def brute_core_numbers(g: Graph, h: int) -> CoreResult:
    """Naive peeling: rescan every alive vertex's h-degree after each deletion."""
    n = g.vertex_count
    alive = set(range(n))
    core = np.zeros(n, dtype=np.int64)
    k = 0
    while alive:
        degs = {v: brute_h_degree(g, alive, v, h) for v in alive}
        v = min(alive, key=lambda x: (degs[x], x))
        k = max(k, degs[v])
        core[v] = k
        alive.remove(v)
    return CoreResult(h, "oracle", core)


@dataclass
class ObservationReport:
    v: int
    h: int
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    lost_extra: dict[int, int] = field(default_factory=dict)  # u -> |F_u|

    @property
    def passed(self) -> bool:
        return not self.failures


def check_observations(g: Graph, v: int, h: int) -> ObservationReport:
    """Check the three locality facts behind incremental h-degree updates.

    For each ``u`` within ``h`` of ``v`` at distance ``s``:

    1. every h-neighbor of ``u`` outside ``N_v^{h-s} ∪ {v}`` survives the
       deletion of ``v``;
    2. ``u`` loses exactly ``{v} ∪ F_u`` where ``F_u`` are the members of
       ``N_v^{h-s}`` farther than ``h`` from ``u`` once ``v`` is gone;
    3. for ``w`` in ``N_v^{h-s}`` with ``dist_{G-v}(u, w) <= h``, that
       distance is already attained inside the subgraph induced by ``N_v^h``.
    """
    rep = ObservationReport(v, h)
    everyone = set(range(g.vertex_count))
    without_v = everyone - {v}
    dist_v = bfs_distances(g, None, v)
    nv_h = {u for u, s in dist_v.items() if 0 < s <= h}
    for u in sorted(nv_h):
        s = dist_v[u]
        prefix = {w for w, t in dist_v.items() if 0 < t <= h - s}
        before = brute_h_neighborhood(g, None, u, h)
        d_minus = bfs_distances(g, without_v, u)
        after = {w for w, t in d_minus.items() if 0 < t <= h}
        rep.checked += 1

        s_u = before - (prefix | {v})
        if not s_u <= after:
            rep.failures.append(f"obs1 u={u}: {sorted(s_u - after)} lost")

        f_u = {w for w in prefix if d_minus.get(w, h + 1) > h}
        rep.lost_extra[u] = len(f_u)
        if before - after != f_u | {v}:
            rep.failures.append(f"obs2 u={u}: lost {sorted(before - after)} expected {sorted(f_u | {v})}")
        if len(before) - len(after) != 1 + len(f_u):
            rep.failures.append(f"obs2-count u={u}")

        d_local = bfs_distances(g, nv_h, u)
        for w in prefix:
            if w == u:
                continue
            t = d_minus.get(w)
            if t is not None and t <= h and d_local.get(w) != t:
                rep.failures.append(f"thm u={u} w={w}: global {t} local {d_local.get(w)}")
    return rep


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    """Erdős–Rényi G(n, p) on dense ids."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(edges, n=n)


def random_suite(count: int = 200, seed: int = 0, n_range=(5, 60), p_range=(0.05, 0.3)):
    """Seeded random graphs used by the differential campaigns."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(*n_range)
        p = rng.uniform(*p_range)
        yield random_graph(n, p, rng)


def observation_campaign(trials: int, seed: int = 0, hs=(1, 2, 3, 4), n_range=(4, 30)) -> tuple[int, list[str]]:
    """Run :func:`check_observations` on random (graph, v, h) triples; returns (trials run, failures)."""
    rng = random.Random(seed)
    failures: list[str] = []
    for t in range(trials):
        n = rng.randint(*n_range)
        g = random_graph(n, rng.uniform(0.05, 0.4), rng)
        v = rng.randrange(n)
        h = rng.choice(hs)
        rep = check_observations(g, v, h)
        failures.extend(f"trial {t} (n={n}, v={v}, h={h}): {msg}" for msg in rep.failures)
    return trials, failures
