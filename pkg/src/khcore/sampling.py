"""Sampling-based approximate (k,h)-core decomposition.

A uniform sample ``S`` of ``round(r * n)`` vertices is drawn once. Each vertex
tracks ``select[v] = |N_v^h ∩ S|`` exactly under deletions, and its h-degree
is estimated as ``select[v] / rate[v]`` where ``rate[v]`` is the sampled
fraction of its initial h-neighborhood.

Vertices with no sampled h-neighbor at the start (``rate == 0``) cannot be
estimated; their h-degree is tracked exactly instead.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .decomp import (
    CoreResult,
    PeelEvent,
    PeelState,
    UpdateOutcome,
    bitmap_lost_counts,
    run_peeling,
)
from .graph import AliveMask, BFSScratch, Graph, HNeighborhood, h_bfs, induced_local_subgraph
from .reach import LocalEdges, ReachTable, prefix_mask


class SamplingParameterError(ValueError):
    pass


def sample_size(n: int, r: float) -> int:
    # round half up; python's round() is banker's rounding
    return min(n, int(np.floor(r * n + 0.5)))


def draw_sample(n: int, size: int, seed: int) -> np.ndarray:
    """Sorted ids of a uniform ``size``-subset of ``range(n)``.

    Partial Fisher-Yates driven by the raw 64-bit PCG64 stream, so the
    sample depends only on ``seed`` and not on numpy's distribution code.
    """
    bitgen = np.random.PCG64(seed)
    raw = bitgen.random_raw(size) if size else np.empty(0, dtype=np.uint64)
    perm = list(range(n))
    for i in range(size):
        j = i + int(raw[i]) % (n - i)
        perm[i], perm[j] = perm[j], perm[i]
    return np.sort(np.asarray(perm[:size], dtype=np.int64))


@dataclass
class SampleState:
    rate_param: float
    seed: int
    in_sample: bytearray
    select: list[int]
    rate: list[float]
    est_hdeg: list[float]
    exact: bytearray  # 1 where rate == 0 and the degree is tracked exactly
    init_select: list[int]
    init_hdeg: list[int]

    def estimate(self, v: int) -> float:
        # select / rate, written so that exact multiples stay exact in floating point
        return self.select[v] * self.init_hdeg[v] / self.init_select[v]

    @property
    def sample(self) -> list[int]:
        return [v for v, f in enumerate(self.in_sample) if f]


def init_sample(
    g: Graph, h: int, r: float, seed: int, hdeg: list[int] | None = None
) -> SampleState:
    if not (0.0 < r <= 1.0):
        raise SamplingParameterError(f"sampling rate must lie in (0, 1], got {r}")
    n = g.vertex_count
    in_sample = bytearray(n)
    for v in draw_sample(n, sample_size(n, r), seed).tolist():
        in_sample[v] = 1
    scratch = BFSScratch(n)
    alive = AliveMask(n)
    select, rate, est, degs = [], [], [], []
    exact = bytearray(n)
    for v in range(n):
        nbh = h_bfs(g, alive, v, h, scratch)
        d = nbh.degree if hdeg is None else hdeg[v]
        degs.append(d)
        sel = sum(in_sample[u] for u in nbh.vertices)
        select.append(sel)
        if sel:
            rate.append(sel / d)
            est.append(float(d))
        else:
            rate.append(0.0)
            est.append(float(d))
            exact[v] = 1
    return SampleState(r, seed, in_sample, select, rate, est, exact, list(select), degs)


def sample_lost_counts(
    g: Graph,
    alive: AliveMask,
    h: int,
    v: int,
    nbh: HNeighborhood,
    sample: SampleState,
    table: ReachTable,
) -> list[int]:
    """Per-neighbor loss caused by deleting ``v`` (already dead in ``alive``).

    For estimated vertices this is the number of sampled vertices leaving the
    h-neighborhood; for zero-rate vertices it is the exact h-degree loss.
    Reads ``sample`` but does not modify it.
    """
    in_s = sample.in_sample
    edges = LocalEdges(induced_local_subgraph(g, alive, nbh))
    prefix = nbh.layer_end[h - 1]
    need_exact = any(sample.exact[u] for u in nbh.vertices)
    table.reset(nbh.degree)
    if need_exact:
        table.seed_rows(np.arange(prefix, dtype=np.int64))
    else:
        table.seed_rows([j for j in range(prefix) if in_s[nbh.vertices[j]]])
    table.dp_expand(edges, h)
    act = table.active
    words = table.words_per_row

    sampled_mask = np.zeros(words, dtype=np.uint64)
    for j in range(prefix):
        if in_s[nbh.vertices[j]]:
            sampled_mask[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    cnt = np.full(nbh.degree, int(in_s[v]), dtype=np.int64)
    for s in range(1, h):
        lo, hi = nbh.layer_end[s - 1], nbh.layer_end[s]
        if hi == lo:
            continue
        target = prefix_mask(nbh.layer_end[h - s], words) & sampled_mask
        want = int(np.bitwise_count(target).sum())
        hit = np.bitwise_count(act[lo:hi] & target).sum(axis=1, dtype=np.int64)
        cnt[lo:hi] += want - hit
    if need_exact:
        exact_lost = bitmap_lost_counts(table, nbh, h)
        for i, u in enumerate(nbh.vertices):
            if sample.exact[u]:
                cnt[i] = exact_lost[i]
    return cnt.tolist()


def apply_sample_loss(sample: SampleState, u: int, c: int) -> float:
    if sample.exact[u]:
        sample.est_hdeg[u] -= c
    else:
        sample.select[u] -= c
        sample.est_hdeg[u] = sample.estimate(u)
    return sample.est_hdeg[u]


def update_nbr_sample(
    state: PeelState, sample: SampleState, v: int, nbh: HNeighborhood
) -> UpdateOutcome:
    """Update ``select`` and the degree estimates of ``v``'s h-neighbors."""
    lost = sample_lost_counts(state.g, state.alive, state.h, v, nbh, sample, state.reach)
    new = [apply_sample_loss(sample, u, c) for u, c in zip(nbh.vertices, lost)]
    return UpdateOutcome(list(nbh.vertices), lost, new)


def peel_sample(
    g: Graph,
    h: int,
    r: float,
    seed: int,
    trace: list[PeelEvent] | None = None,
) -> CoreResult:
    t0 = time.perf_counter()
    sample = init_sample(g, h, r, seed)
    state = PeelState(g, h, hdeg=list(sample.est_hdeg))
    core = run_peeling(state, lambda st, v, nbh: update_nbr_sample(st, sample, v, nbh), trace)
    return CoreResult(
        h,
        "sample",
        np.asarray(core, dtype=np.int64),
        time.perf_counter() - t0,
        meta={"rate": r, "seed": seed},
    )
