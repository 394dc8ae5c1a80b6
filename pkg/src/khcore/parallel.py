"""Deterministic shared-memory parallel peeling.

Each round takes the whole minimum bucket ``B`` and peels it at once. The
members of ``B`` are ordered by vertex id and split into contiguous chunks,
one per worker. A worker deletes its vertices in id order against its own
view of the alive set, in which every lower-id member of ``B`` is already
gone. The degree losses it computes are therefore exactly those of a
sequential peel in id order, the workers never depend on each other's
results, and the summed losses are the same for any thread count.

Degree counters are shared; workers fold their per-vertex losses in under a
lock, which plays the part of an atomic decrement.
"""

from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decomp import (
    CoreResult,
    _bucket_key,
    bitmap_lost,
    initial_h_degrees,
    recompute_lost,
    set_lost_counts,
)
from .graph import AliveMask, BFSScratch, Graph, h_bfs, h_degree
from .reach import ReachTable
from .sampling import SampleState, apply_sample_loss, init_sample, sample_lost_counts

ALGORITHMS = ("baseline", "khcore", "khcore-bitmap", "sample")


@dataclass
class ParallelConfig:
    threads: int = 1
    chunk_size: int | None = None  # members of B per task; default splits B evenly

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("thread count must be >= 1")


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _chunks(items: list[int], threads: int, chunk_size: int | None) -> list[tuple[int, int]]:
    n = len(items)
    if chunk_size is None:
        chunk_size = max(1, -(-n // threads))
    return [(lo, min(n, lo + chunk_size)) for lo in range(0, n, chunk_size)]


def parallel_init_degrees(g: Graph, h: int, t: int, pool: ThreadPoolExecutor | None = None) -> list[int]:
    n = g.vertex_count
    spans = _chunks(list(range(n)), t, None)

    def work(span):
        lo, hi = span
        return initial_h_degrees(g, h, BFSScratch(n), range(lo, hi))

    if t == 1 or len(spans) <= 1:
        return initial_h_degrees(g, h)
    own = pool is None
    pool = pool or ThreadPoolExecutor(max_workers=t)
    try:
        parts = list(pool.map(work, spans))
    finally:
        if own:
            pool.shutdown()
    return [d for part in parts for d in part]


@dataclass
class _Slot:
    """Thread-local scratch for one task."""

    scratch: BFSScratch
    table: ReachTable = field(default_factory=ReachTable)


class ParallelPeeler:
    def __init__(
        self,
        g: Graph,
        h: int,
        algorithm: str = "khcore-bitmap",
        config: ParallelConfig | None = None,
        sample: SampleState | None = None,
        independence_rule=None,
    ):
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        if algorithm == "sample" and sample is None:
            raise ValueError("sampling requires a SampleState")
        self.g, self.h, self.algorithm = g, h, algorithm
        self.config = config or ParallelConfig()
        self.sample = sample
        self.rule = independence_rule or id_degree_rule
        n = g.vertex_count
        self.alive = AliveMask(n)
        self.core = [0] * n
        self.deg: list = []
        self.fixups = 0
        self._touched: set[int] = set()
        self._lock = threading.Lock()
        self._slots = [_Slot(BFSScratch(n)) for _ in range(self.config.threads)]

    def _lost(self, slot: _Slot, alive: AliveMask, v: int, nbh) -> list[int]:
        g, h = self.g, self.h
        if self.algorithm == "baseline":
            return recompute_lost(g, alive, h, v, nbh, slot.scratch)
        if self.algorithm == "khcore":
            return set_lost_counts(g, alive, h, nbh)
        if self.algorithm == "khcore-bitmap":
            return bitmap_lost(g, alive, h, nbh, slot.table)
        return sample_lost_counts(g, alive, h, v, nbh, self.sample, slot.table)

    def _peel_chunk(self, slot_id, B, lo, hi, snapshot, delta, excluded):
        slot = self._slots[slot_id]
        view = self.alive.copy()
        for v in B[:lo]:
            view.kill(v)
        local: dict[int, int] = {}
        skipped: set[int] = set()
        for v in B[lo:hi]:
            nbh = h_bfs(self.g, view, v, self.h, slot.scratch)
            view.kill(v)
            for u, c in zip(nbh.vertices, self._lost(slot, view, v, nbh)):
                if self.rule(snapshot, u, v):
                    local[u] = local.get(u, 0) + c
                else:
                    skipped.add(u)
        with self._lock:
            for u, c in local.items():
                delta[u] = delta.get(u, 0) + c
            excluded |= skipped

    def peel_round(self, B: list[int], k: int, pool: ThreadPoolExecutor | None) -> list[int]:
        """Peel all of ``B`` (ascending ids) at level ``k``; return survivors now at or below ``k``."""
        snapshot = list(self.deg)
        delta: dict[int, int] = {}
        excluded: set[int] = set()
        spans = _chunks(B, self.config.threads, self.config.chunk_size)
        t = min(self.config.threads, len(spans))

        def worker(w: int) -> None:
            for lo, hi in spans[w::t]:
                self._peel_chunk(w, B, lo, hi, snapshot, delta, excluded)

        if pool is None or t == 1:
            for w in range(t):
                worker(w)
        else:
            for f in [pool.submit(worker, w) for w in range(t)]:
                f.result()
        for v in B:
            self.core[v] = k
            self.alive.kill(v)
        for u in sorted(delta):
            if self.alive.flags[u]:
                self._apply(u, delta[u])
        for u in sorted(excluded):
            if self.alive.flags[u]:
                self._fix_up(u)
        touched = set(delta) | excluded
        self._touched |= touched
        return sorted(u for u in touched if self.alive.flags[u] and _bucket_key(self.deg[u]) <= k)

    def _apply(self, u: int, c: int) -> None:
        if self.sample is None:
            self.deg[u] -= c
        else:
            self.deg[u] = apply_sample_loss(self.sample, u, c)

    def _fix_up(self, u: int) -> None:
        """Recompute ``u``'s counter from scratch over the current alive set."""
        self.fixups += 1
        scratch = self._slots[0].scratch
        if self.sample is None:
            self.deg[u] = h_degree(self.g, self.alive, u, self.h, scratch)
            return
        s = self.sample
        nbh = h_bfs(self.g, self.alive, u, self.h, scratch)
        if s.exact[u]:
            s.est_hdeg[u] = float(nbh.degree)
        else:
            s.select[u] = sum(s.in_sample[w] for w in nbh.vertices)
            s.est_hdeg[u] = s.estimate(u)
        self.deg[u] = s.est_hdeg[u]

    def run(self) -> list[int]:
        t = self.config.threads
        pool = ThreadPoolExecutor(max_workers=t) if t > 1 else None
        try:
            if self.sample is not None:
                self.deg = list(self.sample.est_hdeg)
            else:
                self.deg = parallel_init_degrees(self.g, self.h, t, pool)
            keys = [_bucket_key(x) for x in self.deg]
            buckets: dict[int, list[int]] = {}
            for v, key in enumerate(keys):
                buckets.setdefault(key, []).append(v)
            flags = self.alive.flags
            k = min(buckets, default=0)
            while self.alive.alive_count:
                B = sorted(v for v in buckets.pop(k, []) if flags[v] and _bucket_key(self.deg[v]) == k)
                if not B:
                    k += 1
                    continue
                while B:
                    B = self.peel_round(B, k, pool)
                for v in sorted(self._touched):
                    if flags[v]:
                        key = _bucket_key(self.deg[v])
                        if key != keys[v]:
                            keys[v] = key
                            buckets.setdefault(key, []).append(v)
                self._touched.clear()
        finally:
            if pool is not None:
                pool.shutdown()
        return self.core


def id_degree_rule(snapshot: list, u: int, v: int) -> bool:
    """Update ``u`` for peeled ``v`` iff its round-start degree is >= ``v``'s or its id is larger."""
    return snapshot[u] >= snapshot[v] or u > v


def peel_parallel(
    g: Graph,
    h: int,
    algorithm: str = "khcore-bitmap",
    threads: int = 1,
    rate: float | None = None,
    seed: int = 0,
    chunk_size: int | None = None,
) -> CoreResult:
    t0 = time.perf_counter()
    sample = None
    meta: dict = {"threads": threads}
    if algorithm == "sample":
        if rate is None:
            raise ValueError("sampling requires a rate")
        sample = init_sample(g, h, rate, seed)
        meta.update(rate=rate, seed=seed)
    peeler = ParallelPeeler(g, h, algorithm, ParallelConfig(threads, chunk_size), sample)
    core = peeler.run()
    meta["fixups"] = peeler.fixups
    return CoreResult(h, algorithm, np.asarray(core, dtype=np.int64), time.perf_counter() - t0, meta)
