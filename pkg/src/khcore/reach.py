"""Reachability tables over the local induced subgraph of an h-neighborhood.

Row ``i`` describes which local members are reachable from member ``i``.
Bits originate only in seeded rows, so after ``t`` hops bit ``j`` of row
``i`` is set iff ``j`` was seeded and ``dist_local(i, j) <= t``.

Two banks are kept: each hop reads the bank written by the previous hop and
ORs into the other one, so bits set during a hop never propagate further
within that same hop.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .graph import HNeighborhood

WORD_BITS = 64
_ONE = np.uint64(1)


def words_for(d: int) -> int:
    return (d + WORD_BITS - 1) // WORD_BITS


def prefix_mask(c: int, words: int) -> np.ndarray:
    """Word array with the low ``c`` bits set."""
    mask = np.zeros(words, dtype=np.uint64)
    full, rem = divmod(c, WORD_BITS)
    mask[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rem:
        mask[full] = np.uint64((1 << rem) - 1)
    return mask


class LocalEdges:
    """Local edge list pre-grouped by endpoint for the per-hop merge.

    Every undirected edge ``(i, j)`` becomes the arcs ``j -> i`` and
    ``i -> j``; arcs are sorted by target so one hop is a grouped OR.
    """

    __slots__ = ("pairs", "targets", "sources", "starts", "heads")

    def __init__(self, pairs: Sequence[tuple[int, int]]):
        self.pairs = list(pairs)
        if self.pairs:
            e = np.asarray(self.pairs, dtype=np.int64)
            tgt = np.concatenate([e[:, 0], e[:, 1]])
            src = np.concatenate([e[:, 1], e[:, 0]])
            order = np.argsort(tgt, kind="stable")
            tgt, src = tgt[order], src[order]
            first = np.flatnonzero(np.r_[True, tgt[1:] != tgt[:-1]])
        else:
            tgt = src = first = np.empty(0, dtype=np.int64)
        self.targets = tgt
        self.sources = src
        self.starts = first
        self.heads = tgt[first]

    def __len__(self) -> int:
        return len(self.pairs)


class ReachTable:
    """Double-buffered 64-bit-word reachability bitmaps.

    Storage grows to the largest neighborhood seen and is reused, so one
    table can serve a whole decomposition run.
    """

    def __init__(self, capacity: int = 0):
        self._banks = np.zeros((2, 0, 0), dtype=np.uint64)
        self.local_count = 0
        self.words_per_row = 0
        self.active_bank = 0
        self._reserve(capacity)

    def _reserve(self, d: int) -> None:
        rows, words = self._banks.shape[1:]
        need_words = words_for(d)
        if d > rows or need_words > words:
            rows = max(d, rows, 1)
            words = max(need_words, words, 1)
            self._banks = np.zeros((2, rows, words), dtype=np.uint64)

    def reset(self, d: int) -> None:
        self._reserve(d)
        self.local_count = d
        self.words_per_row = words_for(d)
        self._banks[:, :d, : self.words_per_row] = 0
        self.active_bank = 0

    def bank(self, which: int) -> np.ndarray:
        return self._banks[which, : self.local_count, : self.words_per_row]

    @property
    def active(self) -> np.ndarray:
        return self.bank(self.active_bank)

    def seed_rows(self, rows: Iterable[int] | np.ndarray) -> None:
        idx = np.asarray(rows if isinstance(rows, np.ndarray) else list(rows), dtype=np.int64)
        if idx.size == 0:
            return
        bits = np.left_shift(_ONE, (idx % WORD_BITS).astype(np.uint64))
        for b in (0, 1):
            self._banks[b, idx, idx // WORD_BITS] = bits

    def seed(self, nbh: HNeighborhood, h: int) -> None:
        """Reset to ``nbh`` and seed every member closer than ``h`` to the source."""
        self.reset(nbh.degree)
        # BFS order makes the members with dist < h a prefix
        self.seed_rows(np.arange(nbh.layer_end[h - 1], dtype=np.int64))

    def dp_expand(self, edges: LocalEdges, h: int, observer=None) -> None:
        """Run ``h`` merge hops; ``observer(hop, table)`` is called after each one."""
        p, q = 1, 0
        for hop in range(1, h + 1):
            q, p = p, 1 - p
            if len(edges):
                src_rows = self.bank(p)[edges.sources]
                merged = np.bitwise_or.reduceat(src_rows, edges.starts, axis=0)
                self.bank(q)[edges.heads] |= merged
            self.active_bank = q
            if observer is not None:
                observer(hop, self)

    def reaches(self, i: int, j: int) -> bool:
        word = self._banks[self.active_bank, i, j // WORD_BITS]
        return bool(word & (_ONE << np.uint64(j % WORD_BITS)))

    def row_words(self, i: int, bank: int | None = None) -> tuple[int, ...]:
        b = self.active_bank if bank is None else bank
        return tuple(int(w) for w in self._banks[b, i, : self.words_per_row])

    def row_values(self, bank: int | None = None) -> list[int]:
        """Each row packed into one Python int (bit ``j`` = member ``j``); handy for traces."""
        b = self.bank(self.active_bank if bank is None else bank)
        out = []
        for row in b:
            val = 0
            for k, w in enumerate(row.tolist()):
                val |= int(w) << (WORD_BITS * k)
            out.append(val)
        return out


class ReachSetTable:
    """Reference implementation with one Python set per row and bank."""

    def __init__(self) -> None:
        self.banks: list[list[set[int]]] = [[], []]
        self.active_bank = 0

    @property
    def local_count(self) -> int:
        return len(self.banks[0])

    def reset(self, d: int) -> None:
        self.banks = [[set() for _ in range(d)], [set() for _ in range(d)]]
        self.active_bank = 0

    def seed_rows(self, rows: Iterable[int]) -> None:
        for i in rows:
            self.banks[0][i] = {i}
            self.banks[1][i] = {i}

    def seed(self, nbh: HNeighborhood, h: int) -> None:
        self.reset(nbh.degree)
        self.seed_rows(i for i, s in enumerate(nbh.dist) if s < h)

    def dp_expand(self, edges: Sequence[tuple[int, int]] | LocalEdges, h: int, observer=None) -> None:
        pairs = edges.pairs if isinstance(edges, LocalEdges) else edges
        p, q = 1, 0
        for hop in range(1, h + 1):
            q, p = p, 1 - p
            wr, rd = self.banks[q], self.banks[p]
            for i, j in pairs:
                wr[i] |= rd[j]
                wr[j] |= rd[i]
            self.active_bank = q
            if observer is not None:
                observer(hop, self)

    def reaches(self, i: int, j: int) -> bool:
        return j in self.banks[self.active_bank][i]

    def row(self, i: int) -> set[int]:
        return self.banks[self.active_bank][i]
