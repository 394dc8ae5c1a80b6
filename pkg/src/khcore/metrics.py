"""Accuracy of estimated core numbers against exact ones."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomp import CoreResult, extract_core
from .graph import Graph


class MetricContractError(ValueError):
    pass


@dataclass
class PrecisionReport:
    precision: float
    vertex_count: int
    skipped_zero_core: int = 0
    top_s: int | None = None
    selected: list[int] = field(default_factory=list, repr=False)

    def to_text(self) -> str:
        lines = [
            f"precision={self.precision:.6f}",
            f"vertex_count={self.vertex_count}",
            f"skipped_zero_core={self.skipped_zero_core}",
        ]
        if self.top_s is not None:
            lines.append(f"top_s={self.top_s}")
        return "\n".join(lines) + "\n"


def _check(exact: CoreResult, est: CoreResult) -> None:
    if exact.h != est.h:
        raise MetricContractError(f"h mismatch: {exact.h} vs {est.h}")
    if exact.n != est.n:
        raise MetricContractError(f"vertex count mismatch: {exact.n} vs {est.n}")


def _precision_over(exact_core: np.ndarray, est_core: np.ndarray, idx: np.ndarray) -> tuple[float, int]:
    """Mean relative error over ``idx``; zero-core vertices score 0 on agreement, 1 otherwise."""
    if len(idx) == 0:
        return 1.0, 0
    c = exact_core[idx].astype(float)
    e = est_core[idx].astype(float)
    zero = c == 0
    err = np.empty(len(idx))
    err[~zero] = np.abs(c[~zero] - e[~zero]) / c[~zero]
    err[zero] = (e[zero] != 0).astype(float)
    return 1.0 - err.sum() / len(idx), int(zero.sum())


def precision(exact: CoreResult, est: CoreResult) -> PrecisionReport:
    _check(exact, est)
    idx = np.arange(exact.n)
    p, zeros = _precision_over(exact.core, est.core, idx)
    return PrecisionReport(p, exact.n, zeros)


def _components(g: Graph, members: list[int]) -> list[list[int]]:
    inside = set(members)
    seen: set[int] = set()
    comps = []
    for s in members:
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in g.adj[x]:
                if w in inside and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def top_s_cores(result: CoreResult, g: Graph, s: int) -> list[tuple[int, list[int]]]:
    """The ``s`` highest-ranked maximal cores as ``(k, vertices)``.

    Levels are walked from ``k_max`` downward. At each level the connected
    components of the ``k``-core that are not already covered by a
    higher-level pick are candidates, ordered by size (descending) then
    smallest vertex id.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    picked: list[tuple[int, list[int]]] = []
    covered: set[int] = set()
    levels = sorted({int(c) for c in result.core if c > 0}, reverse=True)
    for k in levels:
        comps = [c for c in _components(g, extract_core(result, g, k)) if not set(c) <= covered]
        comps.sort(key=lambda c: (-len(c), c[0]))
        for comp in comps:
            picked.append((k, comp))
            covered.update(comp)
            if len(picked) == s:
                return picked
    return picked


def top_s_precision(exact: CoreResult, est: CoreResult, g: Graph, s: int) -> PrecisionReport:
    _check(exact, est)
    selected = sorted({v for _, comp in top_s_cores(exact, g, s) for v in comp})
    p, zeros = _precision_over(exact.core, est.core, np.asarray(selected, dtype=np.int64))
    return PrecisionReport(p, len(selected), zeros, top_s=s, selected=selected)
