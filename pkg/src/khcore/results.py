"""Result files: one ``label<TAB>core`` line per vertex plus a flat summary block."""

from __future__ import annotations

from typing import IO

import numpy as np

from .decomp import CoreResult
from .graph import Graph

SUMMARY_KEYS = ("n", "m", "h", "algorithm", "rate", "seed", "threads", "k_max_h", "elapsed_ms")


def write_cores(result: CoreResult, g: Graph, out: IO[str]) -> None:
    order = np.argsort(g.labels, kind="stable")
    labels = g.labels[order].tolist()
    cores = result.core[order].tolist()
    out.writelines(f"{lab}\t{c}\n" for lab, c in zip(labels, cores))


def read_cores(src: IO[str]) -> dict[int, int]:
    cores = {}
    for line_no, line in enumerate(src, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise ValueError(f"line {line_no}: expected 'label<TAB>core', got {line!r}")
        cores[int(parts[0])] = int(parts[1])
    return cores


def summary_block(result: CoreResult, g: Graph, threads: int) -> str:
    meta = result.meta
    values = {
        "n": g.vertex_count,
        "m": g.edge_count,
        "h": result.h,
        "algorithm": result.algorithm,
        "rate": meta.get("rate", "none"),
        "seed": meta.get("seed", "none"),
        "threads": threads,
        "k_max_h": result.k_max_h,
        "elapsed_ms": f"{result.elapsed * 1000:.3f}",
    }
    return "".join(f"{k}={values[k]}\n" for k in SUMMARY_KEYS)


def parse_summary(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out
