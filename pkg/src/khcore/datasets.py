"""Locating the public benchmark graphs on disk.

Files are not downloaded by the library; ``scripts/fetch_datasets.sh``
fetches and decompresses them into ``$KHCORE_DATA_DIR`` (default ``./data``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .graph import Graph, read_edge_list


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    filename: str
    n: int
    m: int
    k_max: int  # classic (h = 1) degeneracy


DATASETS = {
    d.name: d
    for d in (
        DatasetInfo("bio-CE-CX", "bio-CE-CX.edges", 15_229, 245_952, 78),
        DatasetInfo("ca-AstroPh", "ca-AstroPh.txt", 18_771, 198_050, 56),
        DatasetInfo("douban", "douban.edges", 154_908, 327_162, 15),
        DatasetInfo("com-amazon", "com-amazon.ungraph.txt", 334_863, 925_872, 6),
    )
}


def data_dir() -> Path:
    return Path(os.environ.get("KHCORE_DATA_DIR", "data"))


def dataset_path(name: str) -> Path:
    return data_dir() / DATASETS[name].filename


def load_dataset(name: str) -> Graph:
    path = dataset_path(name)
    if not path.exists():
        raise FileNotFoundError(f"{name}: expected {path}; run scripts/fetch_datasets.sh")
    return read_edge_list(str(path))
