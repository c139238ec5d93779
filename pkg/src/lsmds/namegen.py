"""Reproducible synthetic entity-name datasets.

Names are "given surname" strings sampled uniformly without replacement from
the cross product of two pools, so every dataset is unique-by-construction
and fully determined by its seed. The bundled pools cover well over 60,000
combinations; externally generated name lists can be loaded instead, since
the file format is plain UTF-8 text, one name per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "NameDataset",
    "load_bundled_pools",
    "generate_names",
    "split_reference_holdout",
    "save_names",
    "load_names",
]

BUNDLED_POOL_IDS = ("bundled_given_v1", "bundled_surnames_v1")


@dataclass(frozen=True)
class NameDataset:
    """Unique full names plus the seed and pool identifiers that produced them."""

    names: tuple[str, ...]
    seed: int
    source_lists: tuple[str, str]

    def __post_init__(self):
        names = tuple(self.names)
        if not names or any(not n for n in names):
            raise ValueError("names must be non-empty strings")
        if len(set(names)) != len(names):
            raise ValueError("names must be unique")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)


def _read_pool(package_file: str) -> tuple[str, ...]:
    text = (
        resources.files("lsmds.data").joinpath(package_file).read_text(encoding="utf-8")
    )
    return tuple(line for line in text.splitlines() if line)


def load_bundled_pools() -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The packaged given-name and surname pools."""
    return _read_pool("given_names.txt"), _read_pool("surnames.txt")


def generate_names(n: int, seed: int, pools=None) -> NameDataset:
    """Sample ``n`` distinct "given surname" strings uniformly without
    replacement over the pool cross product.

    Deterministic per seed. Raises if the cross product cannot supply ``n``
    unique names.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if pools is None:
        given, surnames = load_bundled_pools()
        source = BUNDLED_POOL_IDS
    else:
        given, surnames = (tuple(p) for p in pools)
        source = ("custom_given", "custom_surnames")
    n_given, n_sur = len(given), len(surnames)
    if n_given * n_sur < n:
        raise ValueError(
            f"pools too small: {n_given} given names x {n_sur} surnames "
            f"= {n_given * n_sur} combinations < {n} requested"
        )
    rng = np.random.default_rng(seed)
    picks = rng.choice(n_given * n_sur, size=n, replace=False)
    names = tuple(f"{given[p // n_sur]} {surnames[p % n_sur]}" for p in picks)
    if len(set(names)) != len(names):
        raise ValueError("pools produce colliding full names; use single-token pools")
    return NameDataset(names, seed, source)


def split_reference_holdout(
    dataset: NameDataset, n_reference: int, n_holdout: int, seed: int
) -> tuple[list[str], list[str]]:
    """Disjoint deterministic (reference, holdout) split of the dataset."""
    if n_reference < 1 or n_holdout < 0:
        raise ValueError("need a positive reference size and non-negative holdout")
    if n_reference + n_holdout > len(dataset):
        raise ValueError(
            f"cannot split {len(dataset)} names into {n_reference} + {n_holdout}"
        )
    order = np.random.default_rng(seed).permutation(len(dataset))
    reference = [dataset.names[i] for i in order[:n_reference]]
    holdout = [dataset.names[i] for i in order[n_reference : n_reference + n_holdout]]
    return reference, holdout


def save_names(names, path) -> None:
    """One name per line, UTF-8."""
    Path(path).write_text("\n".join(names) + "\n", encoding="utf-8")


def load_names(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [line for line in text.splitlines() if line]
