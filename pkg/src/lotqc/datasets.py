"""Bundled dataset descriptors: lots with independently reported error counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .models import ConfigError


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    title: str
    lot_size: int
    defect_count: int

    @property
    def defect_rate(self) -> float:
        return self.defect_count / self.lot_size


def _load_registry() -> dict:
    with resources.files("lotqc").joinpath("_data/datasets.json").open("r") as fh:
        return json.load(fh)


def registry() -> dict:
    """name -> DatasetDescriptor for every bundled dataset."""
    doc = _load_registry()
    out = {}
    for row in doc["datasets"]:
        out[row["name"]] = DatasetDescriptor(
            name=row["name"],
            title=row["title"],
            lot_size=row["lot_size"],
            defect_count=row["defect_count"],
        )
    return out


def get(name: str) -> DatasetDescriptor:
    reg = registry()
    try:
        return reg[name]
    except KeyError:
        raise ConfigError(
            f"unknown dataset {name!r}; bundled: {sorted(reg)}"
        ) from None
