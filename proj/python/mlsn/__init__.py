"""Multilayer geo-social link prediction."""

from ._mlsn import (
    DataShapeError,
    InputError,
    MultilayerGraph,
    cross_validate,
    haversine_km,
    roc_auc,
    run_cli,
)

__all__ = [
    "DataShapeError",
    "InputError",
    "MultilayerGraph",
    "cross_validate",
    "haversine_km",
    "roc_auc",
    "run_cli",
]
