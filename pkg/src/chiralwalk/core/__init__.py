"""Lattice, coins, disorder fields and the one-step evolution."""

from chiralwalk.core.coins import CoinMatrix, Wall, make_coin, make_reflecting_coin
from chiralwalk.core.disorder import (
    CoinField,
    DisorderMode,
    ReflectingSite,
    make_field,
    sample_spatial_field,
    sample_stream,
    temporal_angles,
)
from chiralwalk.core.dispersion import band_edges, dispersion
from chiralwalk.core.evolution import evolve, step
from chiralwalk.core.lattice import (
    BoundaryConfig,
    Topology,
    WalkerState,
    initial_state,
    localized_state,
    site_labels,
)

__all__ = [
    "BoundaryConfig",
    "CoinField",
    "CoinMatrix",
    "DisorderMode",
    "ReflectingSite",
    "Topology",
    "WalkerState",
    "Wall",
    "band_edges",
    "dispersion",
    "evolve",
    "initial_state",
    "localized_state",
    "make_coin",
    "make_field",
    "make_reflecting_coin",
    "sample_spatial_field",
    "sample_stream",
    "site_labels",
    "step",
    "temporal_angles",
]
