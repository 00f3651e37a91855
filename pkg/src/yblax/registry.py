"""String-addressable catalog of the shipped Yang-Baxter maps.

Each map module registers a descriptor at import time; the CLI and the
verification suites look maps up by id. A descriptor bundles everything a
generic check needs: how to sample admissible inputs, how to apply the map,
how to build the Lax pencil at a point, and which reduced Poisson structure
the map is supposed to preserve.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ConfigError


@dataclass(frozen=True)
class MapDescriptor:
    """One parametric Yang-Baxter map with its verification hooks.

    apply(x_coords, x_params, y_coords, y_params) returns (u, v); the
    parameters ride along unchanged. lax(coords, params) returns the strong
    Lax pencil at a point, or None when the map has no matrix form.
    reduced_structure(params) returns the Poisson structure on one factor,
    or None.
    """

    name: str
    coord_len: int
    param_len: int
    apply: Callable = field(repr=False)
    sample_coords: Callable = field(repr=False)
    sample_params: Callable = field(repr=False)
    lax: Optional[Callable] = field(default=None, repr=False)
    reduced_structure: Optional[Callable] = field(default=None, repr=False)


_MAPS: dict = {}


def register(descriptor: MapDescriptor) -> MapDescriptor:
    if descriptor.name in _MAPS:
        raise ValueError(f"map id {descriptor.name!r} already registered")
    _MAPS[descriptor.name] = descriptor
    return descriptor


def get_map(name: str) -> MapDescriptor:
    try:
        return _MAPS[name]
    except KeyError:
        raise ConfigError(
            f"unknown map id {name!r}; known ids: {', '.join(sorted(_MAPS))}"
        ) from None


def map_ids() -> tuple:
    return tuple(sorted(_MAPS))
