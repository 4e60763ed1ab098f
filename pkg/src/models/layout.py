from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Layout:
    """Node coordinates from the force-directed embedding, centred on the origin.

    ``temperatures`` and ``displacements`` hold the cap and the largest node
    move of every iteration.
    """

    ids: tuple[str, ...]
    coordinates: np.ndarray
    dims: int
    iterations: int
    k: float
    temperatures: tuple[float, ...] = field(default=())
    displacements: tuple[float, ...] = field(default=())
    approximate: bool = False

    @cached_property
    def index(self) -> dict[str, int]:
        return {node_id: position for position, node_id in enumerate(self.ids)}

    @property
    def final_temperature(self) -> float:
        return self.temperatures[-1] if self.temperatures else 0.0

    def position(self, node_id: str) -> np.ndarray:
        return self.coordinates[self.index[node_id]]
