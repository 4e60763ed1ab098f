from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class AccessibilityProfile:
    """kappa_h per node; isolated nodes carry 0 and are left out of every curve."""

    ids: tuple[str, ...]
    kappa: np.ndarray
    h: int
    labels: np.ndarray

    @cached_property
    def isolated(self) -> np.ndarray:
        return self.kappa == 0.0

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def community_values(self, community: int) -> np.ndarray:
        mask = (self.labels == community) & ~self.isolated
        return np.sort(self.kappa[mask])

    @cached_property
    def global_range(self) -> tuple[float, float]:
        active = self.kappa[~self.isolated]
        if active.size == 0:
            return 0.0, 0.0
        return float(active.min()), float(active.max())


@dataclass(frozen=True)
class CumulativeCurve:
    """Empirical CDF of kappa over one community."""

    community: int
    values: np.ndarray

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        counts = np.searchsorted(self.values, x, side="right")
        result = counts / self.values.size
        return float(result) if np.ndim(result) == 0 else result

    def sample(self, lower: float, upper: float, points: int) -> tuple[np.ndarray, np.ndarray]:
        grid = np.linspace(lower, upper, points)
        return grid, np.asarray(self(grid), dtype=np.float64)


@dataclass(frozen=True)
class PeripheralityRanking:
    """Communities sorted by area under their cumulative curve, most peripheral first."""

    areas: dict[int, float]
    order: tuple[int, ...]
    kappa_range: tuple[float, float]
