import numpy as np
import structlog
from scipy import sparse
from scipy.spatial import cKDTree

from src.core.errors import EmptyNetworkError, LayoutError
from src.models.layout import Layout
from src.models.network import CitationNetwork

logger = structlog.get_logger()

_INITIAL_TEMPERATURE = 0.1
_MIN_DISTANCE = 1e-9
_PAIR_BUDGET = 4_000_000
_CUTOFF_FACTOR = 2.0


class LayoutService:
    """Fruchterman-Reingold embedding in a unit cube (or square), seeded and deterministic."""

    def layout_network(
        self,
        network: CitationNetwork,
        dims: int = 3,
        iterations: int = 50,
        seed: int = 0,
        approximate_above: int | None = None,
    ) -> Layout:
        """Spring embedding with linear cooling.

        Repulsion k^2/d acts between every pair of nodes (within ``2k`` only once
        the network exceeds ``approximate_above`` nodes), attraction d^2/k along
        edges. Each node moves at most the current temperature per iteration.
        """
        if network.n_nodes == 0:
            msg = "cannot lay out an empty network"
            raise EmptyNetworkError(msg)
        if dims not in (2, 3):
            msg = f"layout dimensionality must be 2 or 3, got {dims}"
            raise LayoutError(msg)
        if iterations < 1:
            msg = "layout needs at least one iteration"
            raise LayoutError(msg)

        n = network.n_nodes
        rng = np.random.default_rng(seed)
        positions = rng.random((n, dims))
        k = (1.0 / n) ** (1.0 / dims)
        approximate = approximate_above is not None and n > approximate_above

        upper = sparse.triu(network.topology, k=1).tocoo()
        sources = upper.row.astype(np.int64)
        targets = upper.col.astype(np.int64)
        order = np.lexsort((targets, sources))
        sources, targets = sources[order], targets[order]

        temperatures: list[float] = []
        displacements: list[float] = []
        for step in range(iterations):
            temperature = _INITIAL_TEMPERATURE * (1.0 - step / iterations)
            if n == 1:
                temperatures.append(temperature)
                displacements.append(0.0)
                continue
            if approximate:
                displacement = self._repulsion_within_cutoff(positions, k)
            else:
                displacement = self._repulsion(positions, k)
            displacement += self._attraction(positions, sources, targets, k)

            lengths = np.linalg.norm(displacement, axis=1)
            scale = np.ones(n)
            capped = lengths > temperature
            scale[capped] = temperature / lengths[capped]
            moves = displacement * scale[:, None]
            positions += moves
            temperatures.append(temperature)
            displacements.append(float(np.linalg.norm(moves, axis=1).max()))

        positions -= positions.mean(axis=0)
        if not np.isfinite(positions).all():
            msg = "layout diverged to non-finite coordinates"
            raise LayoutError(msg)
        logger.info(
            "Layout computed",
            nodes=n,
            dims=dims,
            iterations=iterations,
            approximate=approximate,
            k=round(k, 6),
        )
        return Layout(
            ids=network.ids,
            coordinates=positions,
            dims=dims,
            iterations=iterations,
            k=k,
            temperatures=tuple(temperatures),
            displacements=tuple(displacements),
            approximate=approximate,
        )

    def project_2d(self, layout: Layout) -> Layout:
        """Rotate onto the two principal axes and drop the rest."""
        centred = layout.coordinates - layout.coordinates.mean(axis=0)
        _, vectors = np.linalg.eigh(centred.T @ centred)
        axes = vectors[:, ::-1][:, :2].T
        for axis in axes:
            if axis[np.argmax(np.abs(axis))] < 0:
                axis *= -1
        return Layout(
            ids=layout.ids,
            coordinates=centred @ axes.T,
            dims=2,
            iterations=layout.iterations,
            k=layout.k,
            temperatures=layout.temperatures,
            displacements=layout.displacements,
            approximate=layout.approximate,
        )

    @staticmethod
    def _repulsion(positions: np.ndarray, k: float) -> np.ndarray:
        n = positions.shape[0]
        displacement = np.zeros_like(positions)
        rows = max(1, _PAIR_BUDGET // n)
        k2 = k * k
        for start in range(0, n, rows):
            block = positions[start : start + rows]
            delta = block[:, None, :] - positions[None, :, :]
            squared = np.einsum("ijk,ijk->ij", delta, delta)
            np.maximum(squared, _MIN_DISTANCE**2, out=squared)
            displacement[start : start + rows] = np.einsum("ijk,ij->ik", delta, k2 / squared)
        return displacement

    @staticmethod
    def _repulsion_within_cutoff(positions: np.ndarray, k: float) -> np.ndarray:
        pairs = cKDTree(positions).query_pairs(r=_CUTOFF_FACTOR * k, output_type="ndarray")
        displacement = np.zeros_like(positions)
        if pairs.size == 0:
            return displacement
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        first, second = pairs[:, 0], pairs[:, 1]
        delta = positions[first] - positions[second]
        squared = np.maximum(np.einsum("ij,ij->i", delta, delta), _MIN_DISTANCE**2)
        force = delta * (k * k / squared)[:, None]
        np.add.at(displacement, first, force)
        np.subtract.at(displacement, second, force)
        return displacement

    @staticmethod
    def _attraction(
        positions: np.ndarray, sources: np.ndarray, targets: np.ndarray, k: float
    ) -> np.ndarray:
        displacement = np.zeros_like(positions)
        if sources.size == 0:
            return displacement
        delta = positions[sources] - positions[targets]
        distance = np.linalg.norm(delta, axis=1)
        force = delta * (distance / k)[:, None]
        np.subtract.at(displacement, sources, force)
        np.add.at(displacement, targets, force)
        return displacement
