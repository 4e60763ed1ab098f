from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
from scipy import sparse

from src.core.config import NetworkMode
from src.core.errors import UnknownNodeError

UNREACHABLE = -1


@dataclass(frozen=True)
class NetworkReport:
    out_of_corpus_references: int = 0
    isolated_nodes: int = 0
    reciprocal_citations: int = 0


@dataclass(frozen=True)
class CitationNetwork:
    """Undirected simple graph over corpus papers.

    ``adjacency`` is a symmetric CSR matrix with an empty diagonal. Entries are
    edge weights: always 1 in citation mode, common-citer counts in co-citation mode.
    """

    ids: tuple[str, ...]
    adjacency: sparse.csr_array
    mode: NetworkMode = NetworkMode.CITATION
    report: NetworkReport = field(default_factory=NetworkReport)

    @cached_property
    def index(self) -> dict[str, int]:
        return {node_id: position for position, node_id in enumerate(self.ids)}

    @property
    def weighted(self) -> bool:
        return self.mode is NetworkMode.COCITATION

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.nnz // 2)

    def index_of(self, node_id: str) -> int:
        try:
            return self.index[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    @cached_property
    def degrees(self) -> np.ndarray:
        """Number of neighbours per node, weights ignored."""
        return np.diff(self.adjacency.indptr).astype(np.int64)

    @cached_property
    def topology(self) -> sparse.csr_array:
        """Unit-weight copy of the adjacency, used for topological distances and walks."""
        unit = self.adjacency.copy()
        unit.data = np.ones_like(unit.data, dtype=np.float64)
        return unit

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        position = self.index_of(node_id)
        start, stop = self.adjacency.indptr[position], self.adjacency.indptr[position + 1]
        return tuple(self.ids[j] for j in self.adjacency.indices[start:stop])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, weight)`` with ``i < j`` in row-major order."""
        upper = sparse.triu(self.adjacency, k=1, format="csr")
        upper.sort_indices()
        for i in range(upper.shape[0]):
            start, stop = upper.indptr[i], upper.indptr[i + 1]
            for j, weight in zip(upper.indices[start:stop], upper.data[start:stop], strict=True):
                yield i, int(j), int(weight)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph(mode=self.mode.value)
        graph.add_nodes_from(self.ids)
        for i, j, weight in self.edges():
            graph.add_edge(self.ids[i], self.ids[j], weight=weight)
        return graph


@dataclass(frozen=True)
class DistanceMatrix:
    """Shortest-path lengths from ``sources`` to every node; ``UNREACHABLE`` marks no path."""

    ids: tuple[str, ...]
    sources: tuple[int, ...]
    lengths: np.ndarray

    @cached_property
    def row_of(self) -> dict[int, int]:
        return {source: row for row, source in enumerate(self.sources)}

    def row(self, source: int) -> np.ndarray:
        return self.lengths[self.row_of[source]]
