from collections.abc import Hashable, Mapping, Sequence

import numpy as np
import structlog
from scipy import sparse

from src.core.errors import EmptyNetworkError, PartitionError
from src.models.community import CoarseGraph, CommunityPartition
from src.models.network import CitationNetwork

logger = structlog.get_logger()

_GAIN_TOLERANCE = 1e-10


class CommunityService:
    """Multilevel modularity optimisation (local moving + aggregation) and coarse-graining."""

    def detect_communities(self, network: CitationNetwork, seed: int = 0) -> CommunityPartition:
        if network.n_nodes == 0:
            msg = "cannot detect communities in an empty network"
            raise EmptyNetworkError(msg)

        adjacency = sparse.csr_array(network.adjacency, dtype=np.float64)
        rng = np.random.default_rng(seed)
        membership = np.arange(network.n_nodes)
        graph = adjacency
        levels = 0
        while True:
            communities, moved = self._local_moving(graph, rng)
            if not moved:
                break
            membership = communities[membership]
            graph = self._aggregate(graph, communities)
            levels += 1

        labels = self._relabel_by_size(membership)
        q = self._modularity(adjacency, labels)
        partition = CommunityPartition(
            ids=network.ids, labels=labels, q=q, seed=seed, levels=levels
        )
        logger.info(
            "Communities detected",
            communities=partition.n_communities,
            modularity=round(q, 6),
            levels=levels,
            seed=seed,
        )
        return partition

    def modularity(self, network: CitationNetwork, assignment: Mapping[str, Hashable]) -> float:
        """Newman-Girvan modularity q = sum_a (e_aa - a_a^2) on edge-weight fractions."""
        missing = [node_id for node_id in network.ids if node_id not in assignment]
        if missing:
            msg = f"assignment misses {len(missing)} node(s), first {missing[0]!r}"
            raise PartitionError(msg)
        dense: dict[Hashable, int] = {}
        labels = np.fromiter(
            (dense.setdefault(assignment[node_id], len(dense)) for node_id in network.ids),
            dtype=np.int64,
            count=network.n_nodes,
        )
        return self._modularity(sparse.csr_array(network.adjacency, dtype=np.float64), labels)

    def coarse_grain(self, network: CitationNetwork, partition: CommunityPartition) -> CoarseGraph:
        if partition.ids != network.ids:
            msg = "partition does not cover the network nodes in order"
            raise PartitionError(msg)
        return self.coarse_grain_labels(network, partition.labels, partition.n_communities)

    def coarse_grain_labels(
        self, network: CitationNetwork, labels: Sequence[int | None] | np.ndarray, n_groups: int
    ) -> CoarseGraph:
        """E_ab edge counts between labelled groups; ``None``/negative labels are left out."""
        dense = np.array([-1 if label is None else int(label) for label in labels], dtype=np.int64)
        kept = np.flatnonzero(dense >= 0)
        membership = sparse.csr_array(
            (np.ones(kept.size, dtype=np.int64), (kept, dense[kept])),
            shape=(network.n_nodes, n_groups),
        )
        topology = sparse.csr_array(network.topology, dtype=np.int64)
        counts = (membership.T @ topology @ membership).toarray().astype(np.int64)
        np.fill_diagonal(counts, np.diag(counts) // 2)
        sizes = tuple(int(size) for size in np.bincount(dense[kept], minlength=n_groups))
        coarse = CoarseGraph(sizes=sizes, counts=counts)
        logger.info(
            "Coarse graph built",
            groups=n_groups,
            inter_group_edges=len(coarse.edges()),
        )
        return coarse

    def _local_moving(
        self, graph: sparse.csr_array, rng: np.random.Generator
    ) -> tuple[np.ndarray, bool]:
        n = graph.shape[0]
        total_weight = float(graph.sum())
        if total_weight == 0.0:
            return np.arange(n), False

        neighbours = []
        for i in range(n):
            start, stop = graph.indptr[i], graph.indptr[i + 1]
            cols = graph.indices[start:stop].tolist()
            weights = graph.data[start:stop].tolist()
            neighbours.append([(j, w) for j, w in zip(cols, weights, strict=True) if j != i])
        strength = np.asarray(graph.sum(axis=1)).ravel().tolist()

        community = list(range(n))
        community_total = list(strength)
        order = rng.permutation(n).tolist()
        moved_any = False

        while True:
            moves = 0
            for i in order:
                k_i = strength[i]
                old = community[i]
                community_total[old] -= k_i

                links: dict[int, float] = {}
                for j, weight in neighbours[i]:
                    c = community[j]
                    links[c] = links.get(c, 0.0) + weight

                best = old
                best_gain = links.get(old, 0.0) - community_total[old] * k_i / total_weight
                for c in sorted(links):
                    if c == old:
                        continue
                    gain = links[c] - community_total[c] * k_i / total_weight
                    if gain > best_gain + _GAIN_TOLERANCE:
                        best, best_gain = c, gain

                community_total[best] += k_i
                if best != old:
                    community[i] = best
                    moves += 1
            if moves == 0:
                break
            moved_any = True

        renumber: dict[int, int] = {}
        dense = np.array([renumber.setdefault(c, len(renumber)) for c in community], dtype=np.int64)
        return dense, moved_any

    @staticmethod
    def _aggregate(graph: sparse.csr_array, communities: np.ndarray) -> sparse.csr_array:
        n_communities = int(communities.max()) + 1
        membership = sparse.csr_array(
            (np.ones(communities.size), (np.arange(communities.size), communities)),
            shape=(communities.size, n_communities),
        )
        aggregated = sparse.csr_array(membership.T @ graph @ membership)
        aggregated.sort_indices()
        return aggregated

    @staticmethod
    def _relabel_by_size(membership: np.ndarray) -> np.ndarray:
        sizes = np.bincount(membership)
        first_member = np.full(sizes.size, membership.size)
        np.minimum.at(first_member, membership, np.arange(membership.size))
        order = sorted(range(sizes.size), key=lambda c: (-sizes[c], first_member[c]))
        mapping = np.empty(sizes.size, dtype=np.int64)
        mapping[order] = np.arange(sizes.size)
        return mapping[membership]

    @staticmethod
    def _modularity(adjacency: sparse.csr_array, labels: np.ndarray) -> float:
        total_weight = float(adjacency.sum())
        if total_weight == 0.0:
            return 0.0
        n_labels = int(labels.max()) + 1
        coo = adjacency.tocoo()
        inside = labels[coo.row] == labels[coo.col]
        internal = np.bincount(
            labels[coo.row[inside]], weights=coo.data[inside], minlength=n_labels
        )
        strength = np.asarray(adjacency.sum(axis=1)).ravel()
        endpoints = np.bincount(labels, weights=strength, minlength=n_labels)
        fractions_in = internal / total_weight
        fractions_end = endpoints / total_weight
        return float(np.sum(fractions_in - fractions_end**2))
