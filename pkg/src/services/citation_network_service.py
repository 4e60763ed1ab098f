from collections.abc import Sequence
from fractions import Fraction

import numpy as np
import structlog
from scipy import sparse
from scipy.sparse import csgraph

from src.core.config import NetworkMode
from src.core.errors import EmptyNetworkError
from src.models.corpus import Corpus
from src.models.network import UNREACHABLE, CitationNetwork, DistanceMatrix, NetworkReport

logger = structlog.get_logger()

_BFS_BATCH = 256


class CitationNetworkService:
    def build(self, corpus: Corpus, mode: NetworkMode = NetworkMode.CITATION) -> CitationNetwork:
        if mode is NetworkMode.COCITATION:
            return self.build_cocitation_network(corpus)
        return self.build_citation_network(corpus)

    def build_citation_network(self, corpus: Corpus) -> CitationNetwork:
        """Undirected citation graph: {i, j} is an edge iff either paper cites the other."""
        citations, outside = self._citation_matrix(corpus)
        reciprocal = int(citations.multiply(citations.T).nnz // 2)
        undirected = sparse.csr_array((citations + citations.T) > 0, dtype=np.int64)
        undirected.sort_indices()
        network = self._finish(corpus, undirected, NetworkMode.CITATION, outside, reciprocal)
        logger.info(
            "Citation network built",
            nodes=network.n_nodes,
            edges=network.n_edges,
            out_of_corpus_references=outside,
            isolated_nodes=network.report.isolated_nodes,
        )
        return network

    def build_cocitation_network(self, corpus: Corpus) -> CitationNetwork:
        """Weighted graph joining papers cited together; weight = number of common citers."""
        citations, outside = self._citation_matrix(corpus)
        cocited = sparse.csr_array(citations.T @ citations, dtype=np.int64)
        cocited.setdiag(0)
        cocited.eliminate_zeros()
        cocited.sort_indices()
        network = self._finish(corpus, cocited, NetworkMode.COCITATION, outside, 0)
        logger.info(
            "Co-citation network built",
            nodes=network.n_nodes,
            edges=network.n_edges,
            max_weight=int(cocited.data.max()) if cocited.nnz else 0,
        )
        return network

    def shortest_paths_from(self, network: CitationNetwork, source: str) -> dict[str, int | None]:
        """Breadth-first hop distances; ``None`` for unreachable nodes."""
        position = network.index_of(source)
        row = self.distance_matrix(network, [position]).lengths[0]
        return {
            node_id: None if value == UNREACHABLE else int(value)
            for node_id, value in zip(network.ids, row, strict=True)
        }

    def distance_matrix(
        self, network: CitationNetwork, sources: Sequence[int] | None = None
    ) -> DistanceMatrix:
        """Unit-weight shortest paths from ``sources`` (all nodes when omitted)."""
        chosen = tuple(range(network.n_nodes)) if sources is None else tuple(sources)
        lengths = np.full((len(chosen), network.n_nodes), UNREACHABLE, dtype=np.int32)
        for start in range(0, len(chosen), _BFS_BATCH):
            batch = list(chosen[start : start + _BFS_BATCH])
            hops = csgraph.shortest_path(
                network.topology, directed=False, unweighted=True, indices=batch
            )
            hops = np.atleast_2d(hops)
            reachable = np.isfinite(hops)
            block = lengths[start : start + len(batch)]
            block[reachable] = hops[reachable].astype(np.int32)
        return DistanceMatrix(ids=network.ids, sources=chosen, lengths=lengths)

    def average_degree(self, network: CitationNetwork) -> Fraction:
        if network.n_nodes == 0:
            msg = "average degree of an empty network is undefined"
            raise EmptyNetworkError(msg)
        return Fraction(2 * network.n_edges, network.n_nodes)

    def connected_components(self, network: CitationNetwork) -> dict[str, int]:
        """Component label per node, numbered in order of first appearance."""
        if network.n_nodes == 0:
            return {}
        _, labels = csgraph.connected_components(network.topology, directed=False)
        first_seen: dict[int, int] = {}
        for label in labels:
            first_seen.setdefault(int(label), len(first_seen))
        return {
            node_id: first_seen[int(label)]
            for node_id, label in zip(network.ids, labels, strict=True)
        }

    @staticmethod
    def _citation_matrix(corpus: Corpus) -> tuple[sparse.csr_array, int]:
        index = {paper_id: position for position, paper_id in enumerate(corpus.ids)}
        rows: list[int] = []
        cols: list[int] = []
        outside = 0
        for i, paper in enumerate(corpus.papers):
            for reference in paper.references:
                j = index.get(reference)
                if j is None:
                    outside += 1
                    continue
                rows.append(i)
                cols.append(j)
        n = corpus.N
        data = np.ones(len(rows), dtype=np.int64)
        matrix = sparse.csr_array((data, (rows, cols)), shape=(n, n), dtype=np.int64)
        matrix.sum_duplicates()
        return matrix, outside

    @staticmethod
    def _finish(
        corpus: Corpus,
        adjacency: sparse.csr_array,
        mode: NetworkMode,
        outside: int,
        reciprocal: int,
    ) -> CitationNetwork:
        degrees = np.diff(adjacency.indptr)
        isolated = int(np.count_nonzero(degrees == 0))
        if isolated:
            logger.warning("Isolated papers kept in the network", count=isolated, mode=mode.value)
        report = NetworkReport(
            out_of_corpus_references=outside,
            isolated_nodes=isolated,
            reciprocal_citations=reciprocal,
        )
        return CitationNetwork(ids=corpus.ids, adjacency=adjacency, mode=mode, report=report)
