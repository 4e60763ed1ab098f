from collections.abc import Sequence

import numpy as np
import structlog

from src.core.errors import DendrogramError, UnknownKeywordError
from src.models.keywords import TermSet
from src.models.network import UNREACHABLE, CitationNetwork, DistanceMatrix
from src.models.taxonomy import (
    Dendrogram,
    GroupAssignment,
    KeywordDistanceMatrix,
    KeywordGroups,
    Merge,
)
from src.services.citation_network_service import CitationNetworkService
from src.services.salience_service import SalienceService

logger = structlog.get_logger()

_MONOTONE_SLACK = 1e-12


class TaxonomyService:
    """Keyword distances over the citation network, average-linkage dendrograms and cuts."""

    def __init__(
        self, network_service: CitationNetworkService, salience_service: SalienceService
    ) -> None:
        self.network_service = network_service
        self.salience_service = salience_service

    def keyword_distance(
        self, u: str, v: str, dist: DistanceMatrix, termsets: TermSet
    ) -> float | None:
        """Mean hop distance over ordered paper pairs (i, j), i != j, u in A_i, v in A_j.

        Unreachable pairs are left out; ``None`` when no reachable pair remains.
        """
        papers_u = self._papers_with(termsets, u)
        papers_v = self._papers_with(termsets, v)
        total, pairs = self._pair_sum(papers_u, papers_v, dist)
        return None if pairs == 0 else total / pairs

    def keyword_distance_matrix(
        self, keywords: Sequence[str], network: CitationNetwork, termsets: TermSet
    ) -> KeywordDistanceMatrix:
        if termsets.ids != network.ids:
            msg = "term sets and network must list the same papers in the same order"
            raise DendrogramError(msg)
        papers = {keyword: self._papers_with(termsets, keyword) for keyword in keywords}
        sources = sorted({int(i) for indices in papers.values() for i in indices})
        dist = self.network_service.distance_matrix(network, sources)

        n = len(keywords)
        values = np.full((n, n), np.nan)
        pair_counts = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                total, pairs = self._pair_sum(papers[keywords[a]], papers[keywords[b]], dist)
                pair_counts[a, b] = pair_counts[b, a] = pairs
                if pairs:
                    values[a, b] = values[b, a] = total / pairs
        matrix = KeywordDistanceMatrix(
            keywords=tuple(keywords), values=values, pair_counts=pair_counts
        )
        undefined = matrix.undefined_pairs
        if undefined:
            logger.warning("Keyword pairs without reachable papers", pairs=len(undefined))
        logger.info("Keyword distances computed", keywords=n, sources=len(sources))
        return matrix

    def resolve_undefined(self, matrix: KeywordDistanceMatrix) -> tuple[np.ndarray, int]:
        """Replace undefined off-diagonal distances by (max defined distance + 1).

        Returns the filled matrix (zero diagonal) and the number of substituted pairs.
        """
        values = matrix.values.copy()
        np.fill_diagonal(values, 0.0)
        off_diagonal = ~np.eye(len(matrix.keywords), dtype=bool)
        defined = values[off_diagonal & ~np.isnan(values)]
        fill = float(defined.max()) + 1.0 if defined.size else 1.0
        undefined = np.isnan(values)
        values[undefined] = fill
        return values, int(undefined.sum() // 2)

    def build_dendrogram(
        self, keywords: Sequence[str], matrix: KeywordDistanceMatrix | np.ndarray
    ) -> Dendrogram:
        """Average-linkage agglomeration with deterministic ties.

        Leaves are sorted first, so the tree does not depend on input order; among
        equally distant cluster pairs the lexicographically lowest leaf-set pair merges.
        """
        distances = np.asarray(
            matrix.values if isinstance(matrix, KeywordDistanceMatrix) else matrix, dtype=np.float64
        )
        n = len(keywords)
        if n < 2:  # noqa: PLR2004
            msg = f"a dendrogram needs at least 2 keywords, got {n}"
            raise DendrogramError(msg)
        if distances.shape != (n, n):
            msg = f"distance matrix shape {distances.shape} does not match {n} keywords"
            raise DendrogramError(msg)
        off_diagonal = ~np.eye(n, dtype=bool)
        if np.isnan(distances[off_diagonal]).any():
            msg = "undefined keyword distances must be resolved before clustering"
            raise DendrogramError(msg)
        if len(set(keywords)) != n:
            msg = "keywords must be distinct"
            raise DendrogramError(msg)

        order = sorted(range(n), key=lambda i: keywords[i])
        leaves = tuple(keywords[i] for i in order)
        size_total = 2 * n - 1
        linkage = np.full((size_total, size_total), np.inf)
        linkage[:n, :n] = distances[np.ix_(order, order)]
        members: dict[int, tuple[str, ...]] = {i: (leaves[i],) for i in range(n)}
        sizes = {i: 1 for i in range(n)}
        active = list(range(n))

        merges: list[Merge] = []
        for step in range(n - 1):
            best: tuple[float, tuple[str, ...], tuple[str, ...]] | None = None
            best_pair = (-1, -1)
            for x_pos, x in enumerate(active):
                for y in active[x_pos + 1 :]:
                    first, second = (x, y) if members[x] < members[y] else (y, x)
                    key = (float(linkage[x, y]), members[first], members[second])
                    if best is None or key < best:
                        best, best_pair = key, (first, second)
            assert best is not None
            left, right = best_pair
            node = n + step
            merged_size = sizes[left] + sizes[right]
            merges.append(Merge(left=left, right=right, height=best[0], size=merged_size))

            active.remove(left)
            active.remove(right)
            for other in active:
                value = (
                    sizes[left] * linkage[left, other] + sizes[right] * linkage[right, other]
                ) / merged_size
                linkage[node, other] = linkage[other, node] = value
            members[node] = tuple(sorted(members[left] + members[right]))
            sizes[node] = merged_size
            active.append(node)

        violations = tuple(
            step
            for step in range(1, len(merges))
            if merges[step].height < merges[step - 1].height - _MONOTONE_SLACK
        )
        if violations:
            logger.warning("Non-monotone merge heights", steps=list(violations))
        logger.info("Dendrogram built", leaves=n, root_height=merges[-1].height)
        return Dendrogram(leaves=leaves, merges=tuple(merges), violations=violations)

    def cut_dendrogram(self, dendrogram: Dendrogram, threshold: float) -> KeywordGroups:
        """Maximal subtrees whose merge heights all lie strictly below ``threshold``."""
        if threshold < 0:
            msg = "cut threshold must be non-negative"
            raise DendrogramError(msg)
        n = dendrogram.n_leaves
        subtree_max = [0.0] * n
        for merge in dendrogram.merges:
            subtree_max.append(
                max(merge.height, subtree_max[merge.left], subtree_max[merge.right])
            )

        groups: list[tuple[str, ...]] = []
        stack = [dendrogram.root] if dendrogram.merges else list(range(n))
        while stack:
            node = stack.pop()
            children = dendrogram.children(node)
            if children is None or subtree_max[node] < threshold:
                groups.append(dendrogram.leaf_names(node))
            else:
                stack.extend(children)
        groups.sort(key=lambda group: (-len(group), group))
        logger.info("Dendrogram cut", threshold=threshold, groups=len(groups))
        return KeywordGroups(threshold=threshold, groups=tuple(groups))

    def assign_papers_to_groups(self, groups: KeywordGroups, termsets: TermSet) -> GroupAssignment:
        """Each paper goes to the group with most of its keywords; ties and zero stay unassigned."""
        n_groups = len(groups.groups)
        counts = np.zeros((len(termsets.ids), n_groups), dtype=np.int64)
        for group, keywords in enumerate(groups.groups):
            for keyword in keywords:
                counts[:, group] += self.salience_service.occurrences(termsets, keyword)

        assignment: dict[str, int | None] = {}
        match_counts: dict[str, tuple[int, ...]] = {}
        for row, paper_id in enumerate(termsets.ids):
            paper_counts = counts[row]
            match_counts[paper_id] = tuple(int(c) for c in paper_counts)
            top = int(paper_counts.max()) if n_groups else 0
            winners = np.flatnonzero(paper_counts == top)
            assignment[paper_id] = int(winners[0]) if top > 0 and winners.size == 1 else None

        result = GroupAssignment(assignment=assignment, match_counts=match_counts)
        logger.info(
            "Papers assigned to keyword groups",
            assigned=result.assigned,
            unassigned=result.unassigned,
        )
        return result

    def group_labels(
        self, assignment: GroupAssignment, ids: Sequence[str]
    ) -> list[int | None]:
        return [assignment.assignment.get(node_id) for node_id in ids]

    def _papers_with(self, termsets: TermSet, keyword: str) -> np.ndarray:
        mask = self.salience_service.occurrences(termsets, keyword)
        if not mask.any():
            raise UnknownKeywordError(keyword)
        return np.flatnonzero(mask)

    @staticmethod
    def _pair_sum(
        papers_u: np.ndarray, papers_v: np.ndarray, dist: DistanceMatrix
    ) -> tuple[float, int]:
        rows = np.array([dist.row_of[int(i)] for i in papers_u], dtype=np.int64)
        block = dist.lengths[np.ix_(rows, papers_v)]
        valid = (block != UNREACHABLE) & (papers_u[:, None] != papers_v[None, :])
        return float(block[valid].sum(dtype=np.int64)), int(valid.sum())
