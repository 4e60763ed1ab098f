import csv
import io
import json
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import networkx as nx
import numpy as np

from src.models.accessibility import AccessibilityProfile, CumulativeCurve, PeripheralityRanking
from src.models.community import CoarseGraph, CommunityPartition, community_letter
from src.models.corpus import Corpus, CorpusStats
from src.models.keywords import RankedTerm
from src.models.layout import Layout
from src.models.network import CitationNetwork
from src.models.taxonomy import Dendrogram, GroupAssignment, KeywordDistanceMatrix, KeywordGroups
from src.models.timeline import KeywordTimeline

_AXES = ("x", "y", "z")


def _number(value: float) -> str:
    return format(float(value), ".10g")


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]], delimiter: str = ",") -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=delimiter, lineterminator="\n")
    if header:
        writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class ArtifactExporter:
    """Renders every result type to plain text (CSV, TSV, Newick, JSON, GraphML)."""

    def corpus_stats(self, stats: CorpusStats) -> str:
        return _json(stats.model_dump(mode="json"))

    def edge_list(self, network: CitationNetwork) -> str:
        rows = []
        for i, j, weight in network.edges():
            row = [network.ids[i], network.ids[j]]
            if network.weighted:
                row.append(str(weight))
            rows.append(row)
        return _csv((), rows, delimiter="\t")

    def graphml(self, network: CitationNetwork, corpus: Corpus) -> str:
        graph = network.to_networkx()
        for paper in corpus.papers:
            node = graph.nodes[paper.id]
            node["title"] = paper.title
            node["citation_count"] = paper.citation_count
            if paper.year is not None:
                node["year"] = paper.year
        return "\n".join(nx.generate_graphml(graph)) + "\n"

    def partition(self, partition: CommunityPartition) -> str:
        return _csv(
            ("id", "community"),
            zip(partition.ids, partition.labels.tolist(), strict=True),
        )

    def coarse_graph(self, coarse: CoarseGraph) -> str:
        """E and W per community pair, W also as an exact fraction."""
        rows = [
            (
                edge.alpha,
                edge.beta,
                edge.count,
                _number(float(edge.weight)),
                str(edge.weight),
            )
            for edge in coarse.edges()
        ]
        return _csv(("alpha", "beta", "E", "W", "W_exact"), rows)

    def keywords(self, terms: Sequence[RankedTerm]) -> str:
        return _csv(
            ("term", "I", "community", "F_in", "F_out"),
            (
                (t.term, _number(t.importance), t.community, _number(t.f_in), _number(t.f_out))
                for t in terms
            ),
        )

    def community_labels(
        self, partition: CommunityPartition, labels: Mapping[int, list[str]]
    ) -> str:
        return _csv(
            ("community", "letter", "size", "labels"),
            (
                (c, community_letter(c), partition.sizes[c], "; ".join(labels.get(c, [])))
                for c in range(partition.n_communities)
            ),
        )

    def distance_matrix(self, matrix: KeywordDistanceMatrix) -> str:
        rows = []
        for a, keyword in enumerate(matrix.keywords):
            values = matrix.values[a]
            rows.append([keyword, *("" if np.isnan(v) else _number(v) for v in values)])
        return _csv(("keyword", *matrix.keywords), rows)

    def newick(self, dendrogram: Dendrogram) -> str:
        def label(name: str) -> str:
            return "'" + name.replace("'", "''") + "'"

        def render(node: int, parent_height: float) -> str:
            branch = _number(parent_height - dendrogram.height(node))
            pair = dendrogram.children(node)
            if pair is None:
                return f"{label(dendrogram.leaves[node])}:{branch}"
            inner = ",".join(render(child, dendrogram.height(node)) for child in pair)
            return f"({inner}):{branch}"

        root = dendrogram.root
        pair = dendrogram.children(root)
        if pair is None:
            return f"{label(dendrogram.leaves[0])};\n"
        inner = ",".join(render(child, dendrogram.height(root)) for child in pair)
        return f"({inner});\n"

    def dendrogram_json(self, dendrogram: Dendrogram) -> str:
        n = dendrogram.n_leaves
        return _json(
            {
                "leaves": list(dendrogram.leaves),
                "merges": [
                    {
                        "node": n + step,
                        "left": merge.left,
                        "right": merge.right,
                        "height": merge.height,
                        "size": merge.size,
                        "members": list(dendrogram.leaf_names(n + step)),
                    }
                    for step, merge in enumerate(dendrogram.merges)
                ],
                "non_monotone_steps": list(dendrogram.violations),
            }
        )

    def keyword_groups(self, groups: KeywordGroups) -> str:
        return _csv(
            ("group", "keyword"),
            ((g, keyword) for g, members in enumerate(groups.groups) for keyword in members),
        )

    def group_assignment(self, assignment: GroupAssignment, ids: Sequence[str]) -> str:
        rows = []
        for paper_id in ids:
            group = assignment.assignment[paper_id]
            counts = assignment.match_counts[paper_id]
            rows.append((paper_id, "" if group is None else group, " ".join(map(str, counts))))
        return _csv(("id", "group", "matches"), rows)

    def accessibility(self, profile: AccessibilityProfile) -> str:
        return _csv(
            ("id", "community", "kappa"),
            (
                (node_id, label, _number(kappa))
                for node_id, label, kappa in zip(
                    profile.ids, profile.labels.tolist(), profile.kappa, strict=True
                )
            ),
        )

    def peripherality(self, ranking: PeripheralityRanking, profile: AccessibilityProfile) -> str:
        rows = []
        for rank, community in enumerate(ranking.order, start=1):
            active = profile.community_values(community).size
            area = _number(ranking.areas[community])
            rows.append((rank, community, community_letter(community), area, active))
        return _csv(("rank", "community", "letter", "area", "nodes"), rows)

    def curve_points(
        self, curves: Sequence[CumulativeCurve], lower: float, upper: float, points: int
    ) -> str:
        rows = []
        for curve in curves:
            grid, values = curve.sample(lower, upper, points)
            rows.extend(
                (curve.community, _number(x), _number(y))
                for x, y in zip(grid, values, strict=True)
            )
        return _csv(("community", "kappa", "fraction"), rows)

    def coordinates(self, layout: Layout, partition: CommunityPartition) -> str:
        header = ("id", *_AXES[: layout.dims], "community")
        rows = (
            (node_id, *(_number(v) for v in point), label)
            for node_id, point, label in zip(
                layout.ids, layout.coordinates, partition.labels.tolist(), strict=True
            )
        )
        return _csv(header, rows)

    def science_map(
        self,
        layout: Layout,
        partition: CommunityPartition,
        coarse: CoarseGraph,
        labels: Mapping[int, list[str]],
        areas: Mapping[int, float] | None = None,
    ) -> str:
        nodes = [
            {
                "id": node_id,
                "community": int(label),
                "position": [float(v) for v in point],
            }
            for node_id, point, label in zip(
                layout.ids, layout.coordinates, partition.labels, strict=True
            )
        ]
        communities = [
            {
                "community": c,
                "letter": community_letter(c),
                "size": partition.sizes[c],
                "label": labels.get(c, []),
                "internal_edges": coarse.internal_edges(c),
                "peripherality_area": None if areas is None else areas.get(c),
            }
            for c in range(partition.n_communities)
        ]
        edges = [
            {
                "source": edge.alpha,
                "target": edge.beta,
                "E": edge.count,
                "W": float(edge.weight),
            }
            for edge in coarse.edges()
        ]
        return _json(
            {
                "dims": layout.dims,
                "modularity": partition.q,
                "nodes": nodes,
                "communities": communities,
                "coarse_edges": edges,
            }
        )

    def vosviewer_map(self, layout: Layout, partition: CommunityPartition) -> str:
        """VOSviewer map file; items are numbered from 1, clusters are community label + 1."""
        rows = (
            (position, node_id, _number(point[0]), _number(point[1]), int(label) + 1)
            for position, (node_id, point, label) in enumerate(
                zip(layout.ids, layout.coordinates, partition.labels, strict=True), start=1
            )
        )
        return _csv(("id", "label", "x", "y", "cluster"), rows, delimiter="\t")

    def vosviewer_network(self, network: CitationNetwork) -> str:
        rows = ((i + 1, j + 1, weight) for i, j, weight in network.edges())
        return _csv((), rows, delimiter="\t")

    def timeline(self, timeline: KeywordTimeline) -> str:
        rows = [
            (keyword, year, _number(timeline.frequency(keyword, year)), timeline.totals[year])
            for keyword in timeline.keywords
            for year in timeline.years
        ]
        return _csv(("keyword", "year", "frequency", "papers_in_year"), rows)

    def papers_per_year(self, totals: Mapping[int, int]) -> str:
        return _csv(("year", "papers"), sorted(totals.items()))

    def community_summary(
        self,
        corpus: Corpus,
        partition: CommunityPartition,
        coarse: CoarseGraph,
        labels: Mapping[int, list[str]] | None = None,
        areas: Mapping[int, float] | None = None,
        top_cited: int = 3,
    ) -> str:
        rows = []
        for c in range(partition.n_communities):
            members = sorted(
                (corpus.get(node_id) for node_id in partition.members(c)),
                key=lambda paper: (-paper.citation_count, paper.id),
            )
            area = None if areas is None else areas.get(c)
            rows.append(
                (
                    c,
                    community_letter(c),
                    partition.sizes[c],
                    coarse.internal_edges(c),
                    "; ".join((labels or {}).get(c, [])),
                    "" if area is None else _number(area),
                    "; ".join(paper.id for paper in members[:top_cited]),
                )
            )
        header = (
            "community",
            "letter",
            "size",
            "internal_edges",
            "labels",
            "peripherality_area",
            "most_cited",
        )
        return _csv(header, rows)
