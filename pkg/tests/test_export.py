import io
import json
from pathlib import Path

import networkx as nx
import numpy as np

from src.infrastructure.export import MANIFEST_NAME, ArtifactExporter, ArtifactStore
from src.models.layout import Layout
from src.models.manifest import RunManifest
from src.models.taxonomy import Dendrogram, Merge
from src.services.community_service import CommunityService
from tests.factories import make_corpus, make_network, make_partition


def _three_leaf_tree(names: tuple[str, str, str] = ("a", "b", "c")) -> Dendrogram:
    return Dendrogram(
        leaves=names,
        merges=(
            Merge(left=0, right=1, height=1.0, size=2),
            Merge(left=3, right=2, height=4.0, size=3),
        ),
    )


def test_newick_branch_lengths() -> None:
    text = ArtifactExporter().newick(_three_leaf_tree())

    assert text == "(('a':1,'b':1):3,'c':4);\n"


def test_newick_quotes_apostrophes() -> None:
    text = ArtifactExporter().newick(_three_leaf_tree(("o'hara", "b", "c")))

    assert "'o''hara':1" in text


def test_dendrogram_json_lists_members() -> None:
    payload = json.loads(ArtifactExporter().dendrogram_json(_three_leaf_tree()))

    assert payload["leaves"] == ["a", "b", "c"]
    assert payload["merges"][1]["members"] == ["a", "b", "c"]
    assert payload["merges"][0]["node"] == 3


def test_edge_list_weight_column_only_for_cocitation() -> None:
    exporter = ArtifactExporter()

    plain = exporter.edge_list(make_network(3, [(0, 1), (1, 2)]))
    weighted = exporter.edge_list(make_network(3, [(0, 1)], weights=[2]))

    assert plain == "P1\tP2\nP2\tP3\n"
    assert weighted == "P1\tP2\t2\n"


def test_graphml_carries_paper_attributes() -> None:
    network = make_network(2, [(0, 1)])
    corpus = make_corpus(
        [{"id": "P1", "title": "Lasers", "year": 2001, "citation_count": 4}, {"id": "P2"}]
    )

    graph = nx.read_graphml(io.StringIO(ArtifactExporter().graphml(network, corpus)))

    assert set(graph.edges) == {("P1", "P2")}
    assert graph.nodes["P1"]["title"] == "Lasers"
    assert graph.nodes["P1"]["year"] == 2001
    assert "year" not in graph.nodes["P2"]


def test_coarse_graph_rows_keep_exact_weight(community_service: CommunityService) -> None:
    network = make_network(5, [(0, 3), (1, 4)])
    coarse = community_service.coarse_grain(
        network, make_partition(network.ids, [0, 0, 0, 1, 1])
    )

    text = ArtifactExporter().coarse_graph(coarse)

    assert text.splitlines() == ["alpha,beta,E,W,W_exact", "0,1,2,0.3333333333,1/3"]


def test_vosviewer_map_numbers_from_one() -> None:
    layout = Layout(
        ids=("P1", "P2"),
        coordinates=np.array([[0.5, -0.5], [-0.5, 0.5]]),
        dims=2,
        iterations=1,
        k=1.0,
    )
    partition = make_partition(layout.ids, [0, 1])

    lines = ArtifactExporter().vosviewer_map(layout, partition).splitlines()

    assert lines[0] == "id\tlabel\tx\ty\tcluster"
    assert lines[1] == "1\tP1\t0.5\t-0.5\t1"
    assert lines[2] == "2\tP2\t-0.5\t0.5\t2"


def test_store_records_and_discards(tmp_path: Path) -> None:
    store = ArtifactStore(tmp_path / "out")
    store.prepare()

    path = store.write("nested/a.txt", "hello\n", "corpus")

    assert path.read_text() == "hello\n"
    assert [entry.path for entry in store.entries] == ["nested/a.txt"]
    assert store.entries[0].bytes == 6
    store.discard()
    assert not path.exists()
    assert store.entries == []


def test_prepare_removes_previous_outputs_only(tmp_path: Path) -> None:
    output_dir = tmp_path / "out"
    first = ArtifactStore(output_dir)
    first.prepare()
    first.write("old.csv", "x\n", "corpus")
    first.write_manifest(RunManifest(seed=0, files=first.entries))
    (output_dir / "mine.txt").write_text("user file")

    ArtifactStore(output_dir).prepare()

    assert not (output_dir / "old.csv").exists()
    assert not (output_dir / MANIFEST_NAME).exists()
    assert (output_dir / "mine.txt").exists()
