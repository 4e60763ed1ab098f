import networkx as nx
import numpy as np
import pytest
from scipy.cluster import hierarchy
from scipy.spatial.distance import squareform

from src.core.errors import DendrogramError, UnknownKeywordError
from src.models.taxonomy import KeywordGroups
from src.services.citation_network_service import CitationNetworkService
from src.services.taxonomy_service import TaxonomyService
from tests.factories import make_network, make_termsets, path_graph, random_network


def _three_keyword_tree(taxonomy_service: TaxonomyService):
    distances = np.array([[0.0, 1.0, 4.0], [1.0, 0.0, 4.0], [4.0, 4.0, 0.0]])
    return taxonomy_service.build_dendrogram(["a", "b", "c"], distances)


def _random_distances(n: int, rng: np.random.Generator) -> np.ndarray:
    upper = rng.uniform(1.0, 10.0, size=(n, n))
    distances = np.triu(upper, k=1)
    return distances + distances.T


def test_single_pair_distance(
    taxonomy_service: TaxonomyService, network_service: CitationNetworkService
) -> None:
    network = path_graph(3)
    termsets = make_termsets([{"u"}, set(), {"v"}])
    dist = network_service.distance_matrix(network)

    assert taxonomy_service.keyword_distance("u", "v", dist, termsets) == 2.0


def test_average_over_pairs(
    taxonomy_service: TaxonomyService, network_service: CitationNetworkService
) -> None:
    network = path_graph(3)
    termsets = make_termsets([{"u"}, {"v"}, {"v"}])
    dist = network_service.distance_matrix(network)

    assert taxonomy_service.keyword_distance("u", "v", dist, termsets) == 1.5


def test_disconnected_keywords_undefined(
    taxonomy_service: TaxonomyService, network_service: CitationNetworkService
) -> None:
    network = make_network(4, [(0, 1), (2, 3)])
    termsets = make_termsets([{"u"}, {"u"}, {"v"}, {"v"}])
    dist = network_service.distance_matrix(network)

    assert taxonomy_service.keyword_distance("u", "v", dist, termsets) is None


def test_same_paper_pairs_left_out(
    taxonomy_service: TaxonomyService, network_service: CitationNetworkService
) -> None:
    network = path_graph(2)
    termsets = make_termsets([{"u", "v"}, {"v"}])
    dist = network_service.distance_matrix(network)

    assert taxonomy_service.keyword_distance("u", "v", dist, termsets) == 1.0


def test_unknown_keyword_rejected(taxonomy_service: TaxonomyService) -> None:
    network = path_graph(2)
    termsets = make_termsets([{"u"}, {"v"}])

    with pytest.raises(UnknownKeywordError):
        taxonomy_service.keyword_distance_matrix(["u", "missing"], network, termsets)


@pytest.mark.parametrize("seed", range(4))
def test_distance_matrix_matches_networkx_oracle(
    taxonomy_service: TaxonomyService, seed: int
) -> None:
    rng = np.random.default_rng(seed)
    network = random_network(25, 0.08, rng)
    vocabulary = ["k0", "k1", "k2", "k3", "k4"]
    termsets = make_termsets(
        [set(rng.choice(vocabulary, size=2).tolist()) for _ in range(25)]
    )
    keywords = [k for k in vocabulary if any(k in t for t in termsets.terms)]
    hops = dict(nx.all_pairs_shortest_path_length(network.to_networkx()))

    matrix = taxonomy_service.keyword_distance_matrix(keywords, network, termsets)

    for u in keywords:
        for v in keywords:
            lengths = [
                hops[network.ids[i]][network.ids[j]]
                for i, a in enumerate(termsets.terms)
                for j, b in enumerate(termsets.terms)
                if i != j and u in a and v in b and network.ids[j] in hops[network.ids[i]]
            ]
            expected = sum(lengths) / len(lengths) if lengths else None
            actual = matrix.distance(u, v)
            if expected is None:
                assert actual is None
            else:
                assert actual == pytest.approx(expected)
    defined = np.nan_to_num(matrix.values, nan=-1.0)
    assert (defined == defined.T).all()
    assert (matrix.pair_counts == matrix.pair_counts.T).all()


def test_resolve_undefined_uses_max_plus_one(taxonomy_service: TaxonomyService) -> None:
    network = make_network(5, [(0, 1), (1, 2), (3, 4)])
    termsets = make_termsets([{"a"}, set(), {"b"}, {"c"}, {"c"}])
    matrix = taxonomy_service.keyword_distance_matrix(["a", "b", "c"], network, termsets)

    filled, substituted = taxonomy_service.resolve_undefined(matrix)

    assert matrix.undefined_pairs == [("a", "c"), ("b", "c")]
    assert substituted == 2
    assert filled[0, 2] == filled[2, 0] == 3.0
    assert filled[0, 1] == 2.0
    assert not filled.diagonal().any()


def test_two_keywords_single_merge(taxonomy_service: TaxonomyService) -> None:
    dendrogram = taxonomy_service.build_dendrogram(
        ["x", "y"], np.array([[0.0, 3.0], [3.0, 0.0]])
    )

    assert len(dendrogram.merges) == 1
    assert dendrogram.root_height == 3.0
    assert dendrogram.leaf_names(dendrogram.root) == ("x", "y")


def test_three_keyword_trace(taxonomy_service: TaxonomyService) -> None:
    dendrogram = _three_keyword_tree(taxonomy_service)

    assert [m.height for m in dendrogram.merges] == [1.0, 4.0]
    assert dendrogram.leaf_names(3) == ("a", "b")
    assert dendrogram.children(4) == (3, 2)
    assert dendrogram.violations == ()


def test_too_few_keywords(taxonomy_service: TaxonomyService) -> None:
    with pytest.raises(DendrogramError):
        taxonomy_service.build_dendrogram(["only"], np.zeros((1, 1)))


def test_unresolved_distances_rejected(taxonomy_service: TaxonomyService) -> None:
    distances = np.array([[0.0, np.nan], [np.nan, 0.0]])

    with pytest.raises(DendrogramError):
        taxonomy_service.build_dendrogram(["x", "y"], distances)


@pytest.mark.parametrize("seed", range(10))
def test_heights_match_scipy_average_linkage(
    taxonomy_service: TaxonomyService, seed: int
) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 12))
    distances = _random_distances(n, rng)
    keywords = [f"kw{i:02d}" for i in range(n)]

    dendrogram = taxonomy_service.build_dendrogram(keywords, distances)
    expected = hierarchy.linkage(squareform(distances), method="average")

    assert [m.height for m in dendrogram.merges] == pytest.approx(expected[:, 2].tolist())
    assert np.allclose(
        hierarchy.cophenet(dendrogram.linkage_matrix()), hierarchy.cophenet(expected)
    )
    heights = [m.height for m in dendrogram.merges]
    assert heights == sorted(heights)


def test_dendrogram_invariant_under_keyword_order(taxonomy_service: TaxonomyService) -> None:
    rng = np.random.default_rng(4)
    n = 7
    distances = np.round(_random_distances(n, rng))
    keywords = [f"kw{i}" for i in range(n)]
    permutation = rng.permutation(n)

    original = taxonomy_service.build_dendrogram(keywords, distances)
    shuffled = taxonomy_service.build_dendrogram(
        [keywords[i] for i in permutation], distances[np.ix_(permutation, permutation)]
    )

    assert original == shuffled


def test_cut_above_root_is_one_group(taxonomy_service: TaxonomyService) -> None:
    groups = taxonomy_service.cut_dendrogram(_three_keyword_tree(taxonomy_service), 10.0)

    assert groups.groups == (("a", "b", "c"),)


def test_cut_at_zero_gives_singletons(taxonomy_service: TaxonomyService) -> None:
    groups = taxonomy_service.cut_dendrogram(_three_keyword_tree(taxonomy_service), 0.0)

    assert sorted(groups.groups) == [("a",), ("b",), ("c",)]


def test_cut_between_merges(taxonomy_service: TaxonomyService) -> None:
    groups = taxonomy_service.cut_dendrogram(_three_keyword_tree(taxonomy_service), 2.0)

    assert groups.groups == (("a", "b"), ("c",))
    assert groups.group_of == {"a": 0, "b": 0, "c": 1}


def test_negative_cut_rejected(taxonomy_service: TaxonomyService) -> None:
    with pytest.raises(DendrogramError):
        taxonomy_service.cut_dendrogram(_three_keyword_tree(taxonomy_service), -1.0)


def test_assign_papers_to_groups(taxonomy_service: TaxonomyService) -> None:
    groups = KeywordGroups(threshold=1.0, groups=(("a", "b", "c"), ("d", "e")))
    termsets = make_termsets([{"a", "b", "c", "d"}, {"z"}, {"a", "b", "d", "e"}])

    result = taxonomy_service.assign_papers_to_groups(groups, termsets)

    assert result.assignment == {"P1": 0, "P2": None, "P3": None}
    assert result.match_counts["P1"] == (3, 1)
    assert result.match_counts["P3"] == (2, 2)
    assert result.assigned == 1
    assert result.unassigned == 2
    assert result.group_sizes(2) == (1, 0)
