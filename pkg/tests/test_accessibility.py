import numpy as np
import pytest

from src.core.errors import AccessibilityError, IsolatedNodeError
from src.models.accessibility import AccessibilityProfile, CumulativeCurve
from src.services.accessibility_service import AccessibilityService
from tests.factories import (
    complete_graph,
    connected_random_network,
    make_network,
    make_partition,
    path_graph,
    ring_graph,
    star_graph,
)


def _oracle_probabilities(network, source: int, h: int) -> np.ndarray:
    dense = network.topology.toarray()
    transition = dense / dense.sum(axis=1, keepdims=True)
    start = np.zeros(network.n_nodes)
    start[source] = 1.0
    return start @ np.linalg.matrix_power(transition, h)


def _oracle_kappa(probabilities: np.ndarray) -> float:
    positive = probabilities[probabilities > 0]
    return float(np.exp(-np.sum(positive * np.log(positive))))


def _profile(values: dict[int, list[float]]) -> AccessibilityProfile:
    labels = [c for c, kappas in values.items() for _ in kappas]
    kappa = [k for kappas in values.values() for k in kappas]
    ids = tuple(f"P{i}" for i in range(len(kappa)))
    return AccessibilityProfile(
        ids=ids, kappa=np.array(kappa), h=3, labels=np.array(labels, dtype=np.int64)
    )


def test_uniform_step_on_complete_graph(accessibility_service: AccessibilityService) -> None:
    probabilities = accessibility_service.walk_probabilities(complete_graph(4), "P1", h=1)

    assert probabilities == pytest.approx({"P2": 1 / 3, "P3": 1 / 3, "P4": 1 / 3})


def test_one_step_from_path_middle(accessibility_service: AccessibilityService) -> None:
    probabilities = accessibility_service.walk_probabilities(path_graph(3), "P2", h=1)

    assert probabilities == pytest.approx({"P1": 0.5, "P3": 0.5})


def test_walk_from_isolated_node_rejected(accessibility_service: AccessibilityService) -> None:
    network = make_network(3, [(1, 2)])

    with pytest.raises(IsolatedNodeError):
        accessibility_service.walk_probabilities(network, "P1", h=2)


def test_walk_length_must_be_positive(accessibility_service: AccessibilityService) -> None:
    with pytest.raises(AccessibilityError):
        accessibility_service.walk_probabilities(path_graph(3), "P1", h=0)
    with pytest.raises(AccessibilityError):
        accessibility_service.accessibility(path_graph(3), "P1", h=0)
    with pytest.raises(AccessibilityError):
        accessibility_service.accessibility(make_network(2, []), "P1", h=0)


@pytest.mark.parametrize("h", [1, 2, 3, 4, 5])
def test_probabilities_sum_to_one(accessibility_service: AccessibilityService, h: int) -> None:
    rng = np.random.default_rng(100 + h)
    for _ in range(10):
        n = int(rng.integers(2, 60))
        network = connected_random_network(n, float(rng.uniform(0.02, 0.3)), rng)
        source = network.ids[int(rng.integers(0, n))]

        probabilities = accessibility_service.walk_probabilities(network, source, h=h)

        assert abs(sum(probabilities.values()) - 1.0) <= 1e-12
        assert all(p > 0 for p in probabilities.values())


@pytest.mark.parametrize("seed", range(8))
def test_probabilities_match_matrix_power(
    accessibility_service: AccessibilityService, seed: int
) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 51))
    network = connected_random_network(n, 0.1, rng)
    source = int(rng.integers(0, n))

    probabilities = accessibility_service.walk_probabilities(network, network.ids[source], h=3)
    expected = _oracle_probabilities(network, source, 3)

    actual = np.array([probabilities.get(node_id, 0.0) for node_id in network.ids])
    assert np.allclose(actual, expected, rtol=0.0, atol=1e-12)
    assert actual.sum() == pytest.approx(1.0, abs=1e-12)
    assert accessibility_service.accessibility(
        network, network.ids[source], h=3
    ) == pytest.approx(_oracle_kappa(expected), rel=1e-9)


def test_complete_graph_accessibility(accessibility_service: AccessibilityService) -> None:
    assert accessibility_service.accessibility(complete_graph(5), "P3", h=1) == pytest.approx(4.0)


def test_star_accessibility(accessibility_service: AccessibilityService) -> None:
    star = star_graph(6)

    assert accessibility_service.accessibility(star, "P1", h=1) == pytest.approx(6.0)
    assert accessibility_service.accessibility(star, "P2", h=1) == pytest.approx(1.0)


def test_path_middle_matches_entropy_oracle(accessibility_service: AccessibilityService) -> None:
    network = path_graph(5)

    kappa = accessibility_service.accessibility(network, "P3", h=3)

    assert kappa == pytest.approx(_oracle_kappa(_oracle_probabilities(network, 2, 3)), abs=1e-9)


def test_isolated_node_reported_as_zero(accessibility_service: AccessibilityService) -> None:
    network = make_network(3, [(1, 2)])

    assert accessibility_service.accessibility(network, "P1") == 0.0


def test_ring_nodes_equally_accessible(accessibility_service: AccessibilityService) -> None:
    network = ring_graph(12)
    partition = make_partition(network.ids, [0] * 6 + [1] * 6)

    profile = accessibility_service.accessibility_profile(network, partition, h=3)

    assert np.allclose(profile.kappa, profile.kappa[0])
    assert 1.0 <= profile.kappa[0] <= network.n_nodes


def test_profile_matches_single_node_calls(accessibility_service: AccessibilityService) -> None:
    rng = np.random.default_rng(31)
    network = connected_random_network(40, 0.05, rng)
    partition = make_partition(network.ids, rng.integers(0, 3, size=40))

    profile = accessibility_service.accessibility_profile(network, partition, h=2)

    for position, node_id in enumerate(network.ids):
        assert profile.kappa[position] == pytest.approx(
            accessibility_service.accessibility(network, node_id, h=2)
        )


def test_profile_excludes_isolated_nodes(accessibility_service: AccessibilityService) -> None:
    network = make_network(4, [(0, 1), (1, 2)])
    partition = make_partition(network.ids, [0, 0, 0, 1])

    profile = accessibility_service.accessibility_profile(network, partition, h=1)

    assert profile.kappa[3] == 0.0
    assert profile.community_values(1).size == 0
    with pytest.raises(AccessibilityError):
        accessibility_service.cumulative_curve(profile, 1)
    assert 1 not in accessibility_service.rank_peripherality(profile).areas


def test_cumulative_curve_steps(accessibility_service: AccessibilityService) -> None:
    curve = accessibility_service.cumulative_curve(_profile({0: [2.0, 4.0, 2.0]}), 0)

    assert curve(1.9) == 0.0
    assert curve(2.0) == pytest.approx(2 / 3)
    assert curve(3.0) == pytest.approx(2 / 3)
    assert curve(4.0) == 1.0


def test_single_node_curve_jumps_at_value(accessibility_service: AccessibilityService) -> None:
    curve = accessibility_service.cumulative_curve(_profile({0: [5.0]}), 0)

    assert curve(4.999) == 0.0
    assert curve(5.0) == 1.0


def test_curve_is_monotone(accessibility_service: AccessibilityService) -> None:
    rng = np.random.default_rng(0)
    curve = CumulativeCurve(community=0, values=np.sort(rng.uniform(1, 9, size=30)))

    _, fractions = curve.sample(0.0, 10.0, 101)

    assert (np.diff(fractions) >= 0).all()
    assert fractions[0] == 0.0
    assert fractions[-1] == 1.0


def test_area_at_minimum_is_one(accessibility_service: AccessibilityService) -> None:
    curve = CumulativeCurve(community=0, values=np.array([2.0, 2.0]))

    assert accessibility_service.peripherality_area(curve, (2.0, 5.0)) == 1.0


def test_area_at_maximum_is_zero(accessibility_service: AccessibilityService) -> None:
    curve = CumulativeCurve(community=0, values=np.array([5.0, 5.0, 5.0]))

    assert accessibility_service.peripherality_area(curve, (2.0, 5.0)) == 0.0


def test_degenerate_range_rejected(accessibility_service: AccessibilityService) -> None:
    curve = CumulativeCurve(community=0, values=np.array([3.0]))

    with pytest.raises(AccessibilityError):
        accessibility_service.peripherality_area(curve, (3.0, 3.0))


def test_area_matches_numeric_integration(accessibility_service: AccessibilityService) -> None:
    rng = np.random.default_rng(17)
    curve = CumulativeCurve(community=0, values=np.sort(rng.uniform(1.0, 8.0, size=25)))
    grid = np.linspace(1.0, 8.0, 200_001)

    area = accessibility_service.peripherality_area(curve, (1.0, 8.0))

    assert area == pytest.approx(float(np.mean(curve(grid))), abs=1e-4)


def test_lower_values_rank_more_peripheral(accessibility_service: AccessibilityService) -> None:
    profile = _profile({0: [6.0, 7.0, 8.0], 1: [2.0, 3.0, 4.0], 2: [4.0, 5.0, 6.0]})

    ranking = accessibility_service.rank_peripherality(profile)

    assert ranking.order == (1, 2, 0)
    assert ranking.areas[1] > ranking.areas[2] > ranking.areas[0]
    assert ranking.kappa_range == (2.0, 8.0)
    assert accessibility_service.fraction_at_or_below(profile, 1, 3.0) == pytest.approx(2 / 3)
