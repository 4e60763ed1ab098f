import numpy as np
import structlog
from scipy import sparse
from scipy.special import entr

from src.core.errors import AccessibilityError, IsolatedNodeError
from src.models.accessibility import AccessibilityProfile, CumulativeCurve, PeripheralityRanking
from src.models.community import CommunityPartition
from src.models.network import CitationNetwork

logger = structlog.get_logger()

_SOURCE_BATCH = 256


def _check_walk_length(h: int) -> None:
    if h < 1:
        msg = "walk length h must be at least 1"
        raise AccessibilityError(msg)


class AccessibilityService:
    """Random-walk accessibility: exp of the entropy of h-step visiting probabilities."""

    def transition_matrix(self, network: CitationNetwork) -> sparse.csr_array:
        """Uniform walk, P_ij = 1/deg(i) for each neighbour j; rows of isolated nodes are empty."""
        degrees = network.degrees.astype(np.float64)
        inverse = np.divide(1.0, degrees, out=np.zeros_like(degrees), where=degrees > 0)
        return sparse.csr_array(sparse.diags_array(inverse) @ network.topology)

    def walk_probabilities(self, network: CitationNetwork, source: str, h: int) -> dict[str, float]:
        _check_walk_length(h)
        position = network.index_of(source)
        if network.degrees[position] == 0:
            raise IsolatedNodeError(source)
        row = self._walk_block(self.transition_matrix(network), [position], h)[0]
        return {network.ids[j]: float(row[j]) for j in np.flatnonzero(row)}

    def accessibility(self, network: CitationNetwork, source: str, h: int = 3) -> float:
        _check_walk_length(h)
        position = network.index_of(source)
        if network.degrees[position] == 0:
            logger.warning("Accessibility of an isolated node reported as 0", node=source)
            return 0.0
        block = self._walk_block(self.transition_matrix(network), [position], h)
        return float(np.exp(entr(block).sum(axis=1))[0])

    def accessibility_profile(
        self, network: CitationNetwork, partition: CommunityPartition, h: int = 3
    ) -> AccessibilityProfile:
        _check_walk_length(h)
        transition = self.transition_matrix(network)
        kappa = np.zeros(network.n_nodes)
        active = np.flatnonzero(network.degrees > 0)
        for start in range(0, active.size, _SOURCE_BATCH):
            batch = active[start : start + _SOURCE_BATCH]
            block = self._walk_block(transition, batch.tolist(), h)
            kappa[batch] = np.exp(entr(block).sum(axis=1))
        isolated = network.n_nodes - active.size
        if isolated:
            logger.warning("Isolated nodes left out of accessibility curves", count=isolated)
        logger.info("Accessibility computed", nodes=network.n_nodes, h=h)
        return AccessibilityProfile(ids=network.ids, kappa=kappa, h=h, labels=partition.labels)

    def cumulative_curve(self, profile: AccessibilityProfile, community: int) -> CumulativeCurve:
        values = profile.community_values(community)
        if values.size == 0:
            msg = f"community {community} has no non-isolated nodes"
            raise AccessibilityError(msg)
        return CumulativeCurve(community=community, values=values)

    def peripherality_area(self, curve: CumulativeCurve, kappa_range: tuple[float, float]) -> float:
        """Area under F over the global kappa range, normalised to [0, 1]."""
        lower, upper = kappa_range
        if not upper > lower:
            msg = f"degenerate accessibility range [{lower}, {upper}]"
            raise AccessibilityError(msg)
        clipped = np.clip(curve.values, lower, upper)
        return float(np.mean((upper - clipped) / (upper - lower)))

    def rank_peripherality(self, profile: AccessibilityProfile) -> PeripheralityRanking:
        kappa_range = profile.global_range
        areas: dict[int, float] = {}
        for community in range(profile.n_communities):
            if profile.community_values(community).size == 0:
                continue
            curve = self.cumulative_curve(profile, community)
            areas[community] = self.peripherality_area(curve, kappa_range)
        order = tuple(sorted(areas, key=lambda c: (-areas[c], c)))
        return PeripheralityRanking(areas=areas, order=order, kappa_range=kappa_range)

    def fraction_at_or_below(
        self, profile: AccessibilityProfile, community: int, threshold: float
    ) -> float:
        return float(self.cumulative_curve(profile, community)(threshold))

    @staticmethod
    def _walk_block(transition: sparse.csr_array, sources: list[int], h: int) -> np.ndarray:
        block = np.zeros((len(sources), transition.shape[0]))
        block[np.arange(len(sources)), sources] = 1.0
        transposed = sparse.csr_array(transition.T)
        for _ in range(h):
            block = (transposed @ block.T).T
        return np.ascontiguousarray(block)
