from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np


def community_letter(label: int) -> str:
    """Spreadsheet-style display name: 0 -> A, 25 -> Z, 26 -> AA."""
    name = ""
    label += 1
    while label > 0:
        label, remainder = divmod(label - 1, 26)
        name = chr(ord("A") + remainder) + name
    return name


@dataclass(frozen=True)
class CommunityPartition:
    """Non-overlapping assignment of every network node to a dense label.

    Labels run 0..C-1 in decreasing community size.
    """

    ids: tuple[str, ...]
    labels: np.ndarray
    q: float
    seed: int | None = None
    levels: int = 0

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(int(size) for size in np.bincount(self.labels, minlength=self.n_communities))

    @cached_property
    def assignment(self) -> dict[str, int]:
        return {node_id: int(label) for node_id, label in zip(self.ids, self.labels, strict=True)}

    def members(self, label: int) -> tuple[str, ...]:
        return tuple(self.ids[i] for i in np.flatnonzero(self.labels == label))

    def letter(self, label: int) -> str:
        return community_letter(label)


@dataclass(frozen=True)
class CoarseEdge:
    alpha: int
    beta: int
    count: int
    weight: Fraction


@dataclass(frozen=True)
class CoarseGraph:
    """Community-level quotient graph.

    ``counts[a, b]`` is E_ab for a != b and the intra-community edge count on the
    diagonal. ``W_ab = E_ab / (|a| |b|)`` is defined off the diagonal only.
    """

    sizes: tuple[int, ...]
    counts: np.ndarray

    @property
    def n_communities(self) -> int:
        return len(self.sizes)

    def internal_edges(self, alpha: int) -> int:
        return int(self.counts[alpha, alpha])

    def weight(self, alpha: int, beta: int) -> Fraction:
        if alpha == beta:
            return Fraction(0)
        return Fraction(int(self.counts[alpha, beta]), self.sizes[alpha] * self.sizes[beta])

    def edges(self, *, include_empty: bool = False) -> list[CoarseEdge]:
        result = []
        for alpha in range(self.n_communities):
            for beta in range(alpha + 1, self.n_communities):
                count = int(self.counts[alpha, beta])
                if count or include_empty:
                    result.append(CoarseEdge(alpha, beta, count, self.weight(alpha, beta)))
        return result
