from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class KeywordDistanceMatrix:
    """Average topological distance between keyword pairs.

    ``values`` holds NaN where no reachable paper pair exists; ``pair_counts``
    is the number of reachable ordered paper pairs behind each average.
    """

    keywords: tuple[str, ...]
    values: np.ndarray
    pair_counts: np.ndarray

    @cached_property
    def index(self) -> dict[str, int]:
        return {keyword: position for position, keyword in enumerate(self.keywords)}

    def distance(self, u: str, v: str) -> float | None:
        value = self.values[self.index[u], self.index[v]]
        return None if np.isnan(value) else float(value)

    @property
    def undefined_pairs(self) -> list[tuple[str, str]]:
        rows, cols = np.nonzero(np.isnan(self.values))
        return [
            (self.keywords[i], self.keywords[j])
            for i, j in zip(rows, cols, strict=True)
            if i < j
        ]


@dataclass(frozen=True)
class Merge:
    """One agglomeration step. Node ids follow the linkage-matrix convention:
    leaves are 0..n-1 and the merge at step s creates node n + s."""

    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]
    violations: tuple[int, ...] = field(default=())

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    @property
    def root(self) -> int:
        return 2 * self.n_leaves - 2

    @property
    def root_height(self) -> float:
        return self.merges[-1].height if self.merges else 0.0

    def children(self, node: int) -> tuple[int, int] | None:
        if node < self.n_leaves:
            return None
        merge = self.merges[node - self.n_leaves]
        return merge.left, merge.right

    def height(self, node: int) -> float:
        return 0.0 if node < self.n_leaves else self.merges[node - self.n_leaves].height

    def leaf_names(self, node: int) -> tuple[str, ...]:
        stack = [node]
        names = []
        while stack:
            current = stack.pop()
            pair = self.children(current)
            if pair is None:
                names.append(self.leaves[current])
            else:
                stack.extend(pair)
        return tuple(sorted(names))

    def linkage_matrix(self) -> np.ndarray:
        """scipy.cluster.hierarchy linkage layout: ``[left, right, height, size]`` rows."""
        return np.array(
            [[m.left, m.right, m.height, m.size] for m in self.merges], dtype=np.float64
        ).reshape(-1, 4)


@dataclass(frozen=True)
class KeywordGroups:
    threshold: float
    groups: tuple[tuple[str, ...], ...]

    @cached_property
    def group_of(self) -> dict[str, int]:
        return {keyword: g for g, members in enumerate(self.groups) for keyword in members}


@dataclass(frozen=True)
class GroupAssignment:
    """Paper -> group label; ``None`` marks unassigned papers (no match or a tie)."""

    assignment: dict[str, int | None]
    match_counts: dict[str, tuple[int, ...]]

    @property
    def assigned(self) -> int:
        return sum(1 for group in self.assignment.values() if group is not None)

    @property
    def unassigned(self) -> int:
        return len(self.assignment) - self.assigned

    def group_sizes(self, n_groups: int) -> tuple[int, ...]:
        sizes = [0] * n_groups
        for group in self.assignment.values():
            if group is not None:
                sizes[group] += 1
        return tuple(sizes)
