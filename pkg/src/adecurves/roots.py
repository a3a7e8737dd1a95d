"""Enumeration of the norm -2 classes in the exceptional sublattice.

Roots are divisor classes with c0 = 0 and self-intersection -2.  Positive
roots are found by closure under adding simple classes, starting from the
C_i themselves; a bounded-box scan is kept alongside as an independent
oracle (see ``box_positive_roots``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .lattice import DivisorClass, IntersectionLattice, LatticeError


class RootError(ValueError):
    pass


@dataclass(frozen=True)
class RootSystem:
    lattice: IntersectionLattice
    positive: tuple[DivisorClass, ...]

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def all(self) -> tuple[DivisorClass, ...]:
        return self.positive + tuple(-a for a in self.positive)

    def __len__(self):
        return 2 * len(self.positive)

    def is_root(self, d: DivisorClass) -> bool:
        return d.c0 == 0 and self.lattice.norm(d) == -2

    def is_positive(self, d: DivisorClass) -> bool:
        return self.is_root(d) and all(x >= 0 for x in d.a)

    def simple(self, i: int) -> DivisorClass:
        return DivisorClass.simple(i, self.rank)

    def highest(self) -> DivisorClass:
        return self.positive[-1]

    def to_json(self) -> list[list[int]]:
        return [list(a.a) for a in self.positive]


def root_sort_key(d: DivisorClass) -> tuple:
    return (sum(d.a), d.a)


def enumerate_roots(lattice: IntersectionLattice) -> RootSystem:
    """All positive roots by closure: keep alpha + C_i whenever its norm is -2.

    Every positive root of height >= 2 drops to a positive root after
    subtracting some simple class, so upward closure from the simples is
    exhaustive.
    """
    n = lattice.rank
    simples = [DivisorClass.simple(i, n) for i in range(1, n + 1)]
    found = set(simples)
    frontier = list(simples)
    while frontier:
        alpha = frontier.pop()
        for c in simples:
            beta = alpha + c
            if beta not in found and lattice.norm(beta) == -2:
                found.add(beta)
                frontier.append(beta)
    positive = tuple(sorted(found, key=root_sort_key))
    return RootSystem(lattice, positive)


def box_positive_roots(lattice: IntersectionLattice, cap: int = 7) -> tuple[DivisorClass, ...]:
    """Oracle: scan all coefficient vectors in [0, cap]^n for norm -2.

    Exhaustive for the simply-laced families at desk scale since no positive
    root coefficient exceeds 6.  Uses a vectorised scan so that E8 (8^8
    candidates) stays cheap.
    """
    import numpy as np

    n = lattice.rank
    gram = np.array([row[1:] for row in lattice.gram[1:]], dtype=np.int64)
    vals = np.arange(cap + 1, dtype=np.int64)
    hits = []
    # chunk over the first three coordinates to bound memory
    head = min(n, 3)
    tail = n - head
    tail_grid = np.stack(np.meshgrid(*([vals] * tail), indexing="ij"), axis=-1).reshape(-1, tail) if tail else np.zeros((1, 0), dtype=np.int64)
    for lead in product(range(cap + 1), repeat=head):
        block = np.concatenate([np.broadcast_to(np.array(lead, dtype=np.int64), (tail_grid.shape[0], head)), tail_grid], axis=1)
        norms = np.einsum("ij,jk,ik->i", block, gram, block)
        for row in block[norms == -2]:
            hits.append(DivisorClass.make(0, row.tolist()))
    return tuple(sorted(hits, key=root_sort_key))


def height(rs: RootSystem, alpha: DivisorClass) -> int:
    """Coefficient sum of a positive root."""
    if not rs.is_positive(alpha):
        raise RootError(f"{alpha!r} is not a positive root")
    return sum(alpha.a)


def alpha_string(rs: RootSystem, beta: DivisorClass, alpha: DivisorClass) -> tuple[int, int]:
    """Largest (r, q) with beta - r*alpha ... beta + q*alpha all roots."""
    if beta == alpha or beta == -alpha:
        raise RootError("alpha-string undefined for beta = +/-alpha")
    if not (rs.is_root(alpha) and rs.is_root(beta)):
        raise RootError("alpha-string arguments must be roots")
    members = set(rs.all)
    r = 0
    while (beta - (r + 1) * alpha) in members:
        r += 1
    q = 0
    while (beta + (q + 1) * alpha) in members:
        q += 1
    return (r, q)


_ROOT_COUNTS = {"A": lambda n: n * (n + 1), "D": lambda n: 2 * n * (n - 1), "E": {6: 72, 7: 126, 8: 240}.get}


def expected_root_count(family: str, rank: int) -> int:
    count = _ROOT_COUNTS[family](rank)
    if count is None:
        raise LatticeError(f"no root count for {family}{rank}")
    return count
