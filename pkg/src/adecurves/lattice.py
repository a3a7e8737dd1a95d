"""Integer intersection lattices for resolved ADE singularities.

The lattice is spanned by C_0 (the strict transform of a (-1)-curve through
the singular point) and the exceptional components C_1..C_n.  All pairings
are computed with the geometric intersection form; the Lie-theoretic inner
product is its negative and is exposed separately as ``cartan_pair``.

Node labelling convention (fixed throughout the package):

    A_n : chain C_1 - C_2 - ... - C_n
    D_n : chain C_1 - ... - C_{n-1}, with C_n attached to C_{n-2}
    E_n : chain C_1 - ... - C_{n-1}, with C_n attached to C_{n-3}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

FAMILIES = ("A", "D", "E")

# (family, rank) -> nodes whose dual fundamental weight is minuscule
_MINUSCULE_NODES = {
    ("E", 6): (1, 5),
    ("E", 7): (1,),
    ("E", 8): (),  # node 1 is accepted but flags the adjoint case
}


class LatticeError(ValueError):
    """Invalid (family, rank, node) data or malformed lattice input."""


@dataclass(frozen=True)
class DynkinSpec:
    """A simply-laced diagram together with the marked node C_k met by C_0."""

    family: str
    rank: int
    node: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise LatticeError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.family == "A" and self.rank < 1:
            raise LatticeError("A family needs rank >= 1")
        if self.family == "D" and self.rank < 4:
            raise LatticeError("D family needs rank >= 4")
        if self.family == "E" and self.rank not in (6, 7, 8):
            raise LatticeError("E family admits rank 6, 7 or 8 only")
        if not 1 <= self.node <= self.rank:
            raise LatticeError(f"node {self.node} out of range 1..{self.rank}")
        if self.family == "D" and self.node not in (1, self.rank - 1, self.rank):
            raise LatticeError(f"(D,{self.rank}) minuscule nodes are 1, {self.rank-1}, {self.rank}")
        if self.family == "E":
            allowed = _MINUSCULE_NODES[("E", self.rank)] + ((1,) if self.rank == 8 else ())
            if self.node not in allowed:
                raise LatticeError(f"(E,{self.rank}) admits nodes {sorted(set(allowed))} only")

    @property
    def is_adjoint(self) -> bool:
        """True for (E,8,1): the marked weight is the adjoint one, not minuscule."""
        return self.family == "E" and self.rank == 8

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, type_name: str, node: int = 1) -> "DynkinSpec":
        """Build from a string like 'E6' or 'D5' plus a node index."""
        type_name = type_name.strip()
        if len(type_name) < 2 or type_name[0].upper() not in FAMILIES:
            raise LatticeError(f"cannot parse Dynkin type {type_name!r}")
        try:
            rank = int(type_name[1:])
        except ValueError as exc:
            raise LatticeError(f"cannot parse Dynkin type {type_name!r}") from exc
        return cls(type_name[0].upper(), rank, node)


@dataclass(frozen=True)
class DivisorClass:
    """Integer class c0*[C_0] + sum a_i [C_i], coefficients unbounded."""

    c0: int
    a: tuple[int, ...]

    @staticmethod
    def make(c0: int, a: Iterable[int]) -> "DivisorClass":
        return DivisorClass(int(c0), tuple(int(x) for x in a))

    @staticmethod
    def zero(rank: int) -> "DivisorClass":
        return DivisorClass(0, (0,) * rank)

    @staticmethod
    def simple(i: int, rank: int) -> "DivisorClass":
        """The exceptional component C_i, 1-indexed."""
        if not 1 <= i <= rank:
            raise LatticeError(f"C_{i} out of range 1..{rank}")
        return DivisorClass(0, tuple(1 if j == i - 1 else 0 for j in range(rank)))

    @staticmethod
    def base(rank: int) -> "DivisorClass":
        """The class C_0 of the strict transform."""
        return DivisorClass(1, (0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.a)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.c0 + other.c0, tuple(x + y for x, y in zip(self.a, other.a, strict=True)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.c0 - other.c0, tuple(x - y for x, y in zip(self.a, other.a, strict=True)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.c0, tuple(-x for x in self.a))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.c0 * k, tuple(x * k for x in self.a))

    __rmul__ = __mul__

    def coefficients(self) -> tuple[int, ...]:
        return (self.c0,) + self.a

    def height(self) -> int:
        """Coefficient sum over the exceptional part only."""
        return sum(self.a)

    def __repr__(self):
        return f"DivisorClass({self.c0}; {list(self.a)})"


def _adjacency(family: str, rank: int) -> frozenset[tuple[int, int]]:
    edges = set()
    if family == "A":
        chain_end = rank
    elif family == "D":
        chain_end = rank - 1
        if rank >= 2:
            edges.add((rank - 2, rank))
    else:
        chain_end = rank - 1
        edges.add((rank - 3, rank))
    for i in range(1, chain_end):
        edges.add((i, i + 1))
    return frozenset(tuple(sorted(e)) for e in edges)


@dataclass(frozen=True)
class IntersectionLattice:
    """Gram matrix of (C_0, C_1..C_n) plus the diagram adjacency."""

    spec: DynkinSpec
    gram: tuple[tuple[int, ...], ...]
    adjacency: frozenset[tuple[int, int]]

    @property
    def rank(self) -> int:
        return self.spec.rank

    def basis(self) -> list[DivisorClass]:
        n = self.rank
        return [DivisorClass.base(n)] + [DivisorClass.simple(i, n) for i in range(1, n + 1)]

    def pair(self, d1: DivisorClass, d2: DivisorClass) -> int:
        """Geometric intersection number d1 . d2."""
        v = d1.coefficients()
        w = d2.coefficients()
        if len(v) != len(w) or len(v) != self.rank + 1:
            raise LatticeError("divisor class dimension mismatch")
        total = 0
        for i, vi in enumerate(v):
            if vi == 0:
                continue
            row = self.gram[i]
            total += vi * sum(row[j] * wj for j, wj in enumerate(w) if wj)
        return total

    def cartan_pair(self, d1: DivisorClass, d2: DivisorClass) -> int:
        """Lie-theoretic inner product: the negative of the intersection form."""
        return -self.pair(d1, d2)

    def k_degree(self, d: DivisorClass) -> int:
        """Pairing with the canonical class: K.C_i = 0 and K.C_0 = -1."""
        return -d.c0

    def norm(self, d: DivisorClass) -> int:
        return self.pair(d, d)

    def to_json(self) -> dict:
        return {
            "family": self.spec.family,
            "rank": self.spec.rank,
            "node": self.spec.node,
            "gram": [list(row) for row in self.gram],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_lattice(spec: DynkinSpec) -> IntersectionLattice:
    """Assemble the Gram matrix for the marked resolution lattice.

    C_i.C_i = -2, C_0.C_0 = -1, C_i.C_j = 1 on diagram edges and
    C_0.C_k = 1 at the marked node only.
    """
    n = spec.rank
    adj = _adjacency(spec.family, n)
    size = n + 1
    gram = [[0] * size for _ in range(size)]
    gram[0][0] = -1
    gram[0][spec.node] = gram[spec.node][0] = 1
    for i in range(1, size):
        gram[i][i] = -2
    for i, j in adj:
        gram[i][j] = gram[j][i] = 1
    lattice = IntersectionLattice(spec, tuple(tuple(row) for row in gram), adj)
    _check_exceptional_block_definite(lattice)
    return lattice


def _check_exceptional_block_definite(lattice: IntersectionLattice) -> None:
    """The C_1..C_n block must be negative definite (minus a Cartan matrix).

    The full Gram matrix including C_0 is not definite in general: for
    D_n at node 1 the fiber class 2C_0+2C_1+..+C_{n-1}+C_n is isotropic
    and orthogonal to the whole lattice, and the E-family lattices contain
    classes of positive square.  Only the exceptional block is checked;
    the curve and root enumerations work inside it and on the c0 = 1 slice.
    """
    block = [row[1:] for row in lattice.gram[1:]]
    for m in range(1, lattice.rank + 1):
        minor = _int_det([row[:m] for row in block[:m]])
        if minor * (-1) ** m <= 0:
            raise LatticeError(f"exceptional block not negative definite at minor {m}")


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a small integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def lattice_from_json(doc: dict) -> IntersectionLattice:
    spec = DynkinSpec(doc["family"], int(doc["rank"]), int(doc["node"]))
    lattice = build_lattice(spec)
    if doc.get("gram") is not None and [list(r) for r in lattice.gram] != [list(r) for r in doc["gram"]]:
        raise LatticeError("gram matrix in document disagrees with the labelling convention")
    return lattice
