"""Enumeration of the (-1)-curve set above the marked node, with its
ordering, filtration, intersection configuration and special divisors.

A curve in the set has c0 = 1, nonnegative exceptional coefficients,
self-intersection -1 and canonical degree -1.  The set is produced by BFS
upward from C_0 itself: whenever l . C_i = 1 the class l + C_i is again a
member, and every member of positive height descends by some simple class,
so the closure is complete.

Ordering: strictly non-increasing height, ties broken by descending
lexicographic coefficient vector.  This pins the index conventions used by
the deformation matrices and the descent reports.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .lattice import DivisorClass, DynkinSpec, IntersectionLattice, LatticeError, build_lattice


class CurveError(ValueError):
    pass


def special_divisors(spec: DynkinSpec) -> dict[str, DivisorClass]:
    """The distinguished classes F (D_n, node 1) and H, K' (E family)."""
    n = spec.rank
    out: dict[str, DivisorClass] = {}
    if spec.family == "D" and spec.node == 1:
        out["F"] = DivisorClass.make(2, [2] * (n - 2) + [1, 1])
    if spec.family == "E":
        if n == 6:
            out["H"] = DivisorClass.make(3, [3, 3, 3, 2, 1, 1])
            out["K'"] = DivisorClass.make(3, [4, 5, 6, 4, 2, 3])
        elif n == 7:
            out["H"] = DivisorClass.make(3, [3, 3, 3, 3, 2, 1, 1])
            out["K'"] = DivisorClass.make(2, [3, 4, 5, 6, 4, 2, 3])
        elif n == 8:
            out["H"] = DivisorClass.make(3, [3, 3, 3, 3, 3, 2, 1, 1])
            out["K'"] = DivisorClass.make(1, [2, 3, 4, 5, 6, 4, 2, 3])
    return out


def named_divisor(spec: DynkinSpec, name: str) -> DivisorClass:
    table = special_divisors(spec)
    if name not in table:
        raise CurveError(f"divisor {name!r} is not defined for {spec.name} node {spec.node}")
    return table[name]


def _bfs_cap(spec: DynkinSpec) -> tuple[int, ...]:
    """Per-coordinate safety bound on curve coefficients.

    For the E family this is twice the K' coefficient, which dominates
    (highest root) + K'; for A and D a uniform rank-proportional cap is
    used since no K' is defined there.  The bound is a guard against a
    malformed Gram matrix, it is never attained by a valid enumeration.
    """
    n = spec.rank
    if spec.family == "E":
        kp = named_divisor(spec, "K'")
        return tuple(2 * x for x in kp.a)
    if spec.family == "A":
        return (n + 1,) * n
    return (2 * n,) * n


@dataclass(frozen=True)
class CurveSet:
    """Ordered curve classes l_1..l_N (stored 0-based, reported 1-based)."""

    lattice: IntersectionLattice
    curves: tuple[DivisorClass, ...]
    index: dict[DivisorClass, int] = field(repr=False, default=None)

    def __post_init__(self):
        if self.index is None:
            object.__setattr__(self, "index", {l: i for i, l in enumerate(self.curves)})

    @property
    def spec(self) -> DynkinSpec:
        return self.lattice.spec

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def __contains__(self, d: DivisorClass) -> bool:
        return d in self.index

    def special(self) -> dict[str, DivisorClass]:
        return special_divisors(self.spec)

    def pair(self, i: int, j: int) -> int:
        return self.lattice.pair(self.curves[i], self.curves[j])

    def heights(self) -> list[int]:
        return [l.height() for l in self.curves]

    def filtration(self) -> list[list[int]]:
        """Nested layers: layer i holds the indices with height <= max - i."""
        m = self.curves[0].height()
        return [[i for i, l in enumerate(self.curves) if l.height() <= m - step] for step in range(m + 1)]

    def weight(self, i: int) -> tuple[int, ...]:
        """Cartan pairings of l_i with the simple classes (the weight of v_i)."""
        l = self.curves[i]
        n = self.lattice.rank
        return tuple(self.lattice.cartan_pair(l, DivisorClass.simple(k, n)) for k in range(1, n + 1))

    def to_json(self) -> dict:
        return {
            "family": self.spec.family,
            "rank": self.spec.rank,
            "node": self.spec.node,
            "count": len(self.curves),
            "curves": [{"index": i + 1, "c0": l.c0, "a": list(l.a), "ht": l.height()} for i, l in enumerate(self.curves)],
        }

    def intersection_dot(self) -> str:
        lines = ["graph curves {"]
        for i in range(len(self.curves)):
            lines.append(f"  {i + 1};")
        for i in range(len(self.curves)):
            for j in range(i + 1, len(self.curves)):
                v = self.pair(i, j)
                if v:
                    lines.append(f"  {i + 1} -- {j + 1} [label={v}];")
        lines.append("}")
        return "\n".join(lines)


def dynkin_dot(lattice: IntersectionLattice) -> str:
    lines = ["graph dynkin {"]
    for i in range(1, lattice.rank + 1):
        mark = ' [shape=doublecircle]' if i == lattice.spec.node else ""
        lines.append(f"  C{i}{mark};")
    for i, j in sorted(lattice.adjacency):
        lines.append(f"  C{i} -- C{j};")
    lines.append("}")
    return "\n".join(lines)


def curve_order_key(l: DivisorClass) -> tuple:
    return (-l.height(), tuple(-x for x in l.a))


def enumerate_curves(lattice: IntersectionLattice, pair: Callable[[DivisorClass, DivisorClass], int] | None = None) -> CurveSet:
    """BFS closure from C_0 under l -> l + C_i whenever l . C_i = 1.

    In the adjoint case (E8) pairings of +/-2 occur; there the string through
    l in the C_i direction skips one non-curve class, so a pairing of 2 steps
    by 2C_i instead.  Minuscule sets never trigger the double step.
    """
    spec = lattice.spec
    n = lattice.rank
    if pair is None:
        pair = lattice.pair
    cap = _bfs_cap(spec)
    simples = [DivisorClass.simple(i, n) for i in range(1, n + 1)]
    start = DivisorClass.base(n)
    found = {start}
    frontier = [start]
    while frontier:
        l = frontier.pop()
        for i, c in enumerate(simples):
            p = pair(l, c)
            if p == 1:
                m = l + c
            elif p == 2:
                m = l + c + c
            else:
                continue
            if m in found:
                continue
            if m.a[i] > cap[i]:
                raise CurveError(f"coefficient overflow at {m!r}: BFS cap {cap} exceeded")
            found.add(m)
            frontier.append(m)
    ordered = tuple(sorted(found, key=curve_order_key))
    return CurveSet(lattice, ordered)


def curve_set(spec: DynkinSpec) -> CurveSet:
    return enumerate_curves(build_lattice(spec))


def expected_curve_count(spec: DynkinSpec) -> int:
    from math import comb

    n = spec.rank
    if spec.family == "A":
        return comb(n + 1, spec.node)
    if spec.family == "D":
        return 2 * n if spec.node == 1 else 2 ** (n - 1)
    return {6: 27, 7: 56, 8: 240}[n]


def intersection_profile(cs: CurveSet) -> list[Counter]:
    """Per curve, the multiset of pairings with the other curves."""
    out = []
    for i in range(len(cs)):
        c = Counter()
        for j in range(len(cs)):
            if j != i:
                c[cs.pair(i, j)] += 1
        out.append(c)
    return out


def triangles(cs: CurveSet) -> list[tuple[int, int, int]]:
    """Index triples (0-based, increasing) whose classes sum to K'."""
    if cs.spec.family != "E" or cs.spec.rank != 6 or cs.spec.node != 1:
        raise CurveError("triangles are defined for the (E6, node 1) configuration")
    kprime = named_divisor(cs.spec, "K'")
    out = []
    nn = len(cs)
    for i in range(nn):
        for j in range(i + 1, nn):
            rest = kprime - cs.curves[i] - cs.curves[j]
            k = cs.index.get(rest)
            if k is not None and k > j:
                out.append((i, j, k))
    return sorted(out)


def quadrangles(cs: CurveSet) -> list[tuple[int, int, int, int]]:
    """Index quadruples of distinct curves whose classes sum to 2K'."""
    if cs.spec.family != "E" or cs.spec.rank != 7 or cs.spec.node != 1:
        raise CurveError("quadrangles are defined for the (E7, node 1) configuration")
    target = 2 * named_divisor(cs.spec, "K'")
    nn = len(cs)
    by_sum: dict[DivisorClass, list[tuple[int, int]]] = {}
    for i in range(nn):
        for j in range(i + 1, nn):
            by_sum.setdefault(cs.curves[i] + cs.curves[j], []).append((i, j))
    quads = set()
    for s, pairs in by_sum.items():
        rest = by_sum.get(target - s)
        if not rest:
            continue
        for i, j in pairs:
            for p, q in rest:
                idx = (i, j, p, q)
                if len(set(idx)) == 4:
                    quads.add(tuple(sorted(idx)))
    return sorted(quads)


def partner_index(cs: CurveSet, i: int) -> int:
    """For the (D_n, node 1) set: the unique j with l_i . l_j = 1, l_i + l_j = F."""
    if cs.spec.family != "D" or cs.spec.node != 1:
        raise CurveError("partner pairing is defined for the (D_n, node 1) configuration")
    f = named_divisor(cs.spec, "F")
    j = cs.index.get(f - cs.curves[i])
    if j is None:
        raise CurveError(f"curve {i + 1} has no F-partner")
    return j


def verify_minuscule_pairings(cs: CurveSet, roots) -> bool:
    """|l . alpha| <= 1 for every curve and root (fails for the adjoint E8 set)."""
    lat = cs.lattice
    return all(abs(lat.pair(l, a)) <= 1 for l in cs.curves for a in roots.positive)
