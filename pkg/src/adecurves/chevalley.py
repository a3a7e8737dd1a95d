"""Chevalley structure constants n(alpha, beta) = +/-1 and the Lie bracket.

Sign gauge: positive roots are totally ordered by (height, lexicographic
coefficients).  For every non-simple positive gamma the pair (alpha, beta)
with alpha + beta = gamma and alpha minimal gets n(alpha, beta) = +1; every
other value is forced from these through antisymmetry, the sign flip under
negation, the rotation rule for alpha + beta + gamma = 0, and the Jacobi
identity.  ``verify_jacobi`` re-checks the three-term identity afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import DivisorClass
from .roots import RootSystem


class ChevalleyError(ValueError):
    pass


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    checked: int
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


@dataclass
class StructureConstants:
    roots: RootSystem
    special: dict[tuple[DivisorClass, DivisorClass], int]
    _members: frozenset[DivisorClass] = field(repr=False, default=None)
    _pos_index: dict[DivisorClass, int] = field(repr=False, default=None)

    def __post_init__(self):
        if self._members is None:
            object.__setattr__(self, "_members", frozenset(self.roots.all))
        if self._pos_index is None:
            object.__setattr__(self, "_pos_index", {a: i for i, a in enumerate(self.roots.positive)})

    def is_root(self, d: DivisorClass) -> bool:
        return d in self._members

    def n(self, x: DivisorClass, y: DivisorClass) -> int:
        """Structure constant of [x_x, x_y]; zero unless x, y, x + y are all roots."""
        if x not in self._members or y not in self._members:
            return 0
        s = x + y
        if s not in self._members:
            return 0
        xpos = x in self._pos_index
        ypos = y in self._pos_index
        if xpos and ypos:
            if self._pos_index[x] < self._pos_index[y]:
                return self.special[(x, y)]
            return -self.special[(y, x)]
        if not xpos and not ypos:
            return -self.n(-x, -y)
        # mixed signs: rotate around x + y + z = 0 towards a same-sign pair
        z = -s
        if xpos:
            if s in self._pos_index:
                return self.n(y, z)  # y, z both negative
            return self.n(z, x)  # z, x both positive
        if s in self._pos_index:
            return self.n(z, x)  # z, x both negative
        return self.n(y, z)  # y, z both positive

    def table(self) -> dict[tuple[DivisorClass, DivisorClass], int]:
        """Full antisymmetric table over all root pairs with root sum."""
        out = {}
        for a in self.roots.all:
            for b in self.roots.all:
                v = self.n(a, b)
                if v:
                    out[(a, b)] = v
        return out

    def sum_partners(self, alpha: DivisorClass) -> list[DivisorClass]:
        return [b for b in self.roots.all if alpha + b in self._members]

    def to_json(self) -> list[dict]:
        rows = []
        for (a, b), v in sorted(self.special.items(), key=lambda kv: (kv[0][0].a, kv[0][1].a)):
            rows.append({"alpha": list(a.a), "beta": list(b.a), "sign": v})
        return rows


def compute_structure_constants(rs: RootSystem) -> StructureConstants:
    members = frozenset(rs.all)
    pos_index = {a: i for i, a in enumerate(rs.positive)}
    sc = StructureConstants(rs, {}, members, pos_index)
    for gamma in rs.positive:
        pairs = []
        for alpha in rs.positive:
            beta = gamma - alpha
            if beta in pos_index and pos_index[alpha] < pos_index[beta]:
                pairs.append((alpha, beta))
        if not pairs:
            continue
        pairs.sort(key=lambda p: pos_index[p[0]])
        a1, b1 = pairs[0]
        sc.special[(a1, b1)] = 1
        for alpha, beta in pairs[1:]:
            # Jacobi identity on (alpha, beta, -a1); the total a+b-a1 = b1 is a
            # root, so the term through gamma never vanishes and solves for
            # n(alpha, beta).
            t2 = sc.n(beta, -a1) * sc.n(beta - a1, alpha)
            t3 = sc.n(-a1, alpha) * sc.n(alpha - a1, beta)
            total = t2 + t3
            if abs(total) != 1:
                raise ChevalleyError(f"inconsistent propagation at {(alpha, beta)}: {t2}+{t3}")
            sc.special[(alpha, beta)] = -total * sc.n(gamma, -a1)
    return sc


@dataclass(frozen=True)
class LieElement:
    """h-part coefficients over h_1..h_n plus a finitely supported root part."""

    h: tuple[Fraction, ...]
    coeff: tuple[tuple[DivisorClass, Fraction], ...]

    @staticmethod
    def make(rank: int, h=None, coeff=None) -> "LieElement":
        hv = tuple(Fraction(x) for x in (h or [0] * rank))
        cv = tuple(sorted(((r, Fraction(c)) for r, c in (coeff or {}).items() if c), key=lambda rc: rc[0].a))
        return LieElement(hv, cv)

    @staticmethod
    def cartan(i: int, rank: int) -> "LieElement":
        return LieElement.make(rank, h=[1 if j == i - 1 else 0 for j in range(rank)])

    @staticmethod
    def root_vector(alpha: DivisorClass, rank: int) -> "LieElement":
        return LieElement.make(rank, coeff={alpha: 1})

    def coeff_dict(self) -> dict[DivisorClass, Fraction]:
        return dict(self.coeff)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.h) and not self.coeff

    def __add__(self, other: "LieElement") -> "LieElement":
        d = self.coeff_dict()
        for r, c in other.coeff:
            d[r] = d.get(r, Fraction(0)) + c
        return LieElement.make(len(self.h), [a + b for a, b in zip(self.h, other.h)], d)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-1) * other

    def __rmul__(self, k) -> "LieElement":
        k = Fraction(k)
        return LieElement.make(len(self.h), [k * x for x in self.h], {r: k * c for r, c in self.coeff})


def bracket(sc: StructureConstants, x: LieElement, y: LieElement) -> LieElement:
    """Bilinear extension of the Chevalley relations.

    [h_i, x_a] scales by the Cartan pairing (negative intersection) and
    [x_a, x_{-a}] = h_a with h_a the coefficient vector of a.
    """
    lat = sc.roots.lattice
    rank = lat.rank
    h_out = [Fraction(0)] * rank
    c_out: dict[DivisorClass, Fraction] = {}

    def add_root(r, c):
        if c:
            c_out[r] = c_out.get(r, Fraction(0)) + c

    for alpha, ca in x.coeff:
        for i in range(rank):
            if y.h[i]:
                add_root(alpha, -y.h[i] * ca * lat.cartan_pair(alpha, DivisorClass.simple(i + 1, rank)))
    for beta, cb in y.coeff:
        for i in range(rank):
            if x.h[i]:
                add_root(beta, x.h[i] * cb * lat.cartan_pair(beta, DivisorClass.simple(i + 1, rank)))
    for alpha, ca in x.coeff:
        for beta, cb in y.coeff:
            if alpha + beta == DivisorClass.zero(rank):
                for i in range(rank):
                    h_out[i] += ca * cb * alpha.a[i]
            else:
                s = sc.n(alpha, beta)
                if s:
                    add_root(alpha + beta, s * ca * cb)
    return LieElement.make(rank, h_out, c_out)


class _IndexedConstants:
    """Integer-indexed views of the root list and the n table, for tight loops."""

    def __init__(self, sc: StructureConstants):
        self.roots = list(sc.roots.all)
        index = {a: i for i, a in enumerate(self.roots)}
        self.neg = [index[-a] for a in self.roots]
        m = len(self.roots)
        self.sum_idx = [[-1] * m for _ in range(m)]
        self.n_val = [[0] * m for _ in range(m)]
        self.partners = [[] for _ in range(m)]
        for i, a in enumerate(self.roots):
            for j, b in enumerate(self.roots):
                s = index.get(a + b)
                if s is not None:
                    self.sum_idx[i][j] = s
                    self.n_val[i][j] = sc.n(a, b)
                    self.partners[i].append(j)

    def triple(self, i, j, k) -> int:
        total = 0
        ij = self.sum_idx[i][j]
        if ij >= 0:
            total += self.n_val[i][j] * self.n_val[ij][k]
        jk = self.sum_idx[j][k]
        if jk >= 0:
            total += self.n_val[j][k] * self.n_val[jk][i]
        ki = self.sum_idx[k][i]
        if ki >= 0:
            total += self.n_val[k][i] * self.n_val[ki][j]
        return total


def verify_jacobi(sc: StructureConstants, exhaustive: bool = True, samples: int = 100_000, seed: int = 0) -> JacobiReport:
    """Three-term cocycle identity over root triples.

    Runs over all triples where the first term is nonzero (every triple with
    any nonzero term is a cyclic rotation of such a one) while excluding the
    degenerate configurations with a vanishing pairwise or total sum, where
    the identity picks up Cartan terms instead.
    """
    ix = _IndexedConstants(sc)
    neg = ix.neg
    checked = 0
    if exhaustive:
        for i in range(len(ix.roots)):
            ni = neg[i]
            for j in ix.partners[i]:
                ij = ix.sum_idx[i][j]
                nij = neg[ij]
                nj = neg[j]
                for k in ix.partners[ij]:
                    if k == ni or k == nj or k == nij:
                        continue
                    checked += 1
                    if ix.triple(i, j, k) != 0:
                        return JacobiReport(False, checked, (ix.roots[i], ix.roots[j], ix.roots[k]))
        return JacobiReport(True, checked)

    rng = random.Random(seed)
    pairs = [(i, j) for i in range(len(ix.roots)) for j in ix.partners[i]]
    if not pairs:
        return JacobiReport(True, 0)
    attempts = 0
    while checked < samples and attempts < 50 * samples:
        attempts += 1
        i, j = pairs[rng.randrange(len(pairs))]
        ij = ix.sum_idx[i][j]
        cand = ix.partners[ij]
        if not cand:
            continue
        k = cand[rng.randrange(len(cand))]
        if k == neg[i] or k == neg[j] or k == neg[ij]:
            continue
        checked += 1
        if ix.triple(i, j, k) != 0:
            return JacobiReport(False, checked, (ix.roots[i], ix.roots[j], ix.roots[k]))
    return JacobiReport(True, checked)


def algebra_dimension(rs: RootSystem) -> int:
    return len(rs.all) + rs.rank
