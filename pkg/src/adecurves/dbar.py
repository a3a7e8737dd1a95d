"""Formal exterior calculus in anticommuting symbols indexed by positive
roots, and the structure checks on the deformed connection matrices.

A symbol phi_a stands for the (0,1)-form solving the height-(a) step of the
deformation; analysis is replaced by the rewrite rule

    d phi_a = - sum over unordered {b,c}, b+c=a, of n(b,c) phi_b ^ phi_c,

so squared-operator identities reduce to sign bookkeeping: the expansion of
(d + A)^2 with A = sum phi_a M_a is zero exactly when the M_a represent the
positive root vectors, which is the Jacobi identity in matrix form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chevalley import StructureConstants
from .curves import CurveSet
from .lattice import DivisorClass
from .minrep import RepAction


class DbarError(ValueError):
    pass


def _canonical(mono: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sort a symbol monomial, tracking the permutation parity; repeats kill it."""
    mono = tuple(mono)
    if len(set(mono)) != len(mono):
        return ((), 0)
    order = sorted(range(len(mono)), key=mono.__getitem__)
    inversions = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
    return (tuple(sorted(mono)), -1 if inversions % 2 else 1)


@dataclass
class FormalPolyForm:
    """Graded polynomial in the root symbols with integer matrix coefficients.

    Monomials are stored in canonical ascending index order; adding a term in
    any order folds in the anticommutation sign.  Scalar-coefficient forms
    use 0-d arrays.
    """

    npos: int
    terms: dict[tuple[int, ...], np.ndarray] = field(default_factory=dict)

    def add_term(self, mono, coeff) -> "FormalPolyForm":
        key, sign = _canonical(mono)
        if sign == 0:
            return self
        arr = np.asarray(coeff, dtype=np.int64) * sign
        if key in self.terms:
            self.terms[key] = self.terms[key] + arr
            if not self.terms[key].any():
                del self.terms[key]
        elif arr.any():
            self.terms[key] = arr
        return self

    def __add__(self, other: "FormalPolyForm") -> "FormalPolyForm":
        out = FormalPolyForm(self.npos, {k: v.copy() for k, v in self.terms.items()})
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def wedge(self, other: "FormalPolyForm") -> "FormalPolyForm":
        out = FormalPolyForm(self.npos)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if c1.ndim == 2 and c2.ndim == 2:
                    coeff = _exact_matmul(c1, c2)
                else:
                    coeff = c1 * c2
                out.add_term(m1 + m2, coeff)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degree_part(self, d: int) -> "FormalPolyForm":
        return FormalPolyForm(self.npos, {k: v for k, v in self.terms.items() if len(k) == d})

    def max_abs(self) -> int:
        return max((int(np.abs(v).max()) for v in self.terms.values()), default=0)


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer product through BLAS; all entries stay far below 2^53."""
    bound = a.shape[1] * int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0))
    if bound >= 2**53:
        return a @ b
    out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return out


def d_generator(alpha: DivisorClass, sc: StructureConstants) -> FormalPolyForm:
    """The rewrite d phi_alpha as a scalar-coefficient degree-2 form."""
    positive = sc.roots.positive
    index = {a: i for i, a in enumerate(positive)}
    if alpha not in index:
        raise DbarError(f"{alpha!r} is not a positive root")
    out = FormalPolyForm(len(positive))
    for i, beta in enumerate(positive):
        gamma = alpha - beta
        j = index.get(gamma)
        if j is not None and j > i:
            out.add_term((i, j), np.asarray(-sc.n(beta, gamma), dtype=np.int64))
    return out


def differential(form: FormalPolyForm, sc: StructureConstants) -> FormalPolyForm:
    """Extend the generator rewrite as an anti-derivation on scalar forms."""
    positive = sc.roots.positive
    out = FormalPolyForm(form.npos)
    for mono, coeff in form.terms.items():
        for pos, idx in enumerate(mono):
            dphi = d_generator(positive[idx], sc)
            sign = -1 if pos % 2 else 1
            for dm, dc in dphi.terms.items():
                out.add_term(mono[:pos] + dm + mono[pos + 1 :], coeff * dc * sign)
    return out


def adjoint_matrices(sc: StructureConstants) -> dict[DivisorClass, np.ndarray]:
    """ad(x_alpha) over the basis (h_1..h_n, x_beta in root order)."""
    rs = sc.roots
    n = rs.rank
    roots = list(rs.all)
    offset = {a: n + i for i, a in enumerate(roots)}
    dim = n + len(roots)
    lat = rs.lattice
    out = {}
    for alpha in roots:
        m = np.zeros((dim, dim), dtype=np.int64)
        row_alpha = offset[alpha]
        for i in range(n):
            m[row_alpha, i] = -lat.cartan_pair(alpha, DivisorClass.simple(i + 1, n))
        for beta in roots:
            col = offset[beta]
            if beta == -alpha:
                for i in range(n):
                    m[i, col] = alpha.a[i]
            else:
                s = sc.n(alpha, beta)
                if s:
                    m[offset[alpha + beta], col] = s
        out[alpha] = m
    return out


def rep_matrices(action: RepAction) -> dict[DivisorClass, np.ndarray]:
    out = {}
    for alpha in action.constants.roots.all:
        targets, signs = action.generator(alpha)
        m = np.zeros((action.dim, action.dim), dtype=np.int64)
        for j, t in enumerate(targets):
            if t >= 0:
                m[t, j] = signs[j]
        out[alpha] = m
    return out


@dataclass(frozen=True)
class NilpotenceReport:
    ok: bool
    monomials: int
    residue_norms: dict
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def nilpotence_check(sc: StructureConstants, matrices: dict[DivisorClass, np.ndarray]) -> NilpotenceReport:
    """(d + A)^2 = dA + A^A must vanish monomial by monomial.

    The degree-2 coefficient at phi_b ^ phi_c (b < c) is the commutator
    [M_b, M_c] minus n(b,c) M_{b+c}; the check streams over the pairs so the
    full expansion is never materialised.
    """
    positive = list(sc.roots.positive)
    index = {a: i for i, a in enumerate(positive)}
    checked = 0
    worst = 0
    for i, beta in enumerate(positive):
        mb = matrices[beta]
        for j in range(i + 1, len(positive)):
            gamma = positive[j]
            mc = matrices[gamma]
            residue = _exact_matmul(mb, mc) - _exact_matmul(mc, mb)
            s = index.get(beta + gamma)
            if s is not None:
                residue = residue - sc.n(beta, gamma) * matrices[positive[s]]
            checked += 1
            m = int(np.abs(residue).max(initial=0))
            worst = max(worst, m)
            if m:
                return NilpotenceReport(False, checked, {"max_residue": m}, (beta, gamma))
    return NilpotenceReport(True, checked, {"max_residue": worst})


def nilpotence_small(sc: StructureConstants, matrices: dict[DivisorClass, np.ndarray]) -> FormalPolyForm:
    """Full formal expansion dA + A^A; zero iff nilpotent.  Small ranks only."""
    positive = list(sc.roots.positive)
    total = FormalPolyForm(len(positive))
    a_form = FormalPolyForm(len(positive))
    for i, alpha in enumerate(positive):
        a_form.add_term((i,), matrices[alpha])
    total = total + a_form.wedge(a_form)
    for i, alpha in enumerate(positive):
        for mono, c in d_generator(alpha, sc).terms.items():
            total.add_term(mono, np.asarray(matrices[alpha], dtype=np.int64) * int(c))
    return total


@dataclass(frozen=True)
class EtaEntry:
    root: DivisorClass
    sign: int


@dataclass
class EtaMatrix:
    """Strictly upper-triangular matrix of signed root symbols (0-based keys)."""

    curves: CurveSet
    entries: dict[tuple[int, int], EtaEntry]

    @property
    def size(self) -> int:
        return len(self.curves)

    def to_json(self) -> list[dict]:
        return [
            {"i": i + 1, "j": j + 1, "root": list(e.root.a), "sign": e.sign}
            for (i, j), e in sorted(self.entries.items())
        ]

    def entries_with_root(self, root: DivisorClass) -> list[tuple[int, int, int]]:
        return sorted((i, j, e.sign) for (i, j), e in self.entries.items() if e.root == root)


def eta_from_rep(cs: CurveSet, action: RepAction) -> EtaMatrix:
    """Entry (i, j) = n(alpha, w_j) phi_alpha where l_i = l_j + alpha."""
    entries = {}
    for alpha in action.constants.roots.positive:
        targets, signs = action.generator(alpha)
        for j, t in enumerate(targets):
            if t < 0:
                continue
            if t >= j:
                raise DbarError(f"ordering violation: positive step from {j + 1} lands at {t + 1}")
            entries[(t, j)] = EtaEntry(alpha, signs[j])
    return EtaMatrix(cs, entries)


def eta_root_profile(eta: EtaMatrix) -> dict[DivisorClass, tuple[int, int]]:
    """Per positive root: (count of +1 entries, count of -1 entries)."""
    prof: dict[DivisorClass, list[int]] = {}
    for e in eta.entries.values():
        c = prof.setdefault(e.root, [0, 0])
        c[0 if e.sign > 0 else 1] += 1
    return {r: (c[0], c[1]) for r, c in prof.items()}


@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    rows_checked: int
    partner_antisymmetric: bool | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok and self.partner_antisymmetric is not False


def form_compatibility_check(eta: EtaMatrix, form) -> CompatibilityReport:
    """The symbolic Leibniz sum of the tensor along eta vanishes.

    Grouped per positive root the condition is linear in the eta signs; for
    the D_n standard set it is additionally reported as the partner relation
    eta[i,j] = -eta[N-1-j, N-1-i].
    """
    cs = eta.curves
    by_root: dict[DivisorClass, list[tuple[int, int, int]]] = {}
    for (i, j), e in eta.entries.items():
        by_root.setdefault(e.root, []).append((i, j, e.sign))

    checked = 0
    keys = set(form.coeff)
    for root, entries in sorted(by_root.items(), key=lambda kv: kv[0].a):
        # rows indexed by multisets reached by moving one slot down along root
        rows: dict[tuple[int, ...], int] = {}
        for key in keys:
            for pos, s in enumerate(key):
                if pos and key[pos] == key[pos - 1]:
                    continue
                for (i, j, sign) in entries:
                    if i != s:
                        continue
                    m = list(key)
                    m[pos] = j
                    rows[tuple(sorted(m))] = 1
        for m in sorted(rows):
            total = 0
            seen = set()
            for pos, i in enumerate(m):
                if i in seen:
                    continue
                seen.add(i)
                mult = m.count(i)
                for (t, j, sign) in entries:
                    if j != i:
                        continue
                    shifted = list(m)
                    shifted[m.index(i)] = t
                    total += mult * sign * form.value(shifted)
            checked += 1
            if total != 0:
                return CompatibilityReport(False, checked, None, (root, m))

    partner = None
    if cs.spec.family == "D" and cs.spec.node == 1:
        N = len(cs)
        partner = True
        for (i, j), e in eta.entries.items():
            mirror = eta.entries.get((N - 1 - j, N - 1 - i))
            if mirror is None or mirror.root != e.root or mirror.sign != -e.sign:
                partner = False
                break
    return CompatibilityReport(True, checked, partner)


@dataclass(frozen=True)
class BlockShapeReport:
    component: int
    pairs: list[tuple[int, int]]
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def block_shape_check(eta: EtaMatrix, k: int) -> BlockShapeReport:
    """Shape of the C_k-labelled entries.

    Checks that the degree-(+1) curves at C_k are exactly matched by the
    pairing entries, that each pairing entry carries the root C_k with a
    nonzero sign, and that no entry connects the target of one pair with the
    source of a different pair (the zero-pattern needed for the staircase
    trivialization argument holds in this strongest form).
    """
    cs = eta.curves
    n = cs.lattice.rank
    ck = DivisorClass.simple(k, n)
    pairs = []
    for j, l in enumerate(cs.curves):
        t = cs.index.get(l + ck)
        if t is not None:
            pairs.append((t, j))
    pairs.sort()
    for (t, j) in pairs:
        e = eta.entries.get((t, j))
        if e is None or e.root != ck or e.sign not in (-1, 1):
            return BlockShapeReport(k, pairs, False, ("missing or wrong pairing entry", t + 1, j + 1))
    for (ta, sa) in pairs:
        for (tb, sb) in pairs:
            if ta != tb and (ta, sb) in eta.entries:
                return BlockShapeReport(k, pairs, False, ("cross-pair entry", ta + 1, sb + 1))
    return BlockShapeReport(k, pairs, True)
