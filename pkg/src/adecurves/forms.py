"""Invariant symmetric tensors on the curve basis and their symmetry algebras.

The quadratic, cubic and quartic invariants live on index multisets whose
curve classes sum to a fixed target divisor (F, K' or 2K').  Coefficients
are solved from equivariance under the simple generator action and are
pinned to +1 on the lexicographically least support tuple; the solver
asserts the solution space is exactly one-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .curves import CurveSet, named_divisor, partner_index
from .lattice import DivisorClass
from .minrep import RepAction


class FormError(ValueError):
    pass


@dataclass
class FormTensor:
    degree: int
    target: DivisorClass
    coeff: dict[tuple[int, ...], Fraction]
    curves: CurveSet = field(repr=False)

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.coeff)

    def value(self, indices) -> Fraction:
        return self.coeff.get(tuple(sorted(indices)), Fraction(0))

    def is_sign_valued(self) -> bool:
        return all(abs(v) == 1 for v in self.coeff.values())

    def to_json(self) -> dict:
        entries = [
            {"tuple": [i + 1 for i in key], "sign": int(v) if v.denominator == 1 else str(v)}
            for key, v in sorted(self.coeff.items())
        ]
        return {"degree": self.degree, "target": [self.target.c0, *self.target.a], "entries": entries}


def trivial_form(cs: CurveSet) -> FormTensor:
    """Degree-0 placeholder for the A family, which has no invariant tensor."""
    return FormTensor(0, DivisorClass.zero(cs.lattice.rank), {(): Fraction(1)}, cs)


def quadratic_q(cs: CurveSet) -> FormTensor:
    """q(v_i, v_j) = l_i . l_j on the D_n standard set: 1 on partner pairs."""
    if cs.spec.family != "D" or cs.spec.node != 1:
        raise FormError("the intersection pairing form lives on the (D_n, node 1) set")
    coeff = {}
    for i in range(len(cs)):
        j = partner_index(cs, i)
        if i < j:
            coeff[(i, j)] = Fraction(1)
    return FormTensor(2, named_divisor(cs.spec, "F"), coeff, cs)


def support_multisets(cs: CurveSet, degree: int, target: DivisorClass) -> list[tuple[int, ...]]:
    """All nondecreasing index tuples whose classes sum to the target."""
    n = len(cs)
    if degree == 2:
        out = []
        for i in range(n):
            for j in range(i, n):
                if cs.curves[i] + cs.curves[j] == target:
                    out.append((i, j))
        return sorted(out)
    if degree == 3:
        out = []
        for i in range(n):
            for j in range(i, n):
                rest = target - cs.curves[i] - cs.curves[j]
                k = cs.index.get(rest)
                if k is not None and k >= j:
                    out.append((i, j, k))
        return sorted(out)
    if degree == 4:
        by_sum: dict[DivisorClass, list[tuple[int, int]]] = {}
        for i in range(n):
            for j in range(i, n):
                by_sum.setdefault(cs.curves[i] + cs.curves[j], []).append((i, j))
        out = set()
        for s, pairs in by_sum.items():
            rest = by_sum.get(target - s)
            if not rest:
                continue
            for i, j in pairs:
                for p, q in rest:
                    if (p, q) >= (i, j):
                        out.add(tuple(sorted((i, j, p, q))))
        return sorted(out)
    raise FormError(f"unsupported form degree {degree}")


def _shift_multiset(key: tuple[int, ...], pos: int, new: int) -> tuple[int, ...]:
    out = list(key)
    out[pos] = new
    return tuple(sorted(out))


def _invariance_rows(action: RepAction, keys: list[tuple[int, ...]], generators) -> list[dict]:
    """One row per (generator, shifted multiset): sum of signed form values."""
    key_set = set(keys)
    rows = {}
    for alpha, (targets, signs) in generators.items():
        back = {}
        for j in range(action.dim):
            if targets[j] >= 0:
                back[targets[j]] = j
        for key in keys:
            for pos, s in enumerate(key):
                if pos and key[pos] == key[pos - 1]:
                    continue
                j = back.get(s)
                if j is None:
                    continue
                m = _shift_multiset(key, pos, j)
                rows[(alpha, m)] = None
    out = []
    for (alpha, m) in rows:
        targets, signs = generators[alpha]
        row: dict[tuple[int, ...], int] = {}
        seen = set()
        for pos, i in enumerate(m):
            if i in seen:
                continue
            seen.add(i)
            mult = m.count(i)
            t = targets[i]
            if t < 0:
                continue
            shifted = _shift_multiset(m, m.index(i), t)
            if shifted in key_set:
                row[shifted] = row.get(shifted, 0) + mult * signs[i]
        row = {k: v for k, v in row.items() if v}
        if row:
            out.append(row)
    return out


def _simple_generators(action: RepAction) -> dict:
    n = action.curves.lattice.rank
    gens = {}
    for i in range(1, n + 1):
        c = DivisorClass.simple(i, n)
        gens[c] = action.generator(c)
        gens[-c] = action.generator(-c)
    return gens


def solve_invariant_form(action: RepAction, degree: int, target: DivisorClass) -> FormTensor:
    """Solve the equivariance system on the support multisets.

    Propagation from a seed value certifies the solution space is at most
    one-dimensional; the consistency of every remaining row certifies it is
    nonempty.  A stall falls back to dense elimination, whose nullity must
    then be one.
    """
    cs = action.curves
    keys = support_multisets(cs, degree, target)
    if not keys:
        raise FormError("empty support: no index tuples sum to the target")
    rows = _invariance_rows(action, keys, _simple_generators(action))

    values: dict[tuple[int, ...], Fraction] = {keys[0]: Fraction(1)}
    by_key: dict[tuple[int, ...], list[int]] = {}
    for r, row in enumerate(rows):
        for k in row:
            by_key.setdefault(k, []).append(r)
    pending = set(range(len(rows)))
    queue = [r for r in by_key.get(keys[0], [])]
    while queue:
        r = queue.pop()
        if r not in pending:
            continue
        row = rows[r]
        unknown = [k for k in row if k not in values]
        if len(unknown) > 1:
            continue
        pending.discard(r)
        if not unknown:
            if sum(c * values[k] for k, c in row.items()) != 0:
                raise FormError("invariance system is inconsistent (empty solution space)")
            continue
        k0 = unknown[0]
        rest = sum(Fraction(c) * values[k] for k, c in row.items() if k != k0)
        values[k0] = -rest / row[k0]
        queue.extend(by_key.get(k0, []))
        # rows that were skipped earlier may have become solvable
        queue.extend(r2 for k in row for r2 in by_key.get(k, []))

    if len(values) < len(keys):
        values = _dense_kernel(rows, keys)
    else:
        for r in pending:
            if sum(c * values[k] for k, c in rows[r].items()) != 0:
                raise FormError("invariance system is inconsistent (empty solution space)")

    scale = values[keys[0]]
    if scale == 0:
        raise FormError("degenerate normalisation: least support tuple vanishes")
    coeff = {k: v / scale for k, v in values.items() if v}
    return FormTensor(degree, target, coeff, cs)


def _dense_kernel(rows: list[dict], keys: list[tuple[int, ...]]) -> dict:
    index = {k: i for i, k in enumerate(keys)}
    mat = [[Fraction(0)] * len(keys) for _ in rows]
    for r, row in enumerate(rows):
        for k, c in row.items():
            mat[r][index[k]] = Fraction(c)
    pivots = {}
    r_used = 0
    for col in range(len(keys)):
        pivot_row = None
        for r in range(r_used, len(mat)):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[r_used], mat[pivot_row] = mat[pivot_row], mat[r_used]
        pv = mat[r_used][col]
        mat[r_used] = [x / pv for x in mat[r_used]]
        for r in range(len(mat)):
            if r != r_used and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[r_used])]
        pivots[col] = r_used
        r_used += 1
    free = [c for c in range(len(keys)) if c not in pivots]
    if len(free) != 1:
        raise FormError(f"invariance solution space has dimension {len(free)}, expected 1")
    sol = [Fraction(0)] * len(keys)
    sol[free[0]] = Fraction(1)
    for col, r in pivots.items():
        sol[col] = -mat[r][free[0]]
    return {k: sol[i] for i, k in enumerate(keys)}


@dataclass(frozen=True)
class AutReport:
    ok: bool
    rows_checked: int
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def verify_aut(action: RepAction, form: FormTensor) -> AutReport:
    """Equivariance of the solved tensor under every Chevalley basis element."""
    cs = action.curves
    keys = form.support
    if not keys:
        return AutReport(True, 0)
    # Cartan elements: the weight sum over each support tuple must vanish
    checked = 0
    for key in keys:
        total = [0] * cs.lattice.rank
        for i in key:
            w = cs.weight(i)
            total = [a + b for a, b in zip(total, w)]
        checked += 1
        if any(total):
            return AutReport(False, checked, ("h", key))
    generators = {a: action.generator(a) for a in action.constants.roots.all}
    rows = _invariance_rows(action, keys, generators)
    for row in rows:
        checked += 1
        if sum(Fraction(c) * form.coeff.get(k, Fraction(0)) for k, c in row.items()) != 0:
            return AutReport(False, checked, tuple(row))
    return AutReport(True, checked)


def aut_dimension(form: FormTensor, traceless: bool = False) -> int:
    """Dimension of the matrix algebra preserving the tensor.

    The endomorphism space is graded by the class difference of the matrix
    position, and the invariance system never couples different grades, so
    the kernel is computed block by block with exact elimination.
    """
    cs = form.curves
    n = len(cs)
    blocks: dict[DivisorClass, list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(n):
            blocks.setdefault(cs.curves[j] - cs.curves[i], []).append((j, i))

    if form.degree == 0:
        return n * n - (1 if traceless else 0)

    # equations indexed by multisets one step away from the support
    eq_keys: dict[tuple[int, ...], DivisorClass] = {}
    for key in form.support:
        for pos, s in enumerate(key):
            if pos and key[pos] == key[pos - 1]:
                continue
            for p in range(n):
                m = _shift_multiset(key, pos, p)
                if m not in eq_keys:
                    eq_keys[m] = cs.curves[s] - cs.curves[p]

    rows_by_delta: dict[DivisorClass, list[dict]] = {}
    for m, delta in eq_keys.items():
        row: dict[tuple[int, int], Fraction] = {}
        seen = set()
        for pos, i in enumerate(m):
            if i in seen:
                continue
            seen.add(i)
            mult = m.count(i)
            for (j, i2) in blocks.get(delta, ()):
                if i2 != i:
                    continue
                val = form.value(_shift_multiset(m, m.index(i), j))
                if val:
                    row[(j, i)] = row.get((j, i), Fraction(0)) + mult * val
        row = {k: v for k, v in row.items() if v}
        if row:
            rows_by_delta.setdefault(delta, []).append(row)

    total = 0
    zero = DivisorClass.zero(cs.lattice.rank)
    for delta, unknowns in blocks.items():
        rows = rows_by_delta.get(delta, [])
        if delta == zero and traceless:
            rows = rows + [{(i, i): Fraction(1) for i in range(n)}]
        total += len(unknowns) - _rank(rows, unknowns)
    return total


def _rank(rows: list[dict], unknowns: list[tuple[int, int]]) -> int:
    if not rows:
        return 0
    index = {u: i for i, u in enumerate(unknowns)}
    mat = []
    for row in rows:
        vec = [Fraction(0)] * len(unknowns)
        for k, v in row.items():
            vec[index[k]] = v
        mat.append(vec)
    rank = 0
    for col in range(len(unknowns)):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(unknowns):
            break
    return rank
