import pytest

from adecurves.chevalley import compute_structure_constants
from adecurves.curves import enumerate_curves
from adecurves.lattice import DivisorClass, DynkinSpec, build_lattice
from adecurves.minrep import build_action, verify_module, weyl_transitivity
from adecurves.roots import enumerate_roots


def make_action(family, rank, node):
    lat = build_lattice(DynkinSpec(family, rank, node))
    rs = enumerate_roots(lat)
    sc = compute_structure_constants(rs)
    cs = enumerate_curves(lat)
    return build_action(cs, sc)


ACTIONS = {}


def cached_action(family, rank, node):
    key = (family, rank, node)
    if key not in ACTIONS:
        ACTIONS[key] = make_action(*key)
    return ACTIONS[key]


@pytest.mark.parametrize(
    "family,rank,node",
    [("A", 1, 1), ("A", 2, 1), ("A", 3, 2), ("A", 4, 2), ("D", 4, 1), ("D", 4, 4), ("D", 5, 1), ("D", 5, 5), ("E", 6, 1)],
)
def test_module_axioms_exhaustive(family, rank, node):
    action = cached_action(family, rank, node)
    report = verify_module(action)
    assert report.ok, report.witness
    assert report.pairs_checked > 0


def test_lowest_weight_annihilated():
    action = cached_action("E", 6, 1)
    n = action.curves.lattice.rank
    base = action.dim - 1
    for i in range(1, n + 1):
        targets, signs = action.generator(-DivisorClass.simple(i, n))
        assert targets[base] == -1 and signs[base] == 0


def test_cartan_eigenvalues_match_pairing():
    action = cached_action("D", 4, 4)
    lat = action.curves.lattice
    for i in range(1, 5):
        eig = action.cartan_eigenvalues(i)
        for j, l in enumerate(action.curves):
            assert eig[j] == lat.cartan_pair(l, DivisorClass.simple(i, 4))
    base_weight = action.weight(action.dim - 1)
    assert base_weight == tuple(-1 if i == 4 else 0 for i in range(1, 5))


def test_double_application_annihilates():
    # |l . alpha| <= 1 means acting twice by the same root vector gives zero
    action = cached_action("A", 4, 2)
    for alpha in action.constants.roots.all:
        targets, signs = action.generator(alpha)
        for j in range(action.dim):
            t = targets[j]
            if t >= 0:
                assert targets[t] == -1


def test_composite_generator_consistency():
    # (A2, node 1): the height-2 generator equals the bracket composition
    action = cached_action("A", 2, 1)
    c1, c2 = DivisorClass.simple(1, 2), DivisorClass.simple(2, 2)
    sc = action.constants
    hi = action.generator(c1 + c2)
    base = action.dim - 1
    t, s = hi[0][base], hi[1][base]
    assert t == action.curves.index[DivisorClass.make(1, [1, 1])]
    assert s in (-1, 1)
    # x_{c2} kills the base vector, so the commutator reduces to -x2 x1
    assert action.apply(c2, base) == (-1, 0)
    t1, s1 = action.apply(c1, base)
    t2, s2 = action.apply(c2, t1)
    assert (t2, sc.n(c1, c2) * (-1) * s1 * s2) == (t, s)


def test_mutated_sign_fails_with_witness():
    # flipping a single edge inside a commuting square is not a gauge change
    from adecurves.minrep import _orthogonal_squares

    action = make_action("A", 3, 2)
    square = _orthogonal_squares(action.curves)[0]
    key = square[0]
    action.simple_signs[key] = -action.simple_signs[key]
    action._gen_cache.clear()
    report = verify_module(action)
    assert not report.ok
    assert report.witness is not None


def test_faithful_on_spanning_set():
    # no Chevalley basis element acts as zero, and distinct root vectors act
    # with distinct supports on the standard cases
    for key in [("A", 3, 1), ("D", 4, 1), ("E", 6, 1)]:
        action = cached_action(*key)
        seen = {}
        for alpha in action.constants.roots.all:
            targets, signs = action.generator(alpha)
            support = tuple((j, targets[j], signs[j]) for j in range(action.dim) if targets[j] >= 0)
            assert support, f"x_{alpha} acts as zero"
            assert support not in seen, f"x_{alpha} and x_{seen[support]} act identically"
            seen[support] = alpha


@pytest.mark.parametrize(
    "family,rank,node,orbit",
    [("D", 4, 4, 8), ("E", 6, 1, 27), ("A", 5, 3, 20)],
)
def test_weyl_orbit_sizes(family, rank, node, orbit):
    report = weyl_transitivity(cached_action(family, rank, node))
    assert report.covers_all and report.minuscule
    assert report.orbit_size == orbit


def test_weyl_e8_adjoint_flagged():
    report = weyl_transitivity(cached_action("E", 8, 1))
    assert report.covers_all  # nonzero weights form one orbit
    assert not report.minuscule
    assert "zero weights" in report.note
    assert not report


def test_dn_gauge_keeps_module_valid():
    action = cached_action("D", 5, 1)
    assert verify_module(action).ok
    # partner antisymmetry of the simple signs after normalisation
    N = action.dim
    n = 5
    for (i, a), s in action.simple_signs.items():
        b = action.simple_target(i, a)
        mirror = (i, N - 1 - b)
        assert mirror in action.simple_signs
        assert action.simple_signs[mirror] == -s


def test_sign_table_export():
    action = cached_action("A", 2, 1)
    rows = action.sign_table()
    assert all(set(r) == {"alpha", "curve", "sign"} for r in rows)
    assert all(r["sign"] in (-1, 1) for r in rows)
    trips = action.matrix_triplets(DivisorClass.simple(1, 2))
    assert all(len(t) == 3 for t in trips)
