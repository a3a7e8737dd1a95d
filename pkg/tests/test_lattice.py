import json
import random

import pytest

from adecurves.lattice import (
    DivisorClass,
    DynkinSpec,
    LatticeError,
    build_lattice,
    lattice_from_json,
)

DESK_SPECS = (
    [("A", n, 1) for n in range(1, 9)]
    + [("D", n, 1) for n in range(4, 9)]
    + [("D", n, n) for n in range(4, 9)]
    + [("E", 6, 1), ("E", 7, 1), ("E", 8, 1)]
)


def test_a3_node1_gram_entries():
    lat = build_lattice(DynkinSpec("A", 3, 1))
    c0 = DivisorClass.base(3)
    c1 = DivisorClass.simple(1, 3)
    c2 = DivisorClass.simple(2, 3)
    assert lat.pair(c0, c1) == 1
    assert lat.pair(c1, c2) == 1
    assert lat.pair(c0, c2) == 0


def test_d4_node4_adjacency():
    lat = build_lattice(DynkinSpec("D", 4, 4))
    c4 = DivisorClass.simple(4, 4)
    c0 = DivisorClass.base(4)
    for i in (1, 3):
        assert lat.pair(c4, DivisorClass.simple(i, 4)) == 0
    assert lat.pair(c4, DivisorClass.simple(2, 4)) == 1
    assert lat.pair(c0, c4) == 1


def test_e8_branch_node():
    lat = build_lattice(DynkinSpec("E", 8, 1))
    c8 = DivisorClass.simple(8, 8)
    assert lat.pair(c8, DivisorClass.simple(5, 8)) == 1
    assert sum(1 for i in range(1, 8) if lat.pair(c8, DivisorClass.simple(i, 8)) == 1) == 1
    # the shifted anticanonical class of the adjoint configuration is a root:
    # its exceptional part has norm -2
    kp = DivisorClass.make(0, [2, 3, 4, 5, 6, 4, 2, 3])
    assert lat.norm(kp) == -2


def test_pair_examples():
    lat = build_lattice(DynkinSpec("A", 2, 1))
    c1 = DivisorClass.simple(1, 2)
    c0 = DivisorClass.base(2)
    zero = DivisorClass.zero(2)
    assert lat.pair(c1, c1) == -2
    assert lat.pair(zero, c0) == 0
    assert lat.pair(c0, c0) == -1


def test_k_degree():
    lat = build_lattice(DynkinSpec("A", 3, 1))
    c0 = DivisorClass.base(3)
    assert lat.k_degree(c0) == -1
    assert lat.k_degree(DivisorClass.simple(1, 3) + DivisorClass.simple(2, 3)) == 0
    assert lat.k_degree(2 * c0 + DivisorClass.simple(3, 3)) == -2


@pytest.mark.parametrize("family,rank,node", DESK_SPECS)
def test_gram_restricts_to_negative_cartan(family, rank, node):
    lat = build_lattice(DynkinSpec(family, rank, node))
    # diagonal -2, adjacency 1, zero elsewhere; exactly rank-1 edges (trees)
    edges = 0
    for i in range(1, rank + 1):
        for j in range(1, rank + 1):
            v = lat.gram[i][j]
            if i == j:
                assert v == -2
            else:
                assert v in (0, 1)
                edges += v
    assert edges == 2 * (rank - 1) if rank > 1 else edges == 0
    # C_0 row: self -1, meets the marked node only
    assert lat.gram[0][0] == -1
    assert [lat.gram[0][j] for j in range(1, rank + 1)] == [1 if j == node else 0 for j in range(1, rank + 1)]


@pytest.mark.parametrize("family,rank,node", DESK_SPECS)
def test_exceptional_block_negative_definite(family, rank, node):
    lat = build_lattice(DynkinSpec(family, rank, node))
    rng = random.Random(12345)
    for _ in range(400):
        v = DivisorClass.make(0, [rng.randint(-5, 5) for _ in range(rank)])
        if all(x == 0 for x in v.a):
            continue
        assert lat.pair(v, v) < 0


def test_full_gram_not_definite_in_general():
    # the fiber class is radical for (D_n, node 1); K' has positive square on E6
    lat = build_lattice(DynkinSpec("D", 4, 1))
    f = DivisorClass.make(2, [2, 2, 1, 1])
    assert lat.pair(f, f) == 0
    basis = lat.basis()
    assert all(lat.pair(f, b) == 0 for b in basis)
    late6 = build_lattice(DynkinSpec("E", 6, 1))
    kp = DivisorClass.make(3, [4, 5, 6, 4, 2, 3])
    assert late6.pair(kp, kp) == 3


def test_pair_symmetric_bilinear():
    lat = build_lattice(DynkinSpec("E", 6, 1))
    rng = random.Random(7)
    for _ in range(50):
        u, v, w = (
            DivisorClass.make(rng.randint(-3, 3), [rng.randint(-3, 3) for _ in range(6)])
            for _ in range(3)
        )
        assert lat.pair(u, v) == lat.pair(v, u)
        assert lat.pair(u + w, v) == lat.pair(u, v) + lat.pair(w, v)
        assert lat.pair(3 * u, v) == 3 * lat.pair(u, v)


@pytest.mark.parametrize(
    "family,rank,node",
    [("E", 5, 1), ("E", 9, 1), ("D", 3, 1), ("A", 0, 1), ("A", 3, 4), ("D", 5, 2), ("E", 6, 3), ("E", 7, 2), ("E", 8, 2), ("B", 3, 1)],
)
def test_invalid_specs_rejected(family, rank, node):
    with pytest.raises(LatticeError):
        DynkinSpec(family, rank, node)


def test_minuscule_node_table():
    for n in range(1, 9):
        for k in range(1, n + 1):
            DynkinSpec("A", n, k)
    for n in range(4, 9):
        for k in (1, n - 1, n):
            DynkinSpec("D", n, k)
    DynkinSpec("E", 6, 5)
    assert DynkinSpec("E", 8, 1).is_adjoint
    assert not DynkinSpec("E", 7, 1).is_adjoint


def test_json_roundtrip():
    lat = build_lattice(DynkinSpec("D", 5, 5))
    doc = json.loads(lat.dumps())
    again = lattice_from_json(doc)
    assert again.gram == lat.gram
    assert again.spec == lat.spec


def test_parse():
    assert DynkinSpec.parse("E6").name == "E6"
    assert DynkinSpec.parse("d5", 5).node == 5
    with pytest.raises(LatticeError):
        DynkinSpec.parse("X4")
