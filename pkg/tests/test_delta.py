"""Semi-simplex combinatorics against brute-force oracles: binomial
counts, exhaustive associativity, face-decomposition round-trips, and
boundary-cell tallies."""

import pytest

from tt2.delta import (
    Cell, DomainMismatch, MonoMap, binomial, boundary_cells, coface,
    compose, enumerate_mono, face_decompose, identity, recompose,
)


def test_compose_examples():
    d = MonoMap(1, 2, (0, 2))
    assert compose(identity(2), d) == d
    d1 = MonoMap(2, 3, (0, 2, 3))
    e = MonoMap(0, 2, (1,))
    assert compose(d1, e) == MonoMap(0, 3, (2,))


def test_compose_requires_matching_objects():
    with pytest.raises(DomainMismatch):
        compose(MonoMap(2, 3, (0, 1, 2)), MonoMap(0, 1, (1,)))


def test_enumerate_counts_match_binomial():
    for n in range(7):
        for k in range(n + 1):
            maps = enumerate_mono(k, n)
            assert len(maps) == binomial(n + 1, k + 1)
            assert maps == sorted(maps, key=lambda m: m.images)
            assert len(set(m.images for m in maps)) == len(maps)
    assert enumerate_mono(3, 1) == []


def test_enumerate_examples():
    assert len(enumerate_mono(0, 3)) == 4   # points of the tetrahedron boundary
    assert len(enumerate_mono(1, 3)) == 6   # lines
    assert len(enumerate_mono(2, 3)) == 4   # triangles
    assert enumerate_mono(2, 2) == [identity(2)]


def test_compose_associative_and_unital_exhaustively():
    sizes = range(5)  # dom, cod <= 4
    for n in sizes:
        for m in sizes:
            for f in enumerate_mono(n, m):
                assert compose(identity(m), f) == f
                assert compose(f, identity(n)) == f
    for a in range(5):
        for b in range(5):
            for c in range(5):
                for d in range(5):
                    for f in enumerate_mono(a, b):
                        for g in enumerate_mono(b, c):
                            for h in enumerate_mono(c, d):
                                assert compose(h, compose(g, f)) == compose(compose(h, g), f)


def test_face_decompose_examples():
    assert face_decompose(identity(3)) == []
    assert face_decompose(MonoMap(0, 1, (0,))) == [1]
    assert face_decompose(MonoMap(1, 3, (0, 2))) == [3, 1]


def test_face_decompose_brute_force_oracle():
    # oracle: try every decreasing coface sequence of the right length
    from itertools import combinations

    for cod in range(4):
        for dom in range(cod + 1):
            for f in enumerate_mono(dom, cod):
                length = cod - dom
                matches = []
                for indices in combinations(range(cod + 1), length):
                    candidate = sorted(indices, reverse=True)
                    if recompose(dom, cod, candidate) == f:
                        matches.append(candidate)
                assert matches == [face_decompose(f)]


def test_face_decompose_round_trip_exhaustive():
    for cod in range(6):  # cod <= 5
        for dom in range(cod + 1):
            for f in enumerate_mono(dom, cod):
                assert recompose(dom, cod, face_decompose(f)) == f


def test_boundary_cells_counts():
    assert boundary_cells(0) == []
    cells2 = boundary_cells(2)
    assert [c.dim for c in cells2] == [0, 0, 0, 1, 1, 1]
    cells3 = boundary_cells(3)
    assert len(cells3) == 14
    assert [sum(1 for c in cells3 if c.dim == k) for k in range(3)] == [4, 6, 4]
    for n in range(7):
        cells = boundary_cells(n)
        assert len(cells) == 2 ** (n + 1) - 2
        for k in range(n):
            assert sum(1 for c in cells if c.dim == k) == binomial(n + 1, k + 1)


def test_boundary_cells_order_is_dimension_major_lex_minor():
    cells = boundary_cells(3)
    dims = [c.dim for c in cells]
    assert dims == sorted(dims)
    for k in range(3):
        group = [c.vertices for c in cells if c.dim == k]
        assert group == sorted(group)


def test_cell_subcell():
    c = Cell((1, 3, 5))
    assert c.subcell((0, 2)) == Cell((1, 5))
    assert c.dim == 2


def test_coface_validation():
    assert coface(2, 1) == MonoMap(1, 2, (0, 2))
    with pytest.raises(ValueError):
        coface(2, 3)
    with pytest.raises(ValueError):
        MonoMap(1, 1, (1, 0))
    with pytest.raises(ValueError):
        MonoMap(1, 0, (0, 1))
