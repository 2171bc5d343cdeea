from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stagsearch.lattice import (
    LABELS,
    LatticeSpec,
    Vertex,
    build_tessellation,
    edge_cover_check,
    index_vertex,
    pair_indices,
    vertex_index,
)

sizes = st.integers(min_value=2, max_value=9)
labels = st.sampled_from(LABELS)


def test_lattice_spec_fields():
    lat = LatticeSpec(5)
    assert (lat.side, lat.num_vertices) == (10, 100)


@pytest.mark.parametrize("bad", [1, 0, -3])
def test_small_torus_rejected(bad):
    with pytest.raises(ValueError):
        LatticeSpec(bad)


def test_non_integer_n_rejected():
    with pytest.raises(TypeError):
        LatticeSpec(2.5)


def test_first_polygons():
    lat = LatticeSpec(2)
    t00 = build_tessellation(lat, "00")
    assert t00.polygons[0] == ((0, 0), (1, 0))
    t10 = build_tessellation(lat, "10")
    assert t10.polygons[0] == ((0, 0), (3, 0))


def test_unknown_label():
    with pytest.raises(ValueError):
        build_tessellation(LatticeSpec(2), "21")


@given(sizes, labels)
def test_polygons_partition_vertices(n, label):
    lat = LatticeSpec(n)
    tess = build_tessellation(lat, label)
    assert len(tess.polygons) == lat.num_vertices // 2
    seen = [v for p in tess.polygons for v in p]
    assert len(set(seen)) == lat.num_vertices


@given(sizes, labels)
def test_polygon_parity_and_adjacency(n, label):
    lat = LatticeSpec(n)
    s = lat.side
    for anchor, partner in build_tessellation(lat, label).polygons:
        assert anchor.parity == 0 and partner.parity == 1
        dx = min((anchor.x - partner.x) % s, (partner.x - anchor.x) % s)
        dy = min((anchor.y - partner.y) % s, (partner.y - anchor.y) % s)
        assert dx + dy == 1


@given(sizes, labels)
def test_build_is_deterministic(n, label):
    lat = LatticeSpec(n)
    assert build_tessellation(lat, label) == build_tessellation(lat, label)


@given(sizes, labels)
def test_pair_indices_match_polygons(n, label):
    lat = LatticeSpec(n)
    anchors, partners = pair_indices(lat, label)
    polys = build_tessellation(lat, label).polygons
    assert [vertex_index(p.anchor, lat) for p in polys] == anchors.tolist()
    assert [vertex_index(p.partner, lat) for p in polys] == partners.tolist()
    assert not anchors.flags.writeable


@pytest.mark.parametrize("n", [2, 3, 5])
def test_full_cover(n):
    lat = LatticeSpec(n)
    tess = [build_tessellation(lat, lb) for lb in LABELS]
    ok, missing = edge_cover_check(tess, lat)
    assert ok and missing == []
    # a 4-regular graph on N vertices has 2N edges, each covered once
    assert sum(len(t.polygons) for t in tess) == 2 * lat.num_vertices


def test_missing_tessellation_leaves_vertical_edges():
    lat = LatticeSpec(2)
    s = lat.side
    tess = [build_tessellation(lat, lb) for lb in ("00", "01", "10")]
    ok, missing = edge_cover_check(tess, lat)
    assert not ok
    expected = sorted(
        tuple(sorted((Vertex(x, y), Vertex(x, (y - 1) % s))))
        for x in range(s)
        for y in range(s)
        if (x + y) % 2 == 0
    )
    assert missing == expected


def test_duplicate_tessellation_still_covers():
    lat = LatticeSpec(2)
    tess = [build_tessellation(lat, lb) for lb in ("00", "00", "01", "10", "11")]
    assert edge_cover_check(tess, lat)[0]


def test_index_examples():
    lat = LatticeSpec(2)
    assert vertex_index((0, 0), lat) == 0
    assert vertex_index((1, 0), lat) == 1
    assert vertex_index((0, 1), lat) == 4


@given(sizes)
def test_index_round_trip(n):
    lat = LatticeSpec(n)
    for i in range(lat.num_vertices):
        assert vertex_index(index_vertex(i, lat), lat) == i


@pytest.mark.parametrize("v", [(-1, 0), (4, 0), (0, 4)])
def test_out_of_range_vertex(v):
    with pytest.raises(ValueError):
        vertex_index(v, LatticeSpec(2))
    with pytest.raises(ValueError):
        index_vertex(16, LatticeSpec(2))
