import pytest

from burstqec.geometry import anchor_to_lattice, build_geometry, lattice_to_anchor


@pytest.mark.parametrize("d", [3, 5, 7, 9])
@pytest.mark.parametrize("species", ["Z", "X"])
def test_anchor_lattice_roundtrip(d, species):
    geom = build_geometry(d)
    for anchor in geom.ancillas(species):
        uv = anchor_to_lattice(anchor, species)
        assert lattice_to_anchor(uv, species) == anchor


@pytest.mark.parametrize("d", [3, 5, 7])
def test_ancilla_counts(d):
    geom = build_geometry(d)
    assert len(geom.ancillas("Z")) == (d * d - 1) // 2
    assert len(geom.ancillas("X")) == (d * d - 1) // 2


@pytest.mark.parametrize("d", [3, 5, 7])
@pytest.mark.parametrize("species", ["Z", "X"])
def test_depth_matches_boundary_axis(d, species):
    # u + v recovers the anchor coordinate along the species' boundary axis:
    # row for Z (defects absorb top/bottom), column for X (left/right).
    for i, j in build_geometry(d).ancillas(species):
        u, v = anchor_to_lattice((i, j), species)
        assert u + v == (i if species == "Z" else j)
        assert 0 <= u + v <= d - 2


@pytest.mark.parametrize("d", [3, 5, 7])
def test_species_partition(d):
    geom = build_geometry(d)
    z = set(geom.ancillas("Z"))
    x = set(geom.ancillas("X"))
    assert not z & x
    assert all((i + j) % 2 == 0 for i, j in z)
    assert all((i + j) % 2 == 1 for i, j in x)


@pytest.mark.parametrize("d", [3, 5, 7])
@pytest.mark.parametrize("species", ["Z", "X"])
def test_supports_touch_two_or_four_data(d, species):
    geom = build_geometry(d)
    for supp in geom.supports(species):
        assert len(supp) in (2, 4)
        for r, c in supp:
            assert 0 <= r < d and 0 <= c < d


def test_logical_supports():
    geom = build_geometry(5)
    assert geom.logical_z_support == [(0, j) for j in range(5)]
    assert geom.logical_x_support == [(i, 0) for i in range(5)]


@pytest.mark.parametrize("d", [3, 5])
@pytest.mark.parametrize("species", ["Z", "X"])
def test_each_data_on_at_most_two_stabilizers(d, species):
    geom = build_geometry(d)
    counts = {}
    for supp in geom.supports(species):
        for q in supp:
            counts[q] = counts.get(q, 0) + 1
    assert max(counts.values()) <= 2
    assert set(counts) == {(i, j) for i in range(d) for j in range(d)}
