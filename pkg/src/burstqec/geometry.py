"""Rotated surface-code layout.

Data qubits live on a d x d integer grid.  Stabilizer plaquettes are anchored
at their top-left data coordinate (i, j) and act on the (up to four) data
qubits (i, j), (i+1, j), (i, j+1), (i+1, j+1) that fall inside the grid.
Z-type plaquettes detect X/Y errors and X-type plaquettes detect Z/Y errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field


Coord = tuple[int, int]


@dataclass(frozen=True)
class CodeGeometry:
    """Immutable layout of a distance-d rotated surface code."""

    d: int
    data_sites: list[Coord]
    z_ancillas: list[Coord]          # anchors of Z-type plaquettes
    x_ancillas: list[Coord]          # anchors of X-type plaquettes
    z_supports: list[tuple[Coord, ...]]
    x_supports: list[tuple[Coord, ...]]
    logical_z_support: list[Coord]   # data row 0
    logical_x_support: list[Coord]   # data column 0
    # Which boundary pair absorbs unmatched defects of each species:
    # Z defects terminate on the top/bottom data rows, X defects on the
    # left/right data columns.
    boundary_kind: dict = field(default_factory=dict)

    @property
    def n_data(self) -> int:
        return len(self.data_sites)

    def ancillas(self, species: str) -> list[Coord]:
        return self.z_ancillas if species == "Z" else self.x_ancillas

    def supports(self, species: str) -> list[tuple[Coord, ...]]:
        return self.z_supports if species == "Z" else self.x_supports


def _plaquette_support(i: int, j: int, d: int) -> tuple[Coord, ...]:
    return tuple(
        (r, c)
        for r, c in ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
        if 0 <= r < d and 0 <= c < d
    )


def build_geometry(d: int) -> CodeGeometry:
    """Construct the rotated surface code of distance ``d``.

    Plaquette species follows the checkerboard rule (i + j even -> Z).
    Weight-2 boundary checks are kept on the left/right columns for the Z
    species and on the top/bottom rows for the X species, which puts the
    absorbing boundaries of the Z-defect lattice on the top/bottom data rows.
    """
    if d < 2:
        raise ValueError(f"code distance must be >= 2, got {d}")

    data_sites = [(r, c) for r in range(d) for c in range(d)]
    z_anc, x_anc = [], []
    z_sup, x_sup = [], []
    for i in range(-1, d):
        for j in range(-1, d):
            support = _plaquette_support(i, j, d)
            if len(support) == 4:
                keep = True
            elif len(support) == 2:
                is_z = (i + j) % 2 == 0
                if is_z:
                    keep = j in (-1, d - 1)
                else:
                    keep = i in (-1, d - 1)
            else:
                keep = False
            if not keep:
                continue
            if (i + j) % 2 == 0:
                z_anc.append((i, j))
                z_sup.append(support)
            else:
                x_anc.append((i, j))
                x_sup.append(support)

    return CodeGeometry(
        d=d,
        data_sites=data_sites,
        z_ancillas=z_anc,
        x_ancillas=x_anc,
        z_supports=z_sup,
        x_supports=x_sup,
        logical_z_support=[(0, c) for c in range(d)],
        logical_x_support=[(r, 0) for r in range(d)],
        boundary_kind={"Z": "rows", "X": "cols"},
    )


def anchor_to_lattice(anchor: Coord, species: str) -> Coord:
    """Map a plaquette anchor to its (u, v) matching-lattice coordinate.

    A single data-qubit error flips two plaquettes of one species whose
    anchors differ by (+-1, +-1); in (u, v) coordinates those become unit
    steps along one axis, so the matching graph is a square lattice with
    Manhattan metric.  The conventions are chosen so that u + v is the
    depth toward the species' absorbing boundary pair: anchor row i for Z
    defects, anchor column j for X defects.
    """
    i, j = anchor
    if species == "Z":
        return (i + j) // 2, (i - j) // 2
    return (i + j + 1) // 2, (j - i - 1) // 2


def lattice_to_anchor(uv: Coord, species: str) -> Coord:
    u, v = uv
    if species == "Z":
        return u + v, u - v
    return u - v - 1, u + v
