"""Regular marked subdivisions of a lattice point configuration.

A height vector lifts the configuration into R^4; the upper faces of the
lifted hull (outer normal with positive last coordinate) project to the
marked cells of the subdivision.  The codimension of the height vector's
secondary cone is the rank of the stacked per-cell affine-relation spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import (
    CircuitType,
    LatticePoint,
    NotACircuit,
    affine_dim,
    as_lattice_point,
    classify_circuit,
    convex_hull,
    lattice_points,
)
from .linalg import Matrix, Vector, kernel_basis, mat, rank, vec


class InvalidConfig(ValueError):
    """A point configuration violating the input contract (CLI exit 2)."""


@dataclass(frozen=True)
class PointConfig:
    """A finite set of lattice points in Z^3 spanning a 3-polytope.

    ``points`` keeps the input order; all downstream reports refer to points
    by their index (rendered as letters a, b, c, ... in the CLI).
    """

    points: tuple[LatticePoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(as_lattice_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            dup = next(p for p in pts if pts.count(p) > 1)
            raise InvalidConfig(f"duplicate point {dup}")
        if any(len(p) != 3 for p in pts):
            raise InvalidConfig("points must have exactly 3 coordinates")
        if len(pts) < 4 or affine_dim(pts) != 3:
            raise InvalidConfig("points do not span a 3-dimensional polytope")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def matrix_a(self) -> Matrix:
        """The 4 x s matrix: all-ones row over the three coordinate rows."""
        s = len(self.points)
        rows = [tuple(Fraction(1) for _ in range(s))]
        for i in range(3):
            rows.append(tuple(Fraction(p[i]) for p in self.points))
        return mat(rows)

    def heights_from(self, values: Sequence) -> Vector:
        u = vec(values)
        if len(u) != self.size:
            raise InvalidConfig(
                f"height vector has {len(u)} entries for {self.size} points"
            )
        return u


@dataclass(frozen=True)
class MarkedCell:
    """One maximal cell: its marked point indices and its vertex indices."""

    marked: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class MarkedSubdivision:
    """A regular marked subdivision plus the codimension of its secondary cone."""

    cells: tuple[MarkedCell, ...]
    dim_lineality: int  # dimension of the stacked relation space = codimension

    @property
    def codim(self) -> int:
        return self.dim_lineality


def regular_subdivision(cfg: PointConfig, u: Sequence) -> MarkedSubdivision:
    """Marked subdivision induced by lifting point i to height u[i].

    Adding a constant or a linear function of the points to ``u`` leaves the
    result unchanged.
    """
    heights = cfg.heights_from(u)
    lifted = [vec(p) + (heights[i],) for i, p in enumerate(cfg.points)]
    if affine_dim(lifted) < 4:
        # affine heights: the trivial subdivision, everything marked
        cells = (
            MarkedCell(
                marked=tuple(range(cfg.size)),
                vertices=_cell_vertices(cfg, tuple(range(cfg.size))),
            ),
        )
        return MarkedSubdivision(cells=cells, dim_lineality=_stacked_rank(cfg, cells))
    hull = convex_hull(lifted, 4)
    cells = []
    for facet in hull.facets:
        if facet.normal[3] <= 0:
            continue
        marked = tuple(sorted(facet.incident))
        cells.append(MarkedCell(marked=marked, vertices=_cell_vertices(cfg, marked)))
    cells.sort(key=lambda c: c.marked)
    out = tuple(cells)
    assert out, "a regular subdivision has at least one upper cell"
    return MarkedSubdivision(cells=out, dim_lineality=_stacked_rank(cfg, out))


def _cell_vertices(cfg: PointConfig, marked: tuple[int, ...]) -> tuple[int, ...]:
    pts = [cfg.points[i] for i in marked]
    hull = convex_hull(pts, 3)
    assert hull.dim == 3, "maximal cells must be 3-dimensional"
    return tuple(marked[i] for i in hull.vertex_indices(pts))


def _stacked_rank(cfg: PointConfig, cells: Sequence[MarkedCell]) -> int:
    stacked = _stacked_relations(cfg, cells)
    return rank(mat(stacked)) if stacked else 0


def _stacked_relations(cfg: PointConfig, cells: Sequence[MarkedCell]) -> list[Vector]:
    a = cfg.matrix_a
    out: list[Vector] = []
    for cell in cells:
        sub = mat([tuple(row[j] for j in cell.marked) for row in a])
        for k in kernel_basis(sub):
            full = [Fraction(0)] * cfg.size
            for pos, j in enumerate(cell.marked):
                full[j] = k[pos]
            out.append(tuple(full))
    return out


def secondary_codim(cfg: PointConfig, subdivision: MarkedSubdivision) -> int:
    """Codimension of the secondary cone: rank of all stacked cell relations."""
    return _stacked_rank(cfg, subdivision.cells)


def is_maximal_dimensional_type(cfg: PointConfig, subdivision: MarkedSubdivision) -> bool:
    """Whether the configuration shows every lattice point of its hull, marked.

    True iff the union of the marked sets is the whole configuration and the
    configuration already contains every lattice point of its convex hull.
    """
    marked_union: set[int] = set()
    for cell in subdivision.cells:
        marked_union.update(cell.marked)
    if marked_union != set(range(cfg.size)):
        return False
    return set(lattice_points(cfg.points)) == set(cfg.points)


@dataclass(frozen=True)
class Circuit:
    """The unique affine circuit of a codimension-1 subdivision."""

    indices: tuple[int, ...]
    circuit_type: CircuitType
    dependence: Vector  # full-length, supported on `indices`, first nonzero > 0
    dim: int  # affine dimension of the circuit points (3, 2 or 1)


@dataclass(frozen=True)
class NotCodimOne:
    """Ordinary result (not an error): the subdivision is not codimension 1."""

    codim: int


def extract_circuit(cfg: PointConfig, subdivision: MarkedSubdivision) -> Circuit | NotCodimOne:
    """The unique circuit of a codimension-1 marked subdivision.

    Verifies on the way that every marked cell not containing the circuit is
    a vertex-marked simplex (anything else contradicts codimension 1).
    """
    codim = secondary_codim(cfg, subdivision)
    if codim != 1:
        return NotCodimOne(codim=codim)
    stacked = _stacked_relations(cfg, subdivision.cells)
    gen = next(v for v in stacked if any(x != 0 for x in v))
    lead = next(x for x in gen if x != 0)
    if lead < 0:
        gen = tuple(-x for x in gen)
    support = tuple(i for i, x in enumerate(gen) if x != 0)
    circuit_pts = [cfg.points[i] for i in support]
    try:
        ctype = classify_circuit(circuit_pts)
    except NotACircuit as exc:  # pragma: no cover - codim 1 forces a circuit
        raise AssertionError(f"codim-1 generator support is not a circuit: {exc}")
    for cell in subdivision.cells:
        if set(support) <= set(cell.marked):
            continue
        ok = len(cell.marked) == 4 and affine_dim([cfg.points[i] for i in cell.marked]) == 3
        assert ok, f"circuit-free cell {cell.marked} is not a vertex-marked simplex"
    return Circuit(
        indices=support,
        circuit_type=ctype,
        dependence=gen,
        dim=affine_dim(circuit_pts),
    )
