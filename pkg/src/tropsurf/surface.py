"""The tropical surface dual to a regular marked subdivision.

The surface is the non-differentiability locus of p -> max_i(u_i + m_i . p).
Duality: maximal cells of the subdivision give surface vertices, interior
2-faces give bounded edges, boundary 2-faces give unbounded edges (rays
along outer normals of the hull), and subdivision edges give 2-cells whose
weight is the lattice length of the edge.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .lattice import convex_hull, segment_lattice_count
from .linalg import (
    AffineSolution,
    Vector,
    det3,
    mat,
    primitive,
    solve_affine,
    vec,
    vec_sub,
)
from .subdivision import MarkedCell, MarkedSubdivision, PointConfig, regular_subdivision


def tropical_eval(cfg: PointConfig, u: Sequence, p: Sequence) -> tuple[Fraction, tuple[int, ...]]:
    """Value and argmax set of max_i(u_i + m_i . p) at the point p."""
    heights = cfg.heights_from(u)
    q = vec(p)
    assert len(q) == 3, "evaluation point must be 3-dimensional"
    terms = [heights[i] + sum(Fraction(m) * x for m, x in zip(pt, q)) for i, pt in enumerate(cfg.points)]
    value = max(terms)
    return value, tuple(i for i, t in enumerate(terms) if t == value)


@dataclass(frozen=True)
class SurfaceVertex:
    """Vertex of the surface, dual to one maximal cell of the subdivision."""

    cell: tuple[int, ...]  # marked set of the dual cell
    location: Vector


@dataclass(frozen=True)
class SurfaceEdge:
    """Edge of the surface, dual to a 2-face of the subdivision.

    Bounded edges have two endpoint vertex ids; unbounded edges have one
    endpoint and a primitive ray direction (an outer normal of the hull).
    """

    dual_face: tuple[int, ...]  # config indices on the 2-face
    endpoints: tuple[int, ...]
    ray: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SurfaceFace:
    """2-cell of the surface, dual to an edge of the subdivision.

    ``direction`` is the primitive direction of the dual edge, which is also
    a normal vector of the plane containing this 2-cell.  Each entry of
    ``rays`` is ``(anchor vertex id, primitive ray direction)``.
    """

    dual_edge: tuple[int, ...]  # config indices on the subdivision edge
    weight: int  # lattice length of the dual edge
    direction: tuple[int, ...]
    vertex_ids: tuple[int, ...]
    rays: tuple[tuple[int, tuple[int, ...]], ...] = ()


@dataclass(frozen=True)
class TropicalComplex:
    """Vertices, edges and 2-cells of the surface (ids index ``vertices``)."""

    vertices: tuple[SurfaceVertex, ...]
    edges: tuple[SurfaceEdge, ...]
    faces: tuple[SurfaceFace, ...]


def dual_vertex(cfg: PointConfig, u: Sequence, marked: Sequence[int]) -> Vector:
    """The point where all terms of a 3-dimensional cell's marked set agree."""
    heights = cfg.heights_from(u)
    base = marked[0]
    rows = []
    rhs = []
    for j in marked[1:]:
        rows.append(vec_sub(vec(cfg.points[j]), vec(cfg.points[base])))
        rhs.append(heights[base] - heights[j])
    sol = solve_affine(mat(rows), vec(rhs))
    assert isinstance(sol, AffineSolution), "cell system must be solvable"
    assert sol.unique, "maximal cells must pin a single dual vertex"
    return sol.particular


def build_complex(
    cfg: PointConfig, u: Sequence, subdivision: MarkedSubdivision | None = None
) -> TropicalComplex:
    """The surface dual to the regular subdivision induced by the heights."""
    heights = cfg.heights_from(u)
    t = subdivision if subdivision is not None else regular_subdivision(cfg, heights)

    vertices = []
    for cell in t.cells:
        loc = dual_vertex(cfg, heights, cell.marked)
        _, argmax = tropical_eval(cfg, heights, loc)
        assert argmax == cell.marked, (
            f"dual vertex argmax {argmax} disagrees with marked set {cell.marked}"
        )
        vertices.append(SurfaceVertex(cell=cell.marked, location=loc))

    # 2-faces of maximal cells, keyed by the config indices lying on them
    cell_faces: dict[tuple[int, ...], list[int]] = {}
    face_edges: dict[int, list[tuple[tuple[int, ...], ...]]] = {}
    per_cell_hull = []
    for ci, cell in enumerate(t.cells):
        pts = [cfg.points[i] for i in cell.marked]
        hull = convex_hull(pts, 3)
        per_cell_hull.append((cell, hull))
        for facet in hull.facets:
            key = tuple(sorted(cell.marked[i] for i in facet.incident))
            cell_faces.setdefault(key, []).append(ci)

    delta = convex_hull(cfg.points, 3)

    edges = []
    boundary_ray: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}
    for key, cells in sorted(cell_faces.items()):
        if len(cells) == 2:
            edges.append(SurfaceEdge(dual_face=key, endpoints=(cells[0], cells[1])))
            continue
        assert len(cells) == 1, f"2-face {key} shared by {len(cells)} cells"
        ray = None
        for facet in delta.facets:
            if set(key) <= facet.incident:
                ray = facet.normal
                break
        assert ray is not None, f"boundary 2-face {key} lies on no hull facet"
        boundary_ray[key] = (cells[0], ray)
        edges.append(SurfaceEdge(dual_face=key, endpoints=(cells[0],), ray=ray))

    # subdivision edges: intersections of two 2-faces of one cell
    edge_cells: dict[tuple[int, ...], set[int]] = {}
    for ci, (cell, hull) in enumerate(per_cell_hull):
        for f1, f2 in combinations(hull.facets, 2):
            shared = f1.incident & f2.incident
            if len(shared) < 2:
                continue
            key = tuple(sorted(cell.marked[i] for i in shared))
            edge_cells.setdefault(key, set()).add(ci)

    faces = []
    for key, cells in sorted(edge_cells.items()):
        ends = _segment_endpoints([cfg.points[i] for i in key])
        weight = segment_lattice_count(ends[0], ends[1]) - 1
        direction = primitive(vec_sub(vec(ends[1]), vec(ends[0])))
        rays = tuple(
            sorted(anchored for fkey, anchored in boundary_ray.items() if set(key) <= set(fkey))
        )
        faces.append(
            SurfaceFace(
                dual_edge=key,
                weight=weight,
                direction=tuple(int(x) for x in direction),
                vertex_ids=tuple(sorted(cells)),
                rays=rays,
            )
        )

    return TropicalComplex(vertices=tuple(vertices), edges=tuple(edges), faces=tuple(faces))


def _segment_endpoints(points: Sequence[tuple]) -> tuple[tuple, tuple]:
    """Extreme points of a set of collinear points."""
    assert len(points) >= 2
    p0 = points[0]
    direction = next(vec_sub(vec(p), vec(p0)) for p in points[1:] if tuple(p) != tuple(p0))
    axis = max(range(3), key=lambda i: abs(direction[i]))
    ordered = sorted(points, key=lambda p: Fraction(p[axis]) * (1 if direction[axis] > 0 else -1))
    return ordered[0], ordered[-1]


def vertex_multiplicity(cfg: PointConfig, cell: MarkedCell) -> int:
    """Normalized volume of a vertex-marked simplex cell (error otherwise)."""
    if len(cell.marked) != 4:
        raise ValueError(
            f"multiplicity needs a vertex-marked simplex; cell has {len(cell.marked)} marked points"
        )
    a, b, c, d = (vec(cfg.points[i]) for i in cell.marked)
    vol = det3(vec_sub(b, a), vec_sub(c, a), vec_sub(d, a))
    if vol == 0:
        raise ValueError("multiplicity needs a vertex-marked simplex; cell is degenerate")
    return abs(int(vol))


def _clip_ray(base: Vector, direction: tuple[int, ...], bound: Fraction) -> Vector:
    t_max = None
    for i in range(3):
        d = Fraction(direction[i])
        if d > 0:
            limit = (bound - base[i]) / d
        elif d < 0:
            limit = (-bound - base[i]) / d
        else:
            continue
        if t_max is None or limit < t_max:
            t_max = limit
    if t_max is None or t_max < 1:
        t_max = Fraction(1)
    return tuple(base[i] + t_max * Fraction(direction[i]) for i in range(3))


def _cycle_order(points: Sequence[Vector], normal: Vector) -> list[int]:
    """Indices of coplanar points in convex-cycle order around their centroid."""
    axis = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != axis]
    flat = [(p[keep[0]], p[keep[1]]) for p in points]
    n = len(flat)
    cx = sum(q[0] for q in flat) / n
    cy = sum(q[1] for q in flat) / n

    def half(q: tuple[Fraction, Fraction]) -> int:
        dx, dy = q[0] - cx, q[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(i: int, j: int) -> int:
        hi, hj = half(flat[i]), half(flat[j])
        if hi != hj:
            return -1 if hi < hj else 1
        ax, ay = flat[i][0] - cx, flat[i][1] - cy
        bx, by = flat[j][0] - cx, flat[j][1] - cy
        cross = ax * by - ay * bx
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return sorted(range(n), key=functools.cmp_to_key(cmp))


def render_off(
    complex_: TropicalComplex,
    singular: Sequence[tuple[Vector, str]] = (),
    bound: int = 20,
) -> str:
    """ASCII OFF rendering with rays clipped to the box [-bound, bound]^3.

    Singular points are repeated in the comment header (they are not part of
    the OFF geometry).
    """
    bbox = Fraction(bound)
    coords: list[Vector] = []
    index: dict[Vector, int] = {}

    def vid(p: Vector) -> int:
        if p not in index:
            index[p] = len(coords)
            coords.append(p)
        return index[p]

    polygons = []
    for face in complex_.faces:
        pts = [complex_.vertices[v].location for v in face.vertex_ids]
        for anchor_id, ray in face.rays:
            anchor = complex_.vertices[anchor_id].location
            pts.append(_clip_ray(anchor, ray, bbox))
        if len(pts) < 3:
            continue
        normal = vec(face.direction)
        order = _cycle_order(pts, normal)
        polygons.append([vid(pts[i]) for i in order])

    lines = ["# tropical surface"]
    for loc, label in singular:
        xyz = " ".join(str(x) for x in loc)
        lines.append(f"# singular point: {xyz}  [{label}]")
    lines.append("OFF")
    lines.append(f"{len(coords)} {len(polygons)} 0")
    for p in coords:
        lines.append(" ".join(repr(float(x)) for x in p))
    for poly in polygons:
        lines.append(str(len(poly)) + " " + " ".join(str(i) for i in poly))
    return "\n".join(lines) + "\n"
