"""Lattice geometry: hulls, lattice-point enumeration, circuits, normal forms.

Point sets here are tiny (a handful of monomial exponents), so hulls are
computed by exhaustive supporting-hyperplane search and lattice points by a
bounding-box scan with exact half-space tests.  Everything is integer or
`Fraction` arithmetic; nothing in this module ever rounds.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .linalg import (
    AffineSolution,
    Matrix,
    Vector,
    det2,
    det3,
    determinant,
    dot,
    kernel_basis,
    mat,
    primitive,
    rank,
    solve_affine,
    vec,
    vec_sub,
)

LatticePoint = tuple[int, ...]


def as_lattice_point(p: Sequence) -> LatticePoint:
    q = tuple(int(x) for x in p)
    assert all(Fraction(x) == q[i] for i, x in enumerate(p)), f"non-integral point {tuple(p)}"
    return q


def affine_dim(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine span of a point set."""
    if len(points) <= 1:
        return 0
    base = vec(points[0])
    return rank(mat([vec_sub(vec(p), base) for p in points[1:]]))


# ---------------------------------------------------------------------------
# Convex hulls by exhaustive supporting-hyperplane search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Facet:
    """One facet: outer normal, offset, and the incident input points.

    The facet's supporting hyperplane is ``normal . x = offset`` and every
    hull point satisfies ``normal . x <= offset``.  The normal is a primitive
    integer vector.
    """

    normal: tuple[int, ...]
    offset: Fraction
    incident: frozenset[int]


@dataclass(frozen=True)
class Hull:
    """Convex hull of a point set: facets plus affine-span bookkeeping.

    ``dim`` is the dimension of the affine span.  When the input is
    degenerate (``dim < ambient``) the facet list describes the hull inside
    the span, using local coordinates w.r.t. ``span_base``/``span_basis``.
    """

    ambient: int
    dim: int
    facets: tuple[Facet, ...]
    span_base: Vector
    span_basis: tuple[Vector, ...]

    def vertex_indices(self, points: Sequence[Sequence[Fraction]]) -> tuple[int, ...]:
        """Indices of input points that are vertices of the hull (full-dim only)."""
        assert self.dim == self.ambient, "vertex_indices needs a full-dimensional hull"
        out = []
        for i, p in enumerate(points):
            active = [f.normal for f in self.facets if dot(vec(f.normal), vec(p)) == f.offset]
            if active and rank(mat(active)) == self.dim:
                out.append(i)
        return tuple(out)


def _span_coordinates(points: Sequence[Vector], base: Vector, basis: Sequence[Vector]) -> list[Vector]:
    """Coordinates of each point w.r.t. an affine basis of its span."""
    m = mat([[b[i] for b in basis] for i in range(len(base))])
    coords = []
    for p in points:
        sol = solve_affine(m, vec_sub(p, base))
        assert isinstance(sol, AffineSolution), "point outside claimed affine span"
        coords.append(sol.particular)
    return coords


def convex_hull(points: Sequence[Sequence[Fraction]], ambient_dim: int) -> Hull:
    """Facets of ``conv(points)`` in dimension 2, 3 or 4.

    Parameters
    ----------
    points:
        At least ``ambient_dim + 1`` points with rational coordinates.
    ambient_dim:
        Must match the coordinate length of every point.

    Returns
    -------
    Hull
        Facet list with incident point indices.  Degenerate input (affine
        span of dimension below ``ambient_dim``) yields the hull computed
        inside the span together with the span itself.
    """
    assert ambient_dim in (2, 3, 4), f"unsupported ambient dimension {ambient_dim}"
    pts = [vec(p) for p in points]
    if len(pts) < ambient_dim + 1:
        raise ValueError(
            f"convex_hull needs at least {ambient_dim + 1} points in dimension "
            f"{ambient_dim}, got {len(pts)}"
        )
    assert all(len(p) == ambient_dim for p in pts), "point/ambient dimension mismatch"

    base = pts[0]
    diffs = mat([vec_sub(p, base) for p in pts[1:]])
    dim = rank(diffs)
    if dim < ambient_dim:
        basis = _independent_rows(diffs, dim)
        local = _span_coordinates(pts, base, basis)
        if dim <= 1:
            inner: tuple[Facet, ...] = ()
        else:
            inner = convex_hull(local, dim).facets
        return Hull(ambient=ambient_dim, dim=dim, facets=inner, span_base=base, span_basis=basis)

    seen: dict[tuple[tuple[int, ...], Fraction], frozenset[int]] = {}
    for combo in combinations(range(len(pts)), ambient_dim):
        rows = mat([vec_sub(pts[i], pts[combo[0]]) for i in combo[1:]])
        if rank(rows) != ambient_dim - 1:
            continue
        normal_space = kernel_basis(rows)
        assert len(normal_space) == 1, "hyperplane normal not unique"
        n = primitive(normal_space[0])
        c = dot(vec(n), pts[combo[0]])
        values = [dot(vec(n), p) for p in pts]
        if all(v <= c for v in values):
            pass
        elif all(v >= c for v in values):
            n = tuple(-x for x in n)
            c = -c
            values = [-v for v in values]
        else:
            continue
        incident = frozenset(i for i, v in enumerate(values) if v == c)
        seen[(n, c)] = incident
    facets = tuple(
        sorted(
            (Facet(n, c, inc) for (n, c), inc in seen.items()),
            key=lambda f: (f.normal, f.offset),
        )
    )
    return Hull(ambient=ambient_dim, dim=ambient_dim, facets=facets, span_base=base, span_basis=())


def _independent_rows(m: Matrix, target: int) -> tuple[Vector, ...]:
    rows: list[Vector] = []
    for r in m:
        if rank(mat(rows + [r])) > len(rows):
            rows.append(r)
        if len(rows) == target:
            break
    return tuple(rows)


# ---------------------------------------------------------------------------
# Lattice points, segments, volumes
# ---------------------------------------------------------------------------


def lattice_points(points: Sequence[Sequence[int]]) -> tuple[LatticePoint, ...]:
    """All lattice points of ``conv(points)`` for a full-dimensional polytope.

    Works in dimension 2 or 3; scans the integral bounding box and keeps the
    points passing every facet inequality exactly.  Result sorted
    lexicographically.
    """
    pts = [as_lattice_point(p) for p in points]
    d = len(pts[0])
    hull = convex_hull(pts, d)
    assert hull.dim == d, "lattice_points expects a full-dimensional polytope"
    # integral vertices + primitive integer normals => integer offsets
    tests = [(f.normal, int(f.offset)) for f in hull.facets]
    lo = [min(p[i] for p in pts) for i in range(d)]
    hi = [max(p[i] for p in pts) for i in range(d)]
    out = []
    ranges = [range(lo[i], hi[i] + 1) for i in range(d)]
    if d == 2:
        for x in ranges[0]:
            for y in ranges[1]:
                if all(n[0] * x + n[1] * y <= c for n, c in tests):
                    out.append((x, y))
    else:
        for x in ranges[0]:
            for y in ranges[1]:
                for z in ranges[2]:
                    if all(n[0] * x + n[1] * y + n[2] * z <= c for n, c in tests):
                        out.append((x, y, z))
    return tuple(sorted(out))


def interior_lattice_points(points: Sequence[Sequence[int]]) -> tuple[LatticePoint, ...]:
    """Lattice points strictly inside ``conv(points)`` (full-dim, dim 2 or 3)."""
    pts = [as_lattice_point(p) for p in points]
    d = len(pts[0])
    hull = convex_hull(pts, d)
    assert hull.dim == d, "interior_lattice_points expects a full-dimensional polytope"
    out = []
    for q in lattice_points(pts):
        if all(dot(vec(f.normal), vec(q)) < f.offset for f in hull.facets):
            out.append(q)
    return tuple(sorted(out))


def segment_lattice_count(p: Sequence[int], q: Sequence[int]) -> int:
    """Number of lattice points on the closed segment [p, q]."""
    a = as_lattice_point(p)
    b = as_lattice_point(q)
    if a == b:
        return 1
    g = 0
    for x, y in zip(a, b):
        g = gcd(g, abs(x - y))
    return g + 1


def lattice_volume(points: Sequence[Sequence[int]]) -> int:
    """Normalized volume of a 3-polytope (unit tetrahedron = 1).

    Computed as a fan of tetrahedra over the hull facets; additive under
    subdivision, integer for integral input.
    """
    pts = [as_lattice_point(p) for p in points]
    hull = convex_hull(pts, 3)
    assert hull.dim == 3, "lattice_volume expects a full-dimensional 3-polytope"
    v0 = vec(pts[0])
    total = Fraction(0)
    for f in hull.facets:
        if dot(vec(f.normal), v0) == f.offset:
            continue
        ordered = _order_facet_cycle([pts[i] for i in sorted(f.incident)], f.normal)
        anchor = vec(ordered[0])
        for i in range(1, len(ordered) - 1):
            d = det3(
                vec_sub(anchor, v0),
                vec_sub(vec(ordered[i]), v0),
                vec_sub(vec(ordered[i + 1]), v0),
            )
            total += abs(d)
    assert total.denominator == 1, "normalized volume must be integral"
    return int(total)


def lattice_area(points: Sequence[Sequence[int]]) -> int:
    """Normalized area of a 2-polytope (unit triangle = 1)."""
    pts = [as_lattice_point(p) for p in points]
    hull = convex_hull(pts, 2)
    assert hull.dim == 2, "lattice_area expects a full-dimensional polygon"
    verts = [pts[i] for i in hull.vertex_indices(pts)]
    ordered = _order_planar_cycle(verts)
    v0 = vec(ordered[0])
    total = Fraction(0)
    for i in range(1, len(ordered) - 1):
        total += det2(vec_sub(vec(ordered[i]), v0), vec_sub(vec(ordered[i + 1]), v0))
    assert total != 0
    total = abs(total)
    assert total.denominator == 1
    return int(total)


def _order_planar_cycle(points: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Order coplanar 2D points cyclically around their centroid (exact)."""
    pts = [vec(p) for p in points]
    n = len(pts)
    cx = sum((p[0] for p in pts), Fraction(0)) / n
    cy = sum((p[1] for p in pts), Fraction(0)) / n

    def half(p: Vector) -> int:
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(a: Vector, b: Vector) -> int:
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return sorted(pts, key=functools.cmp_to_key(cmp))


def _order_facet_cycle(points: Sequence[Sequence[Fraction]], normal: Sequence[int]) -> list[Vector]:
    """Order coplanar 3D points cyclically inside their plane."""
    pts = [vec(p) for p in points]
    n = vec(normal)
    axis = max(range(3), key=lambda i: abs(n[i]))
    keep = [i for i in range(3) if i != axis]
    planar = [(p[keep[0]], p[keep[1]]) for p in pts]
    order = {q: i for i, q in enumerate(planar)}
    cycled = _order_planar_cycle(planar)
    return [pts[order[(q[0], q[1])]] for q in cycled]


# ---------------------------------------------------------------------------
# Radon partitions and circuit types
# ---------------------------------------------------------------------------


class CircuitType(enum.Enum):
    """Affine circuit types by Radon part sizes: A=(2,3), B=(1,4), C=(1,3), D=(2,2), E=(1,2)."""

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"


_RADON_TO_TYPE = {
    frozenset({2, 3}): CircuitType.A,
    frozenset({1, 4}): CircuitType.B,
    frozenset({1, 3}): CircuitType.C,
    frozenset({2}): CircuitType.D,  # sizes (2,2)
    frozenset({1, 2}): CircuitType.E,
}


class NotACircuit(ValueError):
    """Raised when a point set is not a circuit; names the offending subset."""


@dataclass(frozen=True)
class RadonPartition:
    """Signed affine dependence of a circuit.

    ``dependence`` sums to zero, weights the points to zero, and has its
    first nonzero coordinate positive.  ``positive``/``negative`` hold the
    index sets of the two Radon parts.
    """

    dependence: Vector
    positive: frozenset[int]
    negative: frozenset[int]


def radon_partition(points: Sequence[Sequence[Fraction]]) -> RadonPartition:
    """Radon partition of a circuit (minimally affinely dependent points).

    Raises
    ------
    NotACircuit
        If the points are affinely independent, or if some proper subset is
        already dependent (the message names one such subset).
    """
    pts = [vec(p) for p in points]
    rows = [tuple(Fraction(1) for _ in pts)]
    for i in range(len(pts[0])):
        rows.append(tuple(p[i] for p in pts))
    kern = kernel_basis(mat(rows))
    if not kern:
        raise NotACircuit("points are affinely independent")
    if len(kern) > 1:
        w = kern[0]
        other = kern[1]
        j = next(i for i, x in enumerate(w) if x != 0)
        if other[j] != 0:
            other = tuple(a - (other[j] / w[j]) * b for a, b in zip(other, w))
        support = sorted(i for i, x in enumerate(other) if x != 0)
        raise NotACircuit(f"proper subset {support} is affinely dependent")
    w = kern[0]
    support = [i for i, x in enumerate(w) if x != 0]
    if len(support) != len(pts):
        raise NotACircuit(f"proper subset {support} is affinely dependent")
    lead = next(x for x in w if x != 0)
    if lead < 0:
        w = tuple(-x for x in w)
    return RadonPartition(
        dependence=w,
        positive=frozenset(i for i, x in enumerate(w) if x > 0),
        negative=frozenset(i for i, x in enumerate(w) if x < 0),
    )


def classify_circuit(points: Sequence[Sequence[Fraction]]) -> CircuitType:
    """Circuit type A-E from the Radon part sizes."""
    part = radon_partition(points)
    sizes = frozenset({len(part.positive), len(part.negative)})
    if sizes not in _RADON_TO_TYPE:
        raise NotACircuit(f"unsupported Radon sizes {sorted((len(part.positive), len(part.negative)))}")
    return _RADON_TO_TYPE[sizes]


# ---------------------------------------------------------------------------
# Integer matrices: HNF-style solving and unimodular maps
# ---------------------------------------------------------------------------


def integer_solve(m: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of ``m @ x = b``, or None.

    Column Hermite reduction: find unimodular V with ``m @ V`` lower
    triangular, solve by forward substitution over the integers, map back.
    """
    rows = [list(map(int, r)) for r in m]
    rhs = [int(x) for x in b]
    nr, nc = len(rows), len(rows[0])
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def col_op(j: int, k: int, f: int) -> None:  # col_j -= f * col_k
        for r in rows:
            r[j] -= f * r[k]
        for r in v:
            r[j] -= f * r[k]

    def col_swap(j: int, k: int) -> None:
        for r in rows:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    pr = 0
    pivot_cols: list[tuple[int, int]] = []
    for pc in range(nc):
        if pr >= nr:
            break
        row_i = next((i for i in range(pr, nr) if any(rows[i][j] != 0 for j in range(pc, nc))), None)
        if row_i is None:
            break
        rows[pr], rows[row_i] = rows[row_i], rows[pr]
        rhs[pr], rhs[row_i] = rhs[row_i], rhs[pr]
        while True:
            nz = [j for j in range(pc, nc) if rows[pr][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(rows[pr][j]))
            if jmin != pc:
                col_swap(pc, jmin)
            done = True
            for j in range(pc + 1, nc):
                if rows[pr][j] != 0:
                    col_op(j, pc, rows[pr][j] // rows[pr][pc])
                    if rows[pr][j] != 0:
                        done = False
            if done:
                break
        if rows[pr][pc] != 0:
            pivot_cols.append((pr, pc))
            pr += 1
    y = [0] * nc
    used_rows = set()
    for r, c in pivot_cols:
        used_rows.add(r)
        acc = rhs[r] - sum(rows[r][j] * y[j] for j in range(c))
        if acc % rows[r][c] != 0:
            return None
        y[c] = acc // rows[r][c]
    for r in range(nr):
        if r not in used_rows and sum(rows[r][j] * y[j] for j in range(nc)) != rhs[r]:
            return None
    x = tuple(sum(v[i][j] * y[j] for j in range(nc)) for i in range(nc))
    assert all(
        sum(int(a) * xx for a, xx in zip(row, x)) == int(bi) for row, bi in zip(m, b)
    ), "integer_solve check"
    return x


@dataclass(frozen=True)
class UnimodularMap:
    """Affine lattice isomorphism ``p -> matrix @ p + shift`` (det = +-1)."""

    matrix: tuple[tuple[int, ...], ...]
    shift: tuple[int, ...]

    def __post_init__(self) -> None:
        d = abs(determinant(mat(self.matrix)))
        assert d == 1, f"matrix determinant {d} is not +-1"

    def apply(self, p: Sequence[int]) -> LatticePoint:
        return tuple(
            sum(self.matrix[i][j] * int(p[j]) for j in range(len(p))) + self.shift[i]
            for i in range(len(self.shift))
        )

    def inverse(self) -> "UnimodularMap":
        n = len(self.shift)
        inv_cols = []
        for i in range(n):
            e = [Fraction(int(j == i)) for j in range(n)]
            sol = solve_affine(mat(self.matrix), e)
            assert isinstance(sol, AffineSolution), "unimodular matrix must be invertible"
            assert all(x.denominator == 1 for x in sol.particular), "inverse not integral"
            inv_cols.append(sol.particular)
        minv = tuple(tuple(int(inv_cols[j][i]) for j in range(n)) for i in range(n))
        inv_shift = tuple(
            -sum(minv[i][j] * self.shift[j] for j in range(n)) for i in range(n)
        )
        out = UnimodularMap(matrix=minv, shift=inv_shift)
        for probe in ([0] * n, [1] + [0] * (n - 1), list(range(1, n + 1))):
            assert out.apply(self.apply(probe)) == tuple(probe), "inverse map check"
        return out


def identity_map(dim: int) -> UnimodularMap:
    return UnimodularMap(
        matrix=tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)),
        shift=(0,) * dim,
    )


# ---------------------------------------------------------------------------
# Pyramids over planar circuits
# ---------------------------------------------------------------------------


def pyramid_height_admissible(base: Sequence[Sequence[int]], apex: Sequence[int]) -> bool:
    """Whether the pyramid over a planar 4-point circuit hides no lattice point.

    Parameters
    ----------
    base:
        Four coplanar lattice points forming a circuit with Radon sizes
        (1, 3) — a triangle with one marked interior point.
    apex:
        A lattice point off the base plane.

    Returns
    -------
    bool
        True iff ``conv(base + [apex])`` contains exactly the five given
        lattice points (decided by exhaustive lattice-point enumeration).
    """
    pts = [as_lattice_point(p) for p in base]
    assert len(pts) == 4 and affine_dim(pts) == 2, "base must be 4 coplanar points"
    assert classify_circuit(pts) is CircuitType.C, "base must have Radon sizes (1,3)"
    a = as_lattice_point(apex)
    assert affine_dim(pts + [a]) == 3, "apex must lie off the base plane"
    found = lattice_points(pts + [a])
    return len(found) == 5 and set(found) == set(pts) | {a}


def pyramid_has_extra_point(k: int, y: int, z: int) -> bool:
    """Fast integer test used by the height sweep over the standard base.

    The base is the standard planar circuit (0,0,0), (0,1,1), (0,2,1),
    (0,1,2); the apex is (k, y, z) with k >= 1.  Returns True iff the pyramid
    contains a sixth lattice point.  Equivalent to
    ``not pyramid_height_admissible(standard_base, (k, y, z))`` but avoids
    the bounding-box scan: every potential extra point lies on a slice
    x = t with 0 < t < k, where membership reduces to three integer
    inequalities on w = k*(y', z') - t*(y, z).
    """
    assert k >= 1
    tri = ((0, 0), (2, 1), (1, 2))
    for t in range(1, k):
        s = k - t
        ys = [s * v[0] + t * y for v in tri]
        zs = [s * v[1] + t * z for v in tri]
        y_lo = -((-min(ys)) // k)
        y_hi = max(ys) // k
        z_lo = -((-min(zs)) // k)
        z_hi = max(zs) // k
        for yy in range(y_lo, y_hi + 1):
            wy = k * yy - t * y
            for zz in range(z_lo, z_hi + 1):
                wz = k * zz - t * z
                if 2 * wz >= wy and 2 * wy >= wz and wy + wz <= 3 * s:
                    return True
    return False


STANDARD_PLANAR_CIRCUIT: tuple[LatticePoint, ...] = ((0, 0, 0), (0, 1, 1), (0, 2, 1), (0, 1, 2))
