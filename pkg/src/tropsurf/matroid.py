"""Gale duality, flats, and flags of subsets for a point configuration.

The Gale dual of the 4 x s configuration matrix is a (s-4) x s matrix B
whose rows span the kernel.  A subset F of column indices is a *flat* when
the span of the columns b_j, j in F, contains no other column.  A height
vector induces an ascending *flag of subsets* (lowest heights first); the
classifier below sorts maximal flags into four shapes keyed by the size of
the top difference set and the circuit type it carries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .lattice import CircuitType, NotACircuit, affine_dim, classify_circuit
from .linalg import (
    Matrix,
    Vector,
    kernel_basis,
    mat,
    primitive,
    rank,
    transpose,
    vec,
)
from .subdivision import PointConfig

Flag = tuple[tuple[int, ...], ...]

ENUMERATION_BOUND = 10


def gale_dual(cfg: PointConfig) -> Matrix:
    """Rows spanning the kernel of the configuration matrix."""
    a = cfg.matrix_a
    assert rank(a) == 4, "configuration matrix must have full rank"
    rows = kernel_basis(a)
    assert len(rows) == cfg.size - 4
    return mat(rows)


def gale_column(b: Matrix, j: int) -> Vector:
    return tuple(row[j] for row in b)


def has_zero_column(b: Matrix) -> int | None:
    """Index of a zero Gale column (a loop), or None."""
    for j in range(len(b[0])):
        if all(row[j] == 0 for row in b):
            return j
    return None


def is_flat(b: Matrix, subset: Iterable[int]) -> bool:
    """Whether the span of the Gale columns in ``subset`` contains no other column."""
    f = set(subset)
    cols = [gale_column(b, j) for j in sorted(f)]
    base = rank(mat(cols)) if cols else 0
    for k in range(len(b[0])):
        if k in f:
            continue
        if rank(mat(cols + [gale_column(b, k)])) == base:
            return False
    return True


def flag_of_subsets(u: Sequence) -> Flag:
    """Ascending flag of cumulative level sets of a height vector.

    The first level collects the indices of the smallest height; the last
    level is the full index set.
    """
    heights = vec(u)
    order = sorted(set(heights))
    flag: list[tuple[int, ...]] = []
    cum: list[int] = []
    for value in order:
        cum.extend(i for i, h in enumerate(heights) if h == value)
        cum.sort()
        flag.append(tuple(cum))
    return tuple(flag)


def difference_sets(flag: Flag) -> tuple[tuple[int, ...], ...]:
    """The per-level difference sets of a flag (same order as the flag)."""
    out = [flag[0]]
    for prev, cur in zip(flag, flag[1:]):
        out.append(tuple(sorted(set(cur) - set(prev))))
    return tuple(out)


def all_levels_flats(b: Matrix, flag: Flag) -> int | None:
    """Index of the first flag level that is not a flat, or None if all are."""
    for l, level in enumerate(flag):
        if not is_flat(b, level):
            return l
    return None


@dataclass(frozen=True)
class ChainsCase:
    """Accepted maximal flag: which of the four shapes it realises."""

    case: str  # "a" | "b" | "c" | "d"
    circuit: tuple[int, ...]
    circuit_type: CircuitType
    pair: tuple[int, ...] | None = None  # case b: the one 2-element difference set
    pair_level: int | None = None
    triple: tuple[int, ...] | None = None  # case c: the one 3-element difference set
    triple_level: int | None = None
    low_pair: tuple[int, ...] | None = None  # case d: lower pair
    low_pair_level: int | None = None
    high_pair: tuple[int, ...] | None = None  # case d: upper pair
    high_pair_level: int | None = None


@dataclass(frozen=True)
class ChainsReject:
    """First clause a maximal flag violates."""

    clause: str


def _plane_normal(points: Sequence[tuple]) -> tuple[Vector, Vector]:
    """Primitive normal and base point of the plane spanned by coplanar points."""
    base = vec(points[0])
    dirs = [tuple(Fraction(q) - b for q, b in zip(p, base)) for p in points[1:]]
    for d1, d2 in combinations(dirs, 2):
        n = (
            d1[1] * d2[2] - d1[2] * d2[1],
            d1[2] * d2[0] - d1[0] * d2[2],
            d1[0] * d2[1] - d1[1] * d2[0],
        )
        if any(x != 0 for x in n):
            return primitive(n), base
    raise AssertionError("points do not span a plane")


def _on_plane(normal: Vector, base: Vector, point: tuple) -> bool:
    return sum(n * (Fraction(q) - b) for n, q, b in zip(normal, point, base)) == 0


def _on_line(points: Sequence[tuple], point: tuple) -> bool:
    return affine_dim(list(points) + [point]) <= 1


def chains_case(cfg: PointConfig, flag: Flag) -> ChainsCase | ChainsReject:
    """Classify a maximal flag into one of the four singular-flag shapes.

    Checks, in order: every level a flat, the top difference set a circuit of
    the right type, the lower difference-set pattern, and the geometric side
    conditions of the matched shape.  The first violated clause is reported.
    """
    s = cfg.size
    if len(flag) != s - 4:
        raise ValueError(f"flag has {len(flag)} levels; a maximal flag has {s - 4}")
    _validate_flag(flag, s)
    b = gale_dual(cfg)
    bad = all_levels_flats(b, flag)
    if bad is not None:
        return ChainsReject(clause=f"level {bad + 1} is not a flat")
    diffs = difference_sets(flag)
    top = diffs[-1]
    lower = diffs[:-1]
    if len(top) not in (3, 4, 5):
        return ChainsReject(clause=f"top difference set has size {len(top)}")
    top_pts = [cfg.points[i] for i in top]
    try:
        ctype = classify_circuit(top_pts)
    except NotACircuit:
        return ChainsReject(clause="top difference set is not a circuit")

    if len(top) == 5:
        if ctype not in (CircuitType.A, CircuitType.B):
            return ChainsReject(clause=f"size-5 circuit has type {ctype.value}")
        for l, d in enumerate(lower):
            if len(d) != 1:
                return ChainsReject(clause=f"difference set at level {l + 1} is not a singleton")
        return ChainsCase(case="a", circuit=top, circuit_type=ctype)

    if len(top) == 4:
        if ctype not in (CircuitType.C, CircuitType.D):
            return ChainsReject(clause=f"size-4 circuit has type {ctype.value}")
        pairs = [(l, d) for l, d in enumerate(lower) if len(d) == 2]
        others = [(l, d) for l, d in enumerate(lower) if len(d) not in (1, 2)]
        if others or len(pairs) != 1:
            return ChainsReject(clause="difference sets below a size-4 circuit must be one pair and singletons")
        j, pair = pairs[0]
        normal, base = _plane_normal(top_pts)
        for l, d in enumerate(lower):
            if l > j and not _on_plane(normal, base, cfg.points[d[0]]):
                return ChainsReject(
                    clause=f"point {d[0]} above the pair level is off the circuit plane"
                )
        for i in pair:
            if _on_plane(normal, base, cfg.points[i]):
                return ChainsReject(clause=f"pair point {i} lies on the circuit plane")
        return ChainsCase(case="b", circuit=top, circuit_type=ctype, pair=pair, pair_level=j)

    # top difference set of size 3
    if ctype is not CircuitType.E:
        return ChainsReject(clause=f"size-3 circuit has type {ctype.value}")
    triples = [(l, d) for l, d in enumerate(lower) if len(d) == 3]
    pairs = [(l, d) for l, d in enumerate(lower) if len(d) == 2]
    others = [(l, d) for l, d in enumerate(lower) if len(d) not in (1, 2, 3)]
    if others:
        return ChainsReject(clause="difference set too large below a size-3 circuit")

    if len(triples) == 1 and not pairs:
        j, triple = triples[0]
        for l, d in enumerate(lower):
            if l > j and not _on_line(top_pts, cfg.points[d[0]]):
                return ChainsReject(
                    clause=f"point {d[0]} above the triple level is off the circuit line"
                )
        for x, y in combinations(triple, 2):
            if affine_dim(top_pts + [cfg.points[x], cfg.points[y]]) != 3:
                return ChainsReject(
                    clause=f"triple points {x} and {y} do not span space with the circuit line"
                )
        return ChainsCase(
            case="c", circuit=top, circuit_type=ctype, triple=triple, triple_level=j
        )

    if len(pairs) == 2 and not triples:
        (i, low), (j, high) = pairs
        for l, d in enumerate(lower):
            if l > j and len(d) == 1 and not _on_line(top_pts, cfg.points[d[0]]):
                return ChainsReject(
                    clause=f"point {d[0]} above the upper pair is off the circuit line"
                )
        high_pts = [cfg.points[x] for x in high]
        if affine_dim(top_pts + high_pts) != 2:
            return ChainsReject(clause="upper pair does not span a plane with the circuit line")
        normal, base = _plane_normal(top_pts + high_pts)
        for l, d in enumerate(lower):
            if i < l < j and len(d) == 1 and not _on_plane(normal, base, cfg.points[d[0]]):
                return ChainsReject(
                    clause=f"point {d[0]} between the pairs is off the spanning plane"
                )
        for x in low:
            if _on_plane(normal, base, cfg.points[x]):
                return ChainsReject(clause=f"lower pair point {x} lies on the spanning plane")
        return ChainsCase(
            case="d",
            circuit=top,
            circuit_type=ctype,
            low_pair=low,
            low_pair_level=i,
            high_pair=high,
            high_pair_level=j,
        )

    return ChainsReject(clause="difference sets below a size-3 circuit must be one triple or two pairs")


def _validate_flag(flag: Flag, size: int) -> None:
    assert flag, "flag must be nonempty"
    assert flag[-1] == tuple(range(size)), "top flag level must be the full index set"
    for prev, cur in zip(flag, flag[1:]):
        assert set(prev) < set(cur), "flag levels must be strictly nested"
    for level in flag:
        assert level == tuple(sorted(set(level))), "flag levels must be sorted tuples"


def all_flats(b: Matrix) -> tuple[tuple[int, ...], ...]:
    """All nonempty flats, smallest first (then lexicographic)."""
    s = len(b[0])
    assert s <= ENUMERATION_BOUND, f"flat enumeration is bounded to {ENUMERATION_BOUND} points"
    out = []
    for r in range(1, s + 1):
        for subset in combinations(range(s), r):
            if is_flat(b, subset):
                out.append(subset)
    return tuple(out)


def maximal_flat_chains(b: Matrix) -> tuple[Flag, ...]:
    """All chains of nonempty flats of length s - 4 ending at the full set."""
    s = len(b[0])
    target = s - 4
    full = tuple(range(s))
    flats = all_flats(b)
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for f in flats:
        by_size.setdefault(len(f), []).append(f)

    chains: list[Flag] = []

    def extend(chain: list[tuple[int, ...]]) -> None:
        if len(chain) == target:
            if chain[-1] == full:
                chains.append(tuple(chain))
            return
        cur = set(chain[-1]) if chain else set()
        remaining = target - len(chain)
        for size in range(len(cur) + 1, s - remaining + 2):
            for f in by_size.get(size, ()):
                if cur < set(f) or (not chain and cur <= set(f)):
                    chain.append(f)
                    extend(chain)
                    chain.pop()

    extend([])
    return tuple(sorted(chains))


def enumerate_flags_of_flats(cfg: PointConfig) -> tuple[tuple[Flag, ChainsCase], ...]:
    """All maximal flags of flats accepted by the four-case classifier."""
    b = gale_dual(cfg)
    out = []
    for chain in maximal_flat_chains(b):
        case = chains_case(cfg, chain)
        if isinstance(case, ChainsCase):
            out.append((chain, case))
    return tuple(out)


def is_defective(cfg: PointConfig, flag: Flag) -> tuple[bool, Vector | None]:
    """Whether a flag's indicator span meets the row span of the configuration
    matrix in more than the all-ones line; returns a witness vector if so.
    """
    s = cfg.size
    indicators = []
    for level in flag[:-1]:
        indicators.append(tuple(Fraction(1 if i in set(level) else 0) for i in range(s)))
    ones = tuple(Fraction(1) for _ in range(s))
    u_rows = indicators + [ones]
    w_rows = list(cfg.matrix_a)
    stacked = mat(u_rows + w_rows)
    if rank(stacked) == len(u_rows) + 3:
        return False, None
    # intersection = image of the kernel of [U^T | -W^T] under gamma -> sum gamma_i U_i
    columns = [list(r) for r in u_rows] + [[-x for x in r] for r in w_rows]
    m = transpose(mat([tuple(c) for c in columns]))
    for gamma in kernel_basis(m):
        w = [Fraction(0)] * s
        for coeff, row in zip(gamma[: len(u_rows)], u_rows):
            for i in range(s):
                w[i] += coeff * row[i]
        if any(x != 0 for x in w) and len({x for x in w}) > 1:
            return True, tuple(w)
    raise AssertionError("rank deficit without a non-constant intersection witness")


def _ordered_partitions(block: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All ordered partitions of a set into nonempty blocks (order of blocks matters)."""
    if not block:
        yield ()
        return
    for r in range(1, len(block) + 1):
        for first in combinations(block, r):
            remaining = tuple(i for i in block if i not in first)
            for tail in _ordered_partitions(remaining):
                yield (first,) + tail


def refine_to_accepted(cfg: PointConfig, flag: Flag) -> tuple[Flag, ChainsCase] | None:
    """A maximal refinement of a flag of flats accepted by the classifier.

    Refinement splits each difference set into an ordered run of sub-levels
    (all cumulative sets must be flats).  Returns the first accepted maximal
    refinement, or None.
    """
    s = cfg.size
    target = s - 4
    b = gale_dual(cfg)
    diffs = difference_sets(flag)

    def search(level_idx: int, built: list[tuple[int, ...]]) -> tuple[Flag, ChainsCase] | None:
        if level_idx == len(diffs):
            if len(built) != target:
                return None
            candidate = tuple(built)
            case = chains_case(cfg, candidate)
            if isinstance(case, ChainsCase):
                return candidate, case
            return None
        if len(built) >= target:
            return None
        prev = set(built[-1]) if built else set()
        for blocks in _ordered_partitions(diffs[level_idx]):
            cum = set(prev)
            levels = []
            ok = True
            for blk in blocks:
                cum |= set(blk)
                level = tuple(sorted(cum))
                if not is_flat(b, level):
                    ok = False
                    break
                levels.append(level)
            if not ok:
                continue
            found = search(level_idx + 1, built + levels)
            if found is not None:
                return found
        return None

    return search(0, [])
