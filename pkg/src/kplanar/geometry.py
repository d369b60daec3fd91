"""Exact rational geometry: predicates, polyline drawings and brute-force counts.

All coordinates are ``int`` or :class:`fractions.Fraction`; no floating point
value ever enters a predicate.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

Point = tuple  # (x, y) with int/Fraction entries


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c: +1 counterclockwise, -1 clockwise, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _between(a, b, c) -> bool:
    return min(a, b) <= c <= max(a, b)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    return (
        _between(a[0], b[0], p[0])
        and _between(a[1], b[1], p[1])
        and orientation(a, b, p) == 0
    )


@dataclass(frozen=True)
class SegmentContact:
    """How two closed segments ab, cd meet.

    ``kind`` is one of ``"proper"`` (interiors cross in one point),
    ``"touch"`` (a single common point that is an endpoint of at least one
    segment) or ``"overlap"`` (collinear with more than one common point).
    """

    kind: str
    point: Point | None = None
    t_ab: Fraction | None = None
    t_cd: Fraction | None = None


def segment_contact(a: Point, b: Point, c: Point, d: Point) -> SegmentContact | None:
    # bounding boxes first; cheap rejection
    if max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0]):
        return None
    if max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1]):
        return None
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 == o2 == 0:
        # collinear: find the common part
        common = [p for p in (a, b) if on_segment(p, c, d)]
        common += [p for p in (c, d) if on_segment(p, a, b) and p not in common]
        if not common:
            return None
        if len(set(common)) == 1:
            p = common[0]
            return SegmentContact("touch", p)
        return SegmentContact("overlap")
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        rx, ry = b[0] - a[0], b[1] - a[1]
        sx, sy = d[0] - c[0], d[1] - c[1]
        den = rx * sy - ry * sx
        t = Fraction((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den
        u = Fraction((c[0] - a[0]) * ry - (c[1] - a[1]) * rx) / den
        p = (a[0] + t * rx, a[1] + t * ry)
        return SegmentContact("proper", p, t, u)
    # exactly one endpoint lies on the other segment
    for p in (a, b, c, d):
        if on_segment(p, a, b) and on_segment(p, c, d):
            return SegmentContact("touch", p)
    return None  # pragma: no cover - unreachable for non-degenerate input


@dataclass
class GeometricDrawing:
    """Vertices with exact coordinates and edges drawn as polylines."""

    vertices: dict[int, Point] = field(default_factory=dict)
    edges: dict[int, tuple[int, int, list[Point]]] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = {
            int(v): (as_fraction(p[0]), as_fraction(p[1])) for v, p in self.vertices.items()
        }
        self.edges = {
            int(e): (int(u), int(v), [(as_fraction(x), as_fraction(y)) for x, y in poly])
            for e, (u, v, poly) in self.edges.items()
        }

    def pieces(self) -> Iterator[tuple[int, int, Point, Point]]:
        """Yield (edge id, piece index, start, end) for every polyline piece."""
        for e in sorted(self.edges):
            poly = self.edges[e][2]
            for i in range(len(poly) - 1):
                yield e, i, poly[i], poly[i + 1]

    def __eq__(self, other):
        if not isinstance(other, GeometricDrawing):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges


def polyline_common_points(p: Sequence[Point], q: Sequence[Point]) -> set[Point] | None:
    """All common points of two polylines, or None if they overlap collinearly."""
    points: set[Point] = set()
    for i in range(len(p) - 1):
        for j in range(len(q) - 1):
            c = segment_contact(p[i], p[i + 1], q[j], q[j + 1])
            if c is None:
                continue
            if c.kind == "overlap":
                return None
            points.add(c.point)
    return points


def brute_force_crossings(gd: GeometricDrawing) -> dict[tuple[int, int], int]:
    """Count crossings for every edge pair by comparing all piece pairs.

    Quadratic in the number of polyline pieces; a common endpoint of two
    adjacent edges is not a crossing.  Used as an oracle for ingestion, so it
    shares no code with it beyond the segment predicate.
    """
    pts = list(gd.vertices.values()) + [p for _, _, poly in gd.edges.values() for p in poly]
    scale = integer_scale(pts)

    def sc(p):
        return (int(p[0] * scale), int(p[1] * scale))

    polys = {e: [sc(p) for p in poly] for e, (_, _, poly) in gd.edges.items()}
    boxes = {}
    for e, poly in polys.items():
        xs = [p[0] for p in poly]
        ys = [p[1] for p in poly]
        boxes[e] = (min(xs), max(xs), min(ys), max(ys))
    counts: dict[tuple[int, int], int] = {}
    ids = sorted(gd.edges)
    for a, b in combinations(ids, 2):
        ba, bb = boxes[a], boxes[b]
        if ba[1] < bb[0] or bb[1] < ba[0] or ba[3] < bb[2] or bb[3] < ba[2]:
            continue
        ua, va, _ = gd.edges[a]
        ub, vb, _ = gd.edges[b]
        pts = polyline_common_points(polys[a], polys[b])
        if pts is None:
            raise ValueError(f"edges {a} and {b} overlap")
        shared = {sc(gd.vertices[x]) for x in {ua, va} & {ub, vb}}
        n = len(pts - shared)
        if n:
            counts[(a, b)] = n
    return counts


def per_edge_crossings(pair_counts: dict[tuple[int, int], int], edges) -> dict[int, int]:
    out = {e: 0 for e in edges}
    for (a, b), n in pair_counts.items():
        out[a] += n
        out[b] += n
    return out


def direction_key(dx, dy):
    """Sort key for the counterclockwise angle of (dx, dy) in [0, 2*pi)."""
    upper = dy > 0 or (dy == 0 and dx > 0)
    return (0 if upper else 1, _Slope(dx, dy))


class _Slope:
    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        self.dx = dx
        self.dy = dy

    def __lt__(self, other):
        # within one half-plane, a before b iff b is counterclockwise of a
        return self.dx * other.dy - self.dy * other.dx > 0

    def __eq__(self, other):
        return self.dx * other.dy - self.dy * other.dx == 0


def integer_scale(points) -> int:
    """Smallest positive integer turning every coordinate into an integer."""
    scale = 1
    for x, y in points:
        for c in (x, y):
            d = c.denominator if isinstance(c, Fraction) else 1
            scale = scale * d // math.gcd(scale, d)
    return scale


def candidate_piece_pairs(pieces, cell: Fraction | int | None = None):
    """Pairs of piece indices whose bounding boxes share a grid cell.

    A uniform-grid filter; every pair of intersecting pieces is reported at
    least once (each pair at most once).
    """
    if not pieces:
        return []
    if cell is None:
        total = sum(abs(p[1][0] - p[0][0]) + abs(p[1][1] - p[0][1]) for p in pieces)
        cell = max(Fraction(total, 2 * len(pieces)), Fraction(1))
    grid = defaultdict(list)
    for idx, (a, b) in enumerate(pieces):
        x0, x1 = sorted((a[0], b[0]))
        y0, y1 = sorted((a[1], b[1]))
        for gx in range(int(x0 // cell), int(x1 // cell) + 1):
            for gy in range(int(y0 // cell), int(y1 // cell) + 1):
                grid[(gx, gy)].append(idx)
    seen = set()
    for bucket in grid.values():
        for i, j in combinations(bucket, 2):
            if (i, j) not in seen:
                seen.add((i, j))
    return sorted(seen)
