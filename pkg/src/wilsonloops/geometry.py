"""Height and distance fields of a loop, plaquette regions and balance.

Fields are keyed by the base ``(x, y)`` of the unoriented plaquette (its
lower-left corner) and computed on the loop's bounding box expanded by a
margin; outside that box both fields vanish.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter, deque
from dataclasses import dataclass, field

from . import kernels
from .lattice import Loop, OrientedEdge, Plaquette, parse_loop, plaquettes_containing

MARGIN = 2


class HDnotConstant(RuntimeError):
    """Height or distance varies inside one region; indicates a bug."""


class InvariantViolation(RuntimeError):
    """A structural property that should hold for every loop failed."""


@dataclass(frozen=True)
class Box:
    """Inclusive range of plaquette bases ``x0..x1`` by ``y0..y1``."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __contains__(self, b) -> bool:
        return self.x0 <= b[0] <= self.x1 and self.y0 <= b[1] <= self.y1

    def bases(self):
        for y in range(self.y0, self.y1 + 1):
            for x in range(self.x0, self.x1 + 1):
                yield (x, y)

    def on_border(self, b) -> bool:
        return b[0] in (self.x0, self.x1) or b[1] in (self.y0, self.y1)

    def neighbours(self, b):
        x, y = b
        if x < self.x1:
            yield (x + 1, y), OrientedEdge(x + 1, y, "U")
        if x > self.x0:
            yield (x - 1, y), OrientedEdge(x, y, "U")
        if y < self.y1:
            yield (x, y + 1), OrientedEdge(x, y + 1, "R")
        if y > self.y0:
            yield (x, y - 1), OrientedEdge(x, y, "R")


def working_box(loop: Loop, margin: int = MARGIN) -> Box:
    xmin, ymin, xmax, ymax = loop.bbox()
    return Box(xmin - margin, ymin - margin, xmax - 1 + margin, ymax - 1 + margin)


def _key(p):
    return (p.x, p.y) if isinstance(p, Plaquette) else (p[0], p[1])


@dataclass(frozen=True)
class _Field:
    box: Box
    values: dict = field(repr=False)

    def __getitem__(self, p) -> int:
        return self.values.get(_key(p), 0)

    def nonzero(self) -> dict:
        return {b: v for b, v in self.values.items() if v}

    def grid(self) -> list[list[int]]:
        """Rows from top (``y1``) to bottom, for display and JSON."""
        return [
            [self[(x, y)] for x in range(self.box.x0, self.box.x1 + 1)]
            for y in range(self.box.y1, self.box.y0 - 1, -1)
        ]


class HeightField(_Field):
    """``h(p)``; the same value serves ``p`` and ``p^-1``."""


class DistanceField(_Field):
    """``d(p)``, the least number of loop-edge copies crossed to escape."""


def _crossing(mult: Counter, edge: OrientedEdge, step: tuple[int, int]) -> int:
    """Signed count of copies of ``edge`` crossed by the dual step ``step``.

    A copy with direction ``v`` contributes ``sign(step x v)``.
    """
    total = 0
    for e in (edge, edge.inverse()):
        n = mult.get(e, 0)
        if n:
            vx, vy = kernels.STEP[e.dir]
            total += n * (1 if step[0] * vy - step[1] * vx > 0 else -1)
    return total


def height(loop, margin: int = MARGIN, sweep: str = "row") -> HeightField:
    """Height field by a row-major (default) or column-major dual sweep."""
    loop = parse_loop(loop)
    box = working_box(loop, margin)
    if sweep == "row":
        vals = kernels.height_map(loop.origin[0], loop.origin[1], loop.moves)
        return HeightField(box, {b: v for b, v in vals.items() if v})
    if sweep != "column":
        raise ValueError(f"unknown sweep {sweep!r}")
    mult = Counter(loop)
    vals = {}
    for x in range(box.x0, box.x1 + 1):
        h = 0
        for y in range(box.y0, box.y1 + 1):
            if y > box.y0:
                h += _crossing(mult, OrientedEdge(x, y, "R"), (0, 1))
            if h:
                vals[(x, y)] = h
    return HeightField(box, vals)


def winding_number_oracle(loop, base) -> int:
    """Winding of ``loop`` around the centre of plaquette ``base``.

    Computed by summing turning angles in floating point, independently of
    the dual sweeps; the sign is flipped so that the positive unit
    plaquette (traversed clockwise) winds ``+1``.
    """
    loop = parse_loop(loop)
    cx, cy = base[0] + 0.5, base[1] + 0.5
    total = 0.0
    for e in loop:
        ax, ay = e.tail
        bx, by = e.head
        a = math.atan2(ay - cy, ax - cx)
        b = math.atan2(by - cy, bx - cx)
        d = b - a
        while d > math.pi:
            d -= 2 * math.pi
        while d < -math.pi:
            d += 2 * math.pi
        total += d
    return -round(total / (2 * math.pi))


def distance(loop, margin: int = MARGIN) -> DistanceField:
    """Distance to infinity via Dijkstra on the dual grid of the working box."""
    loop = parse_loop(loop)
    box = working_box(loop, margin)
    weight = Counter(e.unoriented() for e in loop)
    dist = {}
    heap = [(0, b) for b in box.bases() if box.on_border(b)]
    heapq.heapify(heap)
    while heap:
        d, b = heapq.heappop(heap)
        if b in dist:
            continue
        dist[b] = d
        for nb, edge in box.neighbours(b):
            if nb not in dist:
                heapq.heappush(heap, (d + weight.get(edge, 0), nb))
    return DistanceField(box, {b: v for b, v in dist.items() if v})


@dataclass(frozen=True)
class Region:
    plaquettes: frozenset
    exterior: bool
    h: int
    d: int

    @property
    def area(self) -> int:
        return len(self.plaquettes)

    @property
    def layers(self) -> int:
        """Number of optional double layers, ``(d - |h|) / 2``."""
        return (self.d - abs(self.h)) // 2

    def key(self):
        return min(self.plaquettes, key=lambda b: (b[1], b[0]))

    def to_json(self) -> dict:
        return {
            "plaquettes": sorted([list(b) for b in self.plaquettes], key=lambda b: (b[1], b[0])),
            "h": self.h,
            "d": self.d,
            "area": self.area,
            "exterior": self.exterior,
        }


@dataclass(frozen=True)
class RegionDecomposition:
    box: Box
    regions: tuple
    heights: HeightField
    distances: DistanceField

    @property
    def exterior(self) -> Region:
        return next(r for r in self.regions if r.exterior)

    @property
    def interior(self) -> list[Region]:
        return [r for r in self.regions if not r.exterior]


def regions(loop, margin: int = MARGIN) -> RegionDecomposition:
    """Components of the complement of the loop, annotated with ``h`` and ``d``.

    Interior regions are sorted by their lowest (row-major) plaquette.
    """
    loop = parse_loop(loop)
    box = working_box(loop, margin)
    hf = height(loop, margin)
    df = distance(loop, margin)
    used = {e.unoriented() for e in loop}
    seen = set()
    found = []
    for start in box.bases():
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        exterior = False
        while queue:
            b = queue.popleft()
            exterior = exterior or box.on_border(b)
            for nb, edge in box.neighbours(b):
                if nb not in seen and edge not in used:
                    seen.add(nb)
                    comp.add(nb)
                    queue.append(nb)
        hs = {hf[b] for b in comp}
        ds = {df[b] for b in comp}
        if len(hs) != 1 or len(ds) != 1:
            raise HDnotConstant(f"region at {min(comp)} has h in {sorted(hs)}, d in {sorted(ds)}")
        found.append(Region(frozenset(comp), exterior, hs.pop(), ds.pop()))
    ext = [r for r in found if r.exterior]
    if len(ext) != 1 or ext[0].h or ext[0].d:
        raise HDnotConstant("exterior region is not unique or has nonzero h/d")
    interior = sorted((r for r in found if not r.exterior), key=lambda r: r.key()[::-1])
    return RegionDecomposition(box, tuple(ext + interior), hf, df)


def support_area(loop) -> int:
    """Number of unoriented plaquettes not in the exterior region."""
    loop = parse_loop(loop)
    if loop.is_null:
        return 0
    return sum(r.area for r in regions(loop).interior)


def check_height_distance(loop, margin: int = MARGIN) -> None:
    """Raise if ``|h| > d`` or ``d - |h|`` is odd anywhere in the box."""
    loop = parse_loop(loop)
    hf = height(loop, margin)
    df = distance(loop, margin)
    for b in hf.box.bases():
        h, d = hf[b], df[b]
        if abs(h) > d or (d - abs(h)) % 2:
            raise InvariantViolation(f"plaquette {b}: h={h}, d={d}")


def is_balanced(loop, assignment) -> bool:
    """Edge-count balance: ``n_e(l,K) == n_{e^-1}(l,K)`` for every edge.

    ``n_e(l,K)`` counts copies of ``e`` in the loop plus ``K(p)`` over the
    two plaquettes ``p`` whose boundary contains ``e``.
    """
    loop = parse_loop(loop)
    items = dict(assignment.items()) if assignment is not None else {}
    count = Counter(loop)
    touched = {e.unoriented() for e in count}
    for p, n in items.items():
        if n:
            touched.update(e.unoriented() for e in p.edges())

    def n_of(e):
        return count.get(e, 0) + sum(items.get(p, 0) for p in plaquettes_containing(e))

    return all(n_of(e) == n_of(e.inverse()) for e in touched)


def string_height(loops, margin: int = MARGIN) -> dict:
    """Height of a string of loops: the sum of the individual fields."""
    out = Counter()
    for l in loops:
        out.update(height(l, margin).values)
    return {b: v for b, v in out.items() if v}


def string_distance(loops, margin: int = MARGIN) -> dict:
    """Distance of a string of loops: the sum of the individual fields."""
    out = Counter()
    for l in loops:
        out.update(distance(l, margin).values)
    return {b: v for b, v in out.items() if v}
