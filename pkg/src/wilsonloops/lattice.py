"""Z^2 combinatorics: oriented edges, plaquettes and loops as cyclic words.

A loop is stored as a start vertex plus a move string over ``R U L D``
(``+x, +y, -x, -y``).  A positively oriented plaquette is the unit square
whose leftmost edge points up, i.e. the word ``URDL`` read from its
lower-left corner; its inverse is ``RULD``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from . import kernels
from .kernels import INVERSE, STEP


class LoopError(ValueError):
    """Malformed loop description."""


class NotClosed(LoopError):
    pass


class NonAdjacentStep(LoopError):
    pass


class LatticePoint(NamedTuple):
    x: int
    y: int


class OrientedEdge(NamedTuple):
    x: int
    y: int
    dir: str  # one of "RULD"

    @property
    def tail(self) -> LatticePoint:
        return LatticePoint(self.x, self.y)

    @property
    def head(self) -> LatticePoint:
        dx, dy = STEP[self.dir]
        return LatticePoint(self.x + dx, self.y + dy)

    def inverse(self) -> "OrientedEdge":
        hx, hy = self.head
        return OrientedEdge(hx, hy, INVERSE[self.dir])

    @property
    def positive(self) -> bool:
        return self.dir in "RU"

    def unoriented(self) -> "OrientedEdge":
        """The positively oriented member of ``{e, e^-1}``."""
        return self if self.positive else self.inverse()


class Plaquette(NamedTuple):
    x: int
    y: int
    sign: int  # +1 or -1

    def inverse(self) -> "Plaquette":
        return Plaquette(self.x, self.y, -self.sign)

    def unoriented(self) -> "Plaquette":
        return Plaquette(self.x, self.y, 1)

    @property
    def word(self) -> str:
        return "URDL" if self.sign > 0 else "RULD"

    def edges(self) -> list[OrientedEdge]:
        return list(_walk(self.x, self.y, self.word))

    def path_after(self, edge: OrientedEdge) -> str:
        """The three moves of this plaquette following ``edge``."""
        for i, e in enumerate(self.edges()):
            if e == edge:
                w = self.word
                return w[i + 1:] + w[:i]
        raise ValueError(f"{edge} is not an edge of {self}")


def _walk(x: int, y: int, moves: str) -> Iterator[OrientedEdge]:
    for m in moves:
        yield OrientedEdge(x, y, m)
        dx, dy = STEP[m]
        x += dx
        y += dy


def plaquettes_containing(e: OrientedEdge) -> list[Plaquette]:
    """The two oriented plaquettes whose boundary word contains ``e``.

    The positive one is listed first.
    """
    x, y, d = e
    if d == "U":
        return [Plaquette(x, y, 1), Plaquette(x - 1, y, -1)]
    if d == "R":
        return [Plaquette(x, y - 1, 1), Plaquette(x, y, -1)]
    if d == "D":
        return [Plaquette(x - 1, y - 1, 1), Plaquette(x, y - 1, -1)]
    return [Plaquette(x - 1, y, 1), Plaquette(x - 1, y - 1, -1)]


@dataclass(frozen=True)
class Loop:
    """A closed lattice path.  ``origin`` is the tail of ``moves[0]``."""

    origin: tuple[int, int]
    moves: str

    def __post_init__(self):
        bad = set(self.moves) - set("RULD")
        if bad:
            raise LoopError(f"unknown moves {sorted(bad)}")
        if kernels.displacement(self.moves) != (0, 0):
            raise NotClosed(f"moves {self.moves!r} do not return to the origin")
        object.__setattr__(self, "origin", (int(self.origin[0]), int(self.origin[1])))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[OrientedEdge]:
        return _walk(self.origin[0], self.origin[1], self.moves)

    @property
    def is_null(self) -> bool:
        return not self.moves

    def edges(self) -> list[OrientedEdge]:
        return list(self)

    def vertices(self) -> list[LatticePoint]:
        return [e.tail for e in self]

    def rotate(self, k: int) -> "Loop":
        """Same cyclic word, read from position ``k``."""
        if not self.moves:
            return self
        k %= len(self.moves)
        dx, dy = kernels.displacement(self.moves[:k])
        return Loop((self.origin[0] + dx, self.origin[1] + dy), self.moves[k:] + self.moves[:k])

    def translate(self, dx: int, dy: int) -> "Loop":
        return Loop((self.origin[0] + dx, self.origin[1] + dy), self.moves)

    def inverse(self) -> "Loop":
        if not self.moves:
            return self
        rev = "".join(INVERSE[m] for m in reversed(self.moves))
        return Loop(self.origin, rev)

    def canonical(self) -> "Loop":
        """Least rotation of the word; used for all semantic comparisons."""
        return self.rotate(kernels.least_rotation(self.moves))

    def same_cycle(self, other: "Loop") -> bool:
        return self.canonical() == other.canonical()

    def is_simple(self) -> bool:
        v = self.vertices()
        return len(set(v)) == len(v)

    def bbox(self) -> tuple[int, int, int, int]:
        """``(xmin, ymin, xmax, ymax)`` over the loop's vertices."""
        if not self.moves:
            return (self.origin[0], self.origin[1], self.origin[0], self.origin[1])
        xs = [p.x for p in self.vertices()]
        ys = [p.y for p in self.vertices()]
        return min(xs), min(ys), max(xs), max(ys)

    def to_json(self) -> dict:
        return {"origin": list(self.origin), "moves": self.moves}

    def __str__(self) -> str:
        if not self.moves:
            return "∅"
        return f"{self.moves}@{self.origin}"


NULL_LOOP = Loop((0, 0), "")


def plaquette_loop(p: Plaquette) -> Loop:
    return Loop((p.x, p.y), p.word)


def rectangle(w: int, h: int, origin=(0, 0)) -> Loop:
    """Positively oriented ``w x h`` rectangle with lower-left corner ``origin``."""
    return Loop(origin, "U" * h + "R" * w + "D" * h + "L" * w)


def parse_loop(spec) -> Loop:
    """Build a loop from a move string, a JSON-style dict or a vertex list.

    Accepted forms: ``"URDL"`` (origin (0, 0)); ``{"origin": [x, y],
    "moves": "..."}``; ``{"vertices": [[x, y], ...]}`` (closing step
    implied when the last vertex differs from the first); a list of pairs.
    """
    if isinstance(spec, Loop):
        return spec
    if isinstance(spec, str):
        return Loop((0, 0), spec.strip().upper())
    if isinstance(spec, dict):
        if "moves" in spec:
            origin = spec.get("origin", (0, 0))
            return Loop((origin[0], origin[1]), str(spec["moves"]).strip().upper())
        if "vertices" in spec:
            return _from_vertices(spec["vertices"])
        raise LoopError("loop description needs 'moves' or 'vertices'")
    return _from_vertices(spec)


_DIR_OF = {v: k for k, v in STEP.items()}


def _from_vertices(vertices) -> Loop:
    pts = [tuple(int(c) for c in v) for v in vertices]
    if not pts:
        return NULL_LOOP
    if pts[-1] == pts[0] and len(pts) > 1:
        pts = pts[:-1]
    moves = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        step = (b[0] - a[0], b[1] - a[1])
        if step not in _DIR_OF:
            if b == pts[0] and a == pts[-1]:
                raise NotClosed(f"last vertex {a} is not adjacent to first vertex {b}")
            raise NonAdjacentStep(f"{a} -> {b} is not a unit step")
        moves.append(_DIR_OF[step])
    if len(pts) == 1:
        return Loop(pts[0], "")
    return Loop(pts[0], "".join(moves))


def load_loop(path) -> Loop:
    with open(path) as fh:
        return parse_loop(json.load(fh))


def remove_backtracks(loop: Loop) -> Loop:
    """Delete adjacent cyclic pairs ``e e^-1`` until none remain."""
    x, y, moves = kernels.reduce_word(loop.origin[0], loop.origin[1], loop.moves)
    return Loop((x, y), moves)


def wind(loop: Loop, n: int) -> Loop:
    if n < 1:
        raise ValueError("winding number must be a positive integer")
    if loop.is_null:
        raise ValueError("cannot wind the null loop")
    return Loop(loop.origin, loop.moves * n)


def edge_multiplicities(loop: Loop) -> Counter:
    """``n_e(l)`` for every oriented edge with a nonzero count."""
    return Counter(loop)


def unoriented_multiplicities(loop: Loop) -> Counter:
    """``n_eps(l) = n_e + n_{e^-1}`` keyed by the positive representative."""
    return Counter(e.unoriented() for e in loop)


def canonical_key(loop: Loop, assignment=None, *, dihedral: bool = False):
    """Normal form of ``(loop, K)`` under joint translation and rotation.

    ``assignment`` is a :class:`~wilsonloops.canonical.PlaquetteAssignment`
    or any mapping ``Plaquette -> count``.  With ``dihedral=True`` the key is
    also minimised over the eight lattice symmetries (experimental; see
    :func:`dihedral_images`).
    """
    if dihedral:
        return min(canonical_key(l, k) for l, k in dihedral_images(loop, assignment))
    items = dict(assignment.items()) if assignment is not None else {}
    if loop.is_null:
        if not items:
            return ("", ())
        bx = min(p.x for p in items)
        by = min(p.y for p in items if p.x == bx)
        ox, oy = bx, by
        moves = ""
    else:
        c = loop.canonical()
        ox, oy = c.origin
        moves = c.moves
    kpart = tuple(sorted((p.x - ox, p.y - oy, p.sign, n) for p, n in items.items() if n))
    return (moves, kpart)


# The eight symmetries of Z^2 as maps on moves and on points.
_SYMMETRIES = [
    ({"R": "R", "U": "U", "L": "L", "D": "D"}, lambda x, y: (x, y)),
    ({"R": "U", "U": "L", "L": "D", "D": "R"}, lambda x, y: (-y, x)),
    ({"R": "L", "U": "D", "L": "R", "D": "U"}, lambda x, y: (-x, -y)),
    ({"R": "D", "U": "R", "L": "U", "D": "L"}, lambda x, y: (y, -x)),
    ({"R": "L", "U": "U", "L": "R", "D": "D"}, lambda x, y: (-x, y)),
    ({"R": "R", "U": "D", "L": "L", "D": "U"}, lambda x, y: (x, -y)),
    ({"R": "U", "U": "R", "L": "D", "D": "L"}, lambda x, y: (y, x)),
    ({"R": "D", "U": "L", "L": "U", "D": "R"}, lambda x, y: (-y, -x)),
]


def dihedral_images(loop: Loop, assignment=None):
    """Images of ``(loop, K)`` under the eight symmetries of Z^2.

    Plaquette orientation follows the image of its boundary word, so a
    reflection swaps ``p`` and ``p^-1``.
    """
    from .canonical import PlaquetteAssignment

    items = dict(assignment.items()) if assignment is not None else {}
    for mmap, pmap in _SYMMETRIES:
        ox, oy = pmap(*loop.origin)
        img = Loop((ox, oy), "".join(mmap[m] for m in loop.moves))
        kimg = {}
        for p, n in items.items():
            q = plaquette_loop(p)
            qx, qy = pmap(*q.origin)
            ql = Loop((qx, qy), "".join(mmap[m] for m in q.moves))
            kimg[_plaquette_of_loop(ql)] = n
        yield img, PlaquetteAssignment(kimg)


def _plaquette_of_loop(l: Loop) -> Plaquette:
    xmin, ymin, _, _ = l.bbox()
    for sign in (1, -1):
        cand = Plaquette(xmin, ymin, sign)
        if plaquette_loop(cand).same_cycle(l):
            return cand
    raise ValueError(f"{l} is not a plaquette")
