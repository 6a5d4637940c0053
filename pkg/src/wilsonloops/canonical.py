"""Plaquette assignments, the height assignment and the canonical collection."""

from __future__ import annotations

import itertools
from collections.abc import Mapping

from . import kernels
from .geometry import InvariantViolation, is_balanced, regions
from .lattice import Plaquette, parse_loop, remove_backtracks


class ParityViolation(InvariantViolation):
    """A region has ``d - |h|`` odd."""


class PlaquetteAssignment(Mapping):
    """Immutable finite map ``Plaquette -> positive int``; absent means 0."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data=None):
        clean = {}
        for p, n in dict(data or {}).items():
            if not isinstance(p, Plaquette):
                p = Plaquette(*p)
            n = int(n)
            if n < 0:
                raise ValueError(f"negative count {n} at {p}")
            if n:
                clean[p] = n
        self._data = clean
        self._hash = None

    @classmethod
    def from_pairs(cls, pairs: Mapping) -> "PlaquetteAssignment":
        """Build from ``{(x, y): (K(p), K(p^-1))}`` keyed by positive plaquette."""
        data = {}
        for (x, y), (a, b) in pairs.items():
            data[Plaquette(x, y, 1)] = a
            data[Plaquette(x, y, -1)] = b
        return cls(data)

    def pairs(self) -> dict:
        """``{(x, y): (K(p), K(p^-1))}`` for every base in the support."""
        out = {}
        for p, n in self._data.items():
            a, b = out.get((p.x, p.y), (0, 0))
            out[(p.x, p.y)] = (a + n, b) if p.sign > 0 else (a, b + n)
        return out

    def __getitem__(self, p) -> int:
        return self._data.get(p, 0)

    def __iter__(self):
        return iter(sorted(self._data))

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, PlaquetteAssignment):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {p: n for p, n in other.items() if n}
        return NotImplemented

    def __add__(self, other: "PlaquetteAssignment") -> "PlaquetteAssignment":
        out = dict(self._data)
        for p, n in other.items():
            out[p] = out.get(p, 0) + n
        return PlaquetteAssignment(out)

    def __repr__(self) -> str:
        inner = ", ".join(f"{p.x},{p.y}{'+' if p.sign > 0 else '-'}:{n}" for p, n in self.items())
        return f"PlaquetteAssignment({{{inner}}})"

    @property
    def area(self) -> int:
        return sum(self._data.values())

    @property
    def is_zero(self) -> bool:
        return not self._data

    def support(self) -> set:
        """Bases of the unoriented plaquettes carrying a nonzero count."""
        return {(p.x, p.y) for p in self._data}

    def minus(self, p: Plaquette) -> "PlaquetteAssignment":
        """``K \\ p``: one fewer copy of ``p``."""
        if self[p] < 1:
            raise ValueError(f"{p} is not in the support")
        out = dict(self._data)
        out[p] -= 1
        return PlaquetteAssignment(out)

    def to_json(self) -> list:
        return [
            {"base": [p.x, p.y], "sign": "+" if p.sign > 0 else "-", "count": n}
            for p, n in sorted(self._data.items(), key=lambda kv: (kv[0].y, kv[0].x, -kv[0].sign))
        ]

    @classmethod
    def from_json(cls, items) -> "PlaquetteAssignment":
        data = {}
        for it in items:
            sign = 1 if it["sign"] in ("+", 1, "1") else -1
            p = Plaquette(int(it["base"][0]), int(it["base"][1]), sign)
            data[p] = data.get(p, 0) + int(it["count"])
        return cls(data)


ZERO = PlaquetteAssignment()


def height_assignment(loop) -> PlaquetteAssignment:
    """``K_l``: ``h`` copies of ``p^-1`` where ``h > 0``, ``|h|`` of ``p`` where ``h < 0``."""
    loop = parse_loop(loop)
    hmap = kernels.height_map(loop.origin[0], loop.origin[1], loop.moves)
    return PlaquetteAssignment.from_pairs(
        {b: ((0, h) if h >= 0 else (-h, 0)) for b, h in hmap.items() if h}
    )


def layer_counts(loop) -> list:
    """``(region, (d - |h|) / 2)`` for each interior region of the reduced loop."""
    loop = remove_backtracks(parse_loop(loop))
    out = []
    for r in regions(loop).interior:
        gap = r.d - abs(r.h)
        if gap < 0 or gap % 2:
            raise ParityViolation(f"region at {r.key()} has h={r.h}, d={r.d}")
        out.append((r, gap // 2))
    return out


def collection_size(loop) -> int:
    """Product of ``(d - |h|) / 2 + 1`` over interior regions."""
    size = 1
    for _, k in layer_counts(loop):
        size *= k + 1
    return size


def canonical_collection(loop) -> list[PlaquetteAssignment]:
    """All ``K_l + K'`` where ``K'`` adds up to ``(d - |h|) / 2`` double layers per region.

    Layer tuples are produced in lexicographic order over the interior
    regions, which are sorted by their lowest plaquette.
    """
    loop = remove_backtracks(parse_loop(loop))
    base = height_assignment(loop)
    table = layer_counts(loop)
    out = []
    for counts in itertools.product(*(range(k + 1) for _, k in table)):
        extra = {}
        for (r, _), k in zip(table, counts):
            if k:
                for b in r.plaquettes:
                    extra[Plaquette(b[0], b[1], 1)] = k
                    extra[Plaquette(b[0], b[1], -1)] = k
        K = base + PlaquetteAssignment(extra)
        if not is_balanced(loop, K):
            raise InvariantViolation(f"canonical assignment {K!r} is not balanced")
        out.append(K)
    return out


def is_canonical(loop, assignment) -> bool:
    K = assignment if isinstance(assignment, PlaquetteAssignment) else PlaquetteAssignment(assignment)
    return K in canonical_collection(loop)
