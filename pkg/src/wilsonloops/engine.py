"""Exact coefficients ``c(l, K)`` by memoized recursion on the master loop equation.

At every step the loop is reduced, checked against the base cases, put in
canonical position (least rotation, translated to the origin) and then
explored at one edge copy ``e``:

* each other copy of ``e`` gives a positive splitting (sign -),
* each copy of ``e^-1`` gives a negative splitting (sign +),
* each plaquette of ``P(e^-1)`` with ``K >= 1`` gives a negative
  deformation (sign +), each plaquette of ``P(e)`` with ``K >= 1`` a
  positive one (sign -); both remove one copy of the plaquette from ``K``.

Splittings sum over all ``K1 + K2 = K`` with both halves balanced.  Every
recursive call strictly lowers ``(area(K), word length)`` in lexicographic
order, so the recursion terminates.

Internally an assignment is a dict ``{(x, y): (K(p), K(p^-1))}`` keyed by
the base of the positive plaquette, with zero pairs omitted.  The
recursion only adds and multiplies integers, so coefficients are exact
Python ints; the public API returns them as ``Fraction``.
"""

from __future__ import annotations

import itertools
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .canonical import PlaquetteAssignment, canonical_collection
from .kernels import INVERSE, STEP, displacement, height_map, least_rotation, reduce_word
from .lattice import Loop, Plaquette, parse_loop, remove_backtracks
from .polynomial import BetaPolynomial

STRATEGIES = ("first", "boundary", "min_branch")
DEFAULT_STRATEGY = "boundary"

# Moves of a plaquette after the copy of an edge with the given direction.
POS_REST = {"U": "RDL", "R": "DLU", "D": "LUR", "L": "URD"}
NEG_REST = {"R": "ULD", "U": "LDR", "L": "DRU", "D": "RUL"}


class MemoLimitExceeded(RuntimeError):
    pass


class MemoConflict(AssertionError):
    """A key was re-inserted with a different value."""


class TerminationViolation(AssertionError):
    pass


def _plaquette_bases(x: int, y: int, d: str):
    """Bases of the positive and the negative plaquette containing edge ``(x, y, d)``."""
    if d == "U":
        return (x, y), (x - 1, y)
    if d == "R":
        return (x, y - 1), (x, y)
    if d == "D":
        return (x - 1, y - 1), (x, y - 1)
    return (x - 1, y), (x - 1, y - 1)


def _tails(x: int, y: int, moves: str) -> list:
    out = []
    for m in moves:
        out.append((x, y))
        dx, dy = STEP[m]
        x += dx
        y += dy
    return out


def _area(kp: dict) -> int:
    return sum(a + b for a, b in kp.values())


def _balanced(hmap: dict, kp: dict) -> bool:
    """``K(p^-1) - K(p) == h(p)`` for every positive plaquette."""
    for base, (a, b) in kp.items():
        if b - a != hmap.get(base, 0):
            return False
    for base in hmap:
        if base not in kp:
            return False
    return True


def _decompositions(h1: dict, kp: dict):
    """All ``(K1, K2)`` with ``K1 + K2 = K`` and ``K1(p^-1) - K1(p) = h1(p)``.

    The condition factorises over plaquettes: at a base with ``K = (a, b)``
    and ``h1 = t`` the admissible ``K1`` are ``(x, x + t)`` with
    ``max(0, -t) <= x <= min(a, b - t)``.
    """
    for base in h1:
        if base not in kp:
            return
    bases = []
    choices = []
    for base, (a, b) in kp.items():
        t = h1.get(base, 0)
        lo, hi = max(0, -t), min(a, b - t)
        if lo > hi:
            return
        bases.append(base)
        choices.append(range(lo, hi + 1))
    for xs in itertools.product(*choices):
        k1 = {}
        k2 = {}
        for base, x in zip(bases, xs):
            a, b = kp[base]
            t = h1.get(base, 0)
            if x or t:
                k1[base] = (x, x + t)
            if a - x or b - x - t:
                k2[base] = (a - x, b - x - t)
        yield k1, k2


def _ray_scores(moves: str, tails: list) -> list:
    """For each edge copy, loop-edge copies crossed by the cheaper straight dual ray."""
    rows = {}
    cols = {}
    for (x, y), m in zip(tails, moves):
        if m == "U":
            rows.setdefault(y, []).append(x)
        elif m == "D":
            rows.setdefault(y - 1, []).append(x)
        elif m == "R":
            cols.setdefault(x, []).append(y)
        else:
            cols.setdefault(x - 1, []).append(y)
    scores = []
    for (x, y), m in zip(tails, moves):
        if m in "UD":
            pos, line = x, rows[y if m == "U" else y - 1]
        else:
            pos, line = y, cols[x if m == "R" else x - 1]
        below = sum(1 for v in line if v < pos)
        above = sum(1 for v in line if v > pos)
        scores.append(min(below, above))
    return scores


def _branch_counts(moves: str, tails: list, kp: dict) -> list:
    count = Counter(zip(tails, moves))
    out = []
    for (x, y), m in zip(tails, moves):
        dx, dy = STEP[m]
        inv = ((x + dx, y + dy), INVERSE[m])
        splits = count[((x, y), m)] - 1 + count.get(inv, 0)
        b1, b2 = _plaquette_bases(x, y, m)
        a1, c1 = kp.get(b1, (0, 0))
        a2, c2 = kp.get(b2, (0, 0))
        deforms = (a1 > 0) + (c1 > 0) + (a2 > 0) + (c2 > 0)
        out.append(splits + deforms)
    return out


def _choose(strategy: str, moves: str, tails: list, kp: dict) -> int:
    if strategy == "first":
        return 0
    if strategy == "boundary":
        scores = _ray_scores(moves, tails)
    elif strategy == "min_branch":
        scores = _branch_counts(moves, tails, kp)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return min(range(len(moves)), key=lambda i: (scores[i], i))


class MemoStore:
    """Canonical key -> coefficient, with idempotent inserts and an optional size cap.

    The cap defaults to the ``WILSON_MEMO_LIMIT`` environment variable.
    """

    def __init__(self, limit: int | None = None):
        if limit is None:
            env = os.environ.get("WILSON_MEMO_LIMIT")
            limit = int(env) if env else None
        self.limit = limit
        self._d = {}
        self.hits = 0

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, key) -> bool:
        return key in self._d

    def get(self, key):
        v = self._d.get(key)
        if v is not None:
            self.hits += 1
        return v

    def insert(self, key, value) -> None:
        old = self._d.get(key)
        if old is not None:
            if old != value:
                raise MemoConflict(f"memo key {key!r}: stored {old}, new {value}")
            return
        if self.limit is not None and len(self._d) >= self.limit:
            raise MemoLimitExceeded(f"memo store exceeded {self.limit} entries")
        self._d[key] = value

    def items(self):
        return self._d.items()


class Engine:
    """Stateful evaluator: a memo store plus counters and an edge strategy."""

    def __init__(self, strategy: str = DEFAULT_STRATEGY, memo: MemoStore | None = None, debug: bool | None = None):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
        self.strategy = strategy
        self.memo = memo if memo is not None else MemoStore()
        if debug is None:
            debug = os.environ.get("WILSON_DEBUG", "") in ("1", "true", "yes")
        self.debug = debug
        self.calls = 0

    # -- internal recursion -------------------------------------------------

    def _check_measure(self, parent, area, length):
        if (area, length) >= parent:
            raise TerminationViolation(f"measure {(area, length)} does not decrease below {parent}")

    def _coef(self, x: int, y: int, moves: str, kp: dict, root: int | None = None) -> int:
        self.calls += 1
        if root is None:
            x, y, moves = reduce_word(x, y, moves)
        if not moves:
            return 0 if kp else 1
        if not kp:
            return 0
        hmap = height_map(x, y, moves)
        if not _balanced(hmap, kp):
            return 0
        n = len(moves)
        if root is None:
            k = least_rotation(moves)
            dx, dy = displacement(moves[:k])
            ox, oy = x + dx, y + dy
            moves = moves[k:] + moves[:k]
        else:
            ox, oy = x, y
        kp = {(bx - ox, by - oy): v for (bx, by), v in kp.items()}
        key = (moves, tuple(sorted((bx, by, a, b) for (bx, by), (a, b) in kp.items())))
        if root is None:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        tails = _tails(0, 0, moves)
        i = root if root is not None else _choose(self.strategy, moves, tails, kp)
        value = self._explore(moves, tails, kp, i, (_area(kp), n))
        if root is None:
            self.memo.insert(key, value)
        return value

    def _explore(self, moves: str, tails: list, kp: dict, i: int, measure) -> int:
        n = len(moves)
        w = moves[i:] + moves[:i]
        t = tails[i:] + tails[:i]
        (ex, ey), d = t[0], w[0]
        sx, sy = STEP[d]
        head = (ex + sx, ey + sy)
        inv = INVERSE[d]
        total = 0

        for j in range(1, n):
            if w[j] == d and t[j] == (ex, ey):
                # e pi2 e' pi3 -> {e pi3, pi2 e'}
                m1 = d + w[j + 1:]
                m2 = w[1:j + 1]
                total -= self._split(ex, ey, m1, head[0], head[1], m2, kp, measure)
            elif w[j] == inv and t[j] == head:
                # e pi2 e^-1 pi3 -> {pi3, pi2}
                m1 = w[j + 1:]
                m2 = w[1:j]
                total += self._split(ex, ey, m1, head[0], head[1], m2, kp, measure)

        b1, b2 = _plaquette_bases(ex, ey, d)
        a1, c1 = kp.get(b1, (0, 0))
        a2, c2 = kp.get(b2, (0, 0))
        rest = w[1:]
        # negative deformations: plaquettes of P(e^-1) are (b1, -) and (b2, +)
        if c1:
            total += self._deform(ex, ey, NEG_REST[inv] + rest, kp, b1, (a1, c1 - 1), measure)
        if a2:
            total += self._deform(ex, ey, POS_REST[inv] + rest, kp, b2, (a2 - 1, c2), measure)
        # positive deformations: plaquettes of P(e) are (b1, +) and (b2, -)
        if a1:
            total -= self._deform(ex, ey, d + POS_REST[d] + w, kp, b1, (a1 - 1, c1), measure)
        if c2:
            total -= self._deform(ex, ey, d + NEG_REST[d] + w, kp, b2, (a2, c2 - 1), measure)
        return total

    def _deform(self, x, y, moves, kp, base, pair, measure) -> int:
        k2 = dict(kp)
        if pair == (0, 0):
            del k2[base]
        else:
            k2[base] = pair
        if self.debug:
            self._check_measure(measure, measure[0] - 1, len(moves))
        return self._coef(x, y, moves, k2)

    def _split(self, x1, y1, m1, x2, y2, m2, kp, measure) -> int:
        x1, y1, m1 = reduce_word(x1, y1, m1)
        x2, y2, m2 = reduce_word(x2, y2, m2)
        h1 = height_map(x1, y1, m1)
        total = 0
        for k1, k2 in _decompositions(h1, kp):
            if self.debug:
                self._check_measure(measure, _area(k1), len(m1))
                self._check_measure(measure, _area(k2), len(m2))
            # evaluate the shorter loop first; skip the other factor on zero
            if len(m1) <= len(m2):
                c = self._coef(x1, y1, m1, k1)
                if c:
                    total += c * self._coef(x2, y2, m2, k2)
            else:
                c = self._coef(x2, y2, m2, k2)
                if c:
                    total += c * self._coef(x1, y1, m1, k1)
        return total

    # -- public entry points ------------------------------------------------

    def coefficient(self, loop, assignment, root_index: int | None = None) -> Fraction:
        """``c(l, K)``.

        ``root_index`` forces the exploration edge at the top level: it is an
        index into the word of ``remove_backtracks(loop)``.
        """
        loop = remove_backtracks(parse_loop(loop))
        kp = _as_pairs(assignment)
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20000))
        try:
            if root_index is None or loop.is_null:
                return Fraction(self._coef(loop.origin[0], loop.origin[1], loop.moves, kp))
            if not 0 <= root_index < len(loop):
                raise IndexError(f"root index {root_index} out of range for word of length {len(loop)}")
            return Fraction(self._coef(loop.origin[0], loop.origin[1], loop.moves, kp, root=root_index))
        finally:
            sys.setrecursionlimit(old)

    def stats(self) -> dict:
        return {
            "memo_entries": len(self.memo),
            "memo_hits": self.memo.hits,
            "recursion_calls": self.calls,
            "strategy": self.strategy,
            "backend": kernels.BACKEND,
        }


def _as_pairs(assignment) -> dict:
    if assignment is None:
        return {}
    if not isinstance(assignment, PlaquetteAssignment):
        assignment = PlaquetteAssignment(assignment)
    return assignment.pairs()


# -- module-level API --------------------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    loops: tuple  # (l1, l2), backtracks kept
    sign: str  # "positive" or "negative"
    other_index: int  # index of the partner copy in the input word


@dataclass(frozen=True)
class DeformResult:
    loop: Loop
    plaquette: Plaquette
    sign: str


def enumerate_splittings(loop, at: int) -> list[SplitResult]:
    """Positive and negative splittings of ``loop`` at word index ``at``."""
    loop = parse_loop(loop)
    n = len(loop)
    edges = loop.edges()
    e = edges[at]
    einv = e.inverse()
    out = []
    rot = loop.rotate(at)
    w = rot.moves
    for j in range(1, n):
        f = edges[(at + j) % n]
        if f == e:
            l1 = Loop(e.tail, w[0] + w[j + 1:])
            l2 = Loop(e.head, w[1:j + 1])
            out.append(SplitResult((l1, l2), "positive", (at + j) % n))
        elif f == einv:
            l1 = Loop(e.tail, w[j + 1:])
            l2 = Loop(e.head, w[1:j])
            out.append(SplitResult((l1, l2), "negative", (at + j) % n))
    return out


def enumerate_deformations(loop, at: int, assignment) -> list[DeformResult]:
    """Deformations of ``loop`` at word index ``at`` by plaquettes with ``K >= 1``."""
    loop = parse_loop(loop)
    K = assignment if isinstance(assignment, PlaquetteAssignment) else PlaquetteAssignment(assignment)
    e = loop.edges()[at]
    w = loop.rotate(at).moves
    inv = INVERSE[e.dir]
    b1, b2 = _plaquette_bases(*e)
    out = []
    for p, rest in ((Plaquette(*b1, -1), NEG_REST[inv]), (Plaquette(*b2, 1), POS_REST[inv])):
        if K[p] >= 1:
            out.append(DeformResult(Loop(e.tail, rest + w[1:]), p, "negative"))
    for q, rest in ((Plaquette(*b1, 1), POS_REST[e.dir]), (Plaquette(*b2, -1), NEG_REST[e.dir])):
        if K[q] >= 1:
            out.append(DeformResult(Loop(e.tail, e.dir + rest + w), q, "positive"))
    return out


def balanced_decompositions(loop1, loop2, assignment) -> list[tuple]:
    """All ``K1 + K2 = K`` with ``(l1, K1)`` and ``(l2, K2)`` both balanced."""
    l1 = parse_loop(loop1)
    l2 = parse_loop(loop2)
    kp = _as_pairs(assignment)
    h1 = height_map(l1.origin[0], l1.origin[1], l1.moves)
    h2 = height_map(l2.origin[0], l2.origin[1], l2.moves)
    out = []
    for k1, k2 in _decompositions(h1, kp):
        if _balanced(h2, k2):
            out.append((PlaquetteAssignment.from_pairs(k1), PlaquetteAssignment.from_pairs(k2)))
    return out


def select_edge(loop, assignment=None, strategy: str = DEFAULT_STRATEGY) -> int:
    """Index (into ``loop``'s word) of the edge copy the engine explores first.

    The choice is made on the canonical rotation, so it does not depend on
    where the word starts.
    """
    loop = parse_loop(loop)
    if loop.is_null:
        raise ValueError("null loop has no edges")
    k = least_rotation(loop.moves)
    c = loop.rotate(k)
    kp = {(bx - c.origin[0], by - c.origin[1]): v for (bx, by), v in _as_pairs(assignment).items()}
    i = _choose(strategy, c.moves, _tails(0, 0, c.moves), kp)
    return (i + k) % len(loop)


def coefficient(loop, assignment, strategy: str = DEFAULT_STRATEGY, memo: MemoStore | None = None,
                root_index: int | None = None) -> Fraction:
    return Engine(strategy, memo).coefficient(loop, assignment, root_index=root_index)


@dataclass
class WilsonResult:
    polynomial: BetaPolynomial
    per_assignment: list = field(default_factory=list)  # (K, coefficient, area)
    stats: dict = field(default_factory=dict)

    @property
    def canonical_count(self) -> int:
        return len(self.per_assignment)

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial.to_json(),
            "canonical_count": self.canonical_count,
            "per_assignment": [
                {"K": K.to_json(), "coefficient": _frac_json(c), "area": a} for K, c, a in self.per_assignment
            ],
            "stats": self.stats,
        }


def _frac_json(c: Fraction):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _worker(args):
    loop, K, strategy = args
    eng = Engine(strategy)
    c = eng.coefficient(loop, K)
    return c, eng.calls, len(eng.memo)


def compute(loop, strategy: str = DEFAULT_STRATEGY, memo: MemoStore | None = None,
            parallel: int = 0) -> WilsonResult:
    """Wilson polynomial with per-assignment detail and engine statistics.

    ``parallel > 1`` evaluates the canonical assignments in that many worker
    processes, each with its own memo store.
    """
    loop = remove_backtracks(parse_loop(loop))
    t0 = time.perf_counter()
    if loop.is_null:
        return WilsonResult(BetaPolynomial({0: 1}), [], {"strategy": strategy, "memo_entries": 0,
                                                           "recursion_calls": 0, "backend": kernels.BACKEND,
                                                           "seconds": 0.0})
    coll = canonical_collection(loop)
    rows = []
    if parallel and parallel > 1 and len(coll) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            res = list(pool.map(_worker, [(loop, K, strategy) for K in coll]))
        calls = sum(r[1] for r in res)
        entries = sum(r[2] for r in res)
        for K, (c, _, _) in zip(coll, res):
            rows.append((K, c, K.area))
        stats = {"memo_entries": entries, "recursion_calls": calls, "strategy": strategy,
                 "backend": kernels.BACKEND, "workers": parallel}
    else:
        eng = Engine(strategy, memo)
        for K in coll:
            rows.append((K, eng.coefficient(loop, K), K.area))
        stats = eng.stats()
    poly = BetaPolynomial()
    for K, c, a in rows:
        poly = poly + BetaPolynomial({a: c})
    stats["seconds"] = round(time.perf_counter() - t0, 6)
    return WilsonResult(poly, rows, stats)


def wilson_polynomial(loop, strategy: str = DEFAULT_STRATEGY, memo: MemoStore | None = None) -> BetaPolynomial:
    """``phi(l) = sum over canonical K of c(l, K) beta^area(K)``."""
    return compute(loop, strategy, memo).polynomial


def vanishing_check(loop, assignment, strategy: str = DEFAULT_STRATEGY) -> dict:
    """Whether ``K`` is canonical for ``loop``, and the computed ``c(l, K)``."""
    loop = remove_backtracks(parse_loop(loop))
    K = assignment if isinstance(assignment, PlaquetteAssignment) else PlaquetteAssignment(assignment)
    c = coefficient(loop, K, strategy)
    member = K in canonical_collection(loop) if not loop.is_null else K.is_zero
    return {"is_canonical": member, "coefficient": c}
