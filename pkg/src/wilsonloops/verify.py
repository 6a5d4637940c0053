"""Verification suites shared by ``wilsonloops verify`` and ``selfcheck``.

Each suite returns a list of :class:`Case` records; a suite passes when
every case does.  Suites are deterministic (seeded corpora, sorted
fixtures).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from . import closedform, kernels
from ._kernels_py import INVERSE, STEP
from .canonical import PlaquetteAssignment, canonical_collection, height_assignment, layer_counts
from .engine import STRATEGIES, Engine, MemoStore, compute
from .fixtures import all_fixtures, validate
from .geometry import (
    distance,
    height,
    is_balanced,
    regions,
    winding_number_oracle,
    working_box,
)
from .lattice import Loop, Plaquette, parse_loop, remove_backtracks, wind

SUITES = ("vanishing", "edge-independence", "table1", "winding", "series", "spectrum", "geometry")

# simple loops used for the winding grid; two or three shapes per area
WINDING_SHAPES = {
    1: [("unit", "URDL"), ("unit-inverse", "RULD")],
    2: [("rect-2x1", "URRDLL"), ("rect-1x2", "UURDDL")],
    3: [("rect-3x1", "URRRDLLL"), ("rect-1x3", "UUURDDDL"), ("L3", "UURDRDLL")],
}

VANISHING_CORPUS = [
    ("plaquette", "URDL"),
    ("plaquette-squared", "URDLURDL"),
    ("domino", "URRDLL"),
    ("domino-squared", "URRDLLURRDLL"),
    ("figure-eight", "RULDDLUR"),
]


@dataclass
class Case:
    suite: str
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"[{tag}] {self.suite}: {self.name}{extra} ({self.seconds:.3f}s)"


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0
        return False


# -- random corpora ----------------------------------------------------------


def random_loop(rng: random.Random, max_len: int) -> Loop:
    """A random closed lattice walk with at most ``max_len`` steps.

    The walk picks a target length, wanders without immediate reversals
    while it can still get home in time, then closes by a shuffled
    monotone path.  Backtracks can still occur where the two parts meet.
    """
    target = rng.randint(4, max(4, max_len))
    out, x, y = [], 0, 0
    while True:
        choices = [c for c in "URDL"
                   if not (out and INVERSE[out[-1]] == c)
                   and len(out) + 1 + abs(x + STEP[c][0]) + abs(y + STEP[c][1]) <= target]
        if not choices or (len(out) + abs(x) + abs(y) >= target - 1 and rng.random() < 0.5):
            break
        c = rng.choice(choices)
        out.append(c)
        x, y = x + STEP[c][0], y + STEP[c][1]
    back = ["L" if x > 0 else "R"] * abs(x) + ["D" if y > 0 else "U"] * abs(y)
    rng.shuffle(back)
    return Loop((0, 0), "".join(out + back))


def random_corpus(count: int, max_len: int, seed: int = 0, *, reduced: bool = True,
                  simple: bool | None = None) -> list[Loop]:
    """``count`` non-null loops, distinct up to rotation and translation (reduced by default).

    ``simple=False`` keeps only self-intersecting loops, ``True`` only
    simple ones.
    """
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < count:
        l = random_loop(rng, max_len)
        if reduced:
            l = remove_backtracks(l)
        if l.is_null or (simple is not None and l.is_simple() != simple):
            continue
        key = l.canonical().moves
        if key in seen:
            continue
        seen.add(key)
        out.append(l)
    return out


# -- vanishing ---------------------------------------------------------------


def layered(base: PlaquetteAssignment, layers: dict) -> PlaquetteAssignment:
    """``base`` plus ``layers[b]`` copies of both orientations of each plaquette ``b``."""
    extra = {}
    for b, k in layers.items():
        extra[Plaquette(b[0], b[1], 1)] = k
        extra[Plaquette(b[0], b[1], -1)] = k
    return base + PlaquetteAssignment(extra)


def noncanonical_balanced(loop, extra_area: int = 4, margin: int = 2):
    """Balanced, non-canonical ``K`` with ``area(K) <= area(K_l) + extra_area``.

    A balanced ``K`` differs from ``K_l`` by a symmetric layer function, so
    the enumeration runs over multisets of at most ``extra_area // 2``
    double layers on plaquettes of the working box.
    """
    loop = remove_backtracks(parse_loop(loop))
    base = height_assignment(loop)
    canon = set(canonical_collection(loop))
    bases = list(working_box(loop, margin).bases())
    for size in range(1, extra_area // 2 + 1):
        for combo in itertools.combinations_with_replacement(bases, size):
            layers = {}
            for b in combo:
                layers[b] = layers.get(b, 0) + 1
            K = layered(base, layers)
            if K not in canon:
                yield K


def vanishing_families():
    """Named hand-picked ``(name, loop, K, noncanonical)`` with vanishing coefficient.

    ``noncanonical`` is False only for powers of a plaquette with their
    height assignment, which are canonical yet still vanish.
    """
    p = Plaquette(0, 0, 1)
    fam = []
    for n in (1, 2, 3):
        l = wind(Loop((0, 0), "URDL"), n)
        base = height_assignment(l)
        for q in ((1, 0), (0, 1), (-1, -1), (3, 2)):
            fam.append((f"plaquette^{n} with a layer on foreign plaquette {q}", l, layered(base, {q: 1}), True))
        fam.append((f"plaquette^{n} with a lone foreign plaquette pair", l,
                    base + PlaquetteAssignment({Plaquette(2, 0, 1): 1, Plaquette(2, 0, -1): 1}), True))
        for j in (1, 2):
            K = PlaquetteAssignment({p: j, p.inverse(): n + j})
            fam.append((f"plaquette^{n} with K(p)={j}, K(p^-1)={n + j}", l, K, True))
    for n in (2, 3, 4):
        l = wind(Loop((0, 0), "URDL"), n)
        fam.append((f"plaquette^{n} with its height assignment", l, height_assignment(l), False))
    dom = Loop((0, 0), "URRDLL")
    base = height_assignment(dom)
    for j, k in ((1, 0), (0, 1), (2, 0), (0, 2), (2, 1), (1, 2)):
        fam.append((f"domino with layers ({j}, {k}) on its two plaquettes", dom,
                    layered(base, {b: v for b, v in (((0, 0), j), ((1, 0), k)) if v}), True))
    return fam


def suite_vanishing(extra_area: int = 4, margin: int = 2) -> list[Case]:
    cases = []
    eng = Engine()
    for name, word in VANISHING_CORPUS:
        loop = Loop((0, 0), word)
        with _Timer() as t:
            bad = []
            count = 0
            for K in noncanonical_balanced(loop, extra_area, margin):
                count += 1
                if not is_balanced(loop, K):
                    bad.append(("unbalanced", K))
                    continue
                c = eng.coefficient(loop, K)
                if c != 0:
                    bad.append((c, K))
        detail = f"{count} assignments" + (f", nonzero: {bad[:3]}" if bad else "")
        cases.append(Case("vanishing", f"{name} sweep", not bad and count > 0, detail, t.seconds))
    for name, loop, K, noncanonical in vanishing_families():
        with _Timer() as t:
            canon = K in canonical_collection(loop)
            c = eng.coefficient(loop, K)
        ok = canon != noncanonical and c == 0
        cases.append(Case("vanishing", name, ok, f"canonical={canon} c={c}", t.seconds))
    return cases


# -- edge-choice independence -------------------------------------------------


def independence_pairs(n_random: int = 12, seed: int = 7, max_len: int = 14):
    """``(name, loop, K)`` pairs: shipped catalogue loops and random loops."""
    pairs = []
    for fx in all_fixtures():
        if fx.kind == "winding" or len(fx.loop) > 48:
            continue
        for i, K in enumerate(canonical_collection(fx.loop)):
            pairs.append((f"{fx.name}#{i}", fx.loop, K))
    for j, l in enumerate(random_corpus(n_random, max_len, seed, simple=False)):
        coll = canonical_collection(l)
        pairs.append((f"random-{j} {l.moves}", l, coll[-1]))
        # one extra double layer on an interior plaquette, usually non-canonical
        inner = sorted(regions(l).interior[0].plaquettes)
        pairs.append((f"random-{j} {l.moves} +layer", l, layered(coll[0], {inner[0]: 1})))
    return pairs


def root_values(loop, K) -> dict:
    """``c(l, K)`` for every strategy and every forced root edge copy.

    Every evaluation uses a fresh memo store so no value is reused across
    runs.
    """
    loop = remove_backtracks(parse_loop(loop))
    out = {}
    for s in STRATEGIES:
        out[s] = Engine(s, MemoStore()).coefficient(loop, K)
    for i in range(len(loop)):
        s = STRATEGIES[i % len(STRATEGIES)]
        out[f"root{i}/{s}"] = Engine(s, MemoStore()).coefficient(loop, K, root_index=i)
    return out


def suite_edge_independence(n_random: int = 12) -> list[Case]:
    cases = []
    for name, loop, K in independence_pairs(n_random):
        with _Timer() as t:
            vals = root_values(loop, K)
        distinct = set(vals.values())
        ok = len(distinct) == 1
        detail = f"c={next(iter(distinct))} over {len(vals)} runs" if ok else f"values {sorted(distinct)}"
        cases.append(Case("edge-independence", name, ok, detail, t.seconds))
    return cases


# -- catalogue ------------------------------------------------------------------


def suite_table1() -> list[Case]:
    cases = []
    for fx in all_fixtures():
        if fx.kind == "winding":
            continue
        with _Timer() as t:
            try:
                validate(fx)
            except Exception as exc:  # validation failure is a case failure
                cases.append(Case("table1", fx.name, False, f"invalid fixture: {exc}"))
                continue
            res = compute(fx.loop)
            want = fx.expected_polynomial()
            kc = fx.expected_k_count()
        ok = res.polynomial == want and res.canonical_count == kc
        label = f"row {fx.row}" if fx.row else "explicit"
        detail = f"{label}: got {res.polynomial} (|K|={res.canonical_count}), want {want} (|K|={kc})"
        cases.append(Case("table1", fx.name, ok, detail, t.seconds))
    return cases


# -- winding -------------------------------------------------------------------


def suite_winding(n_max: int = 4, tol: float = 1e-12) -> list[Case]:
    cases = []
    for a, shapes in WINDING_SHAPES.items():
        for n in range(1, n_max + 1):
            want = closedform.c_n(n, a)
            with _Timer() as t:
                got = {}
                for name, word in shapes:
                    l = wind(Loop((0, 0), word), n)
                    got[name] = Engine().coefficient(l, height_assignment(l))
            ok = all(v == want for v in got.values())
            detail = ", ".join(f"{k}={v}" for k, v in got.items()) + f"; c_{n}({a})={want}"
            cases.append(Case("winding", f"n={n} a={a}", ok, detail, t.seconds))
    for n in (1, 2):
        for a in range(1, 6):
            gap = closedform.lattice_winding_value(n, a) - closedform.levy_continuum(n, a)
            cases.append(Case("winding", f"continuum n={n} a={a}", abs(gap) <= tol, f"gap={gap:.3e}"))
    gap = closedform.lattice_winding_value(3, 2) - closedform.levy_continuum(3, 2)
    cases.append(Case("winding", "continuum n=3 a=2 differs", gap != 0, f"gap={gap:.6f}"))
    return cases


# -- generating functions -----------------------------------------------------------


def suite_series(N: int = 12, n_max: int = 8, a_max: int = 5) -> list[Case]:
    cases = []
    for a in range(1, 7):
        with _Timer() as t:
            res = closedform.series_identity_residual(a, N)
        cases.append(Case("series", f"identity residual a={a}", res.is_zero(), "" if res.is_zero() else repr(res),
                          t.seconds))
    for a in range(1, a_max + 1):
        with _Timer() as t:
            table = closedform.tilde_recursion(a, n_max)
            bad = [n for n in range(1, n_max + 1) if closedform.tilde_c(n, a, table) != closedform.c_n(n, a)]
        cases.append(Case("series", f"recursion a={a} n<={n_max}", not bad, f"mismatch at n={bad}" if bad else "",
                          t.seconds))
    return cases


# -- spectral densities ----------------------------------------------------------


def spectrum_table(a: int, beta: float, points: int = 64, tol: float = 1e-13) -> list[tuple]:
    """``(x, f_series, f_closed, |diff|)`` rows; ``f_closed`` is None without a closed form."""
    rows = []
    for x in closedform.grid(points):
        fs = closedform.spectral_density(a, beta, x, mode="series", tol=tol)
        try:
            fc = closedform.spectral_density(a, beta, x, mode="closed")
        except closedform.UnsupportedClosedForm:
            fc = None
        rows.append((x, fs, fc, None if fc is None else abs(fs - fc)))
    return rows


def suite_spectrum(points: int = 64) -> list[Case]:
    cases = []
    for a in (1, 2, 3):
        for beta in (0.05, 0.25, 0.5):
            with _Timer() as t:
                rows = spectrum_table(a, beta, points)
                diff = max(r[3] for r in rows)
                fmin = min(min(r[1], r[2]) for r in rows)
                mass_s = closedform.spectral_mass(a, beta, mode="series") if a == 1 else None
                mass_c = closedform.spectral_mass(a, beta, mode="closed")
            masses = [m for m in (mass_s, mass_c) if m is not None]
            ok = diff <= 1e-10 and all(abs(m - 1) <= 1e-8 for m in masses) and fmin >= -1e-12
            detail = f"max|series-closed|={diff:.2e} mass={mass_c:.12f} min f={fmin:.3e}"
            cases.append(Case("spectrum", f"a={a} beta={beta}", ok, detail, t.seconds))
    return cases


# -- geometry ----------------------------------------------------------------------


def geometry_problems(loop) -> list[str]:
    """Violations of the height/distance/region invariants for one loop."""
    loop = parse_loop(loop)
    out = []
    h_row = height(loop, sweep="row")
    h_col = height(loop, sweep="column")
    if h_row.nonzero() != h_col.nonzero():
        out.append("row and column sweeps differ")
    wide = 5
    if height(loop, wide).nonzero() != h_row.nonzero():
        out.append("height depends on the box margin")
    if distance(loop, wide).nonzero() != distance(loop).nonzero():
        out.append("distance depends on the box margin")
    for b, v in h_row.nonzero().items():
        if winding_number_oracle(loop, b) != v:
            out.append(f"height at {b} disagrees with the angle sum")
            break
    try:
        dec = regions(loop)
    except Exception as exc:  # non-constant h or d on a region
        return out + [str(exc)]
    for r in dec.interior:
        if (r.d - abs(r.h)) % 2 or abs(r.h) > r.d:
            out.append(f"parity or bound fails at {r.key()}: h={r.h} d={r.d}")
    if loop.is_simple():
        if any(r.d != abs(r.h) for r in dec.interior):
            out.append("simple loop with d != |h|")
    try:
        layer_counts(loop)
    except Exception as exc:
        out.append(str(exc))
    return out


def suite_geometry(count: int = 100, max_len: int = 16, seed: int = 11) -> list[Case]:
    cases = []
    with _Timer() as t:
        corpus = random_corpus(count, max_len, seed)
        bad = [(l.moves, p) for l in corpus for p in geometry_problems(l)]
        simple = sum(1 for l in corpus if l.is_simple())
    cases.append(Case("geometry", f"{count} random loops ({simple} simple)", not bad,
                      f"problems: {bad[:3]}" if bad else "", t.seconds))
    return cases


# -- self-check ------------------------------------------------------------------------


def suite_fixtures() -> list[Case]:
    cases = []
    for fx in all_fixtures():
        try:
            validate(fx)
            cases.append(Case("fixtures", fx.name, True))
        except Exception as exc:
            cases.append(Case("fixtures", fx.name, False, str(exc)))
    return cases


def suite_backends(count: int = 60, seed: int = 3) -> list[Case]:
    """Compiled kernels against the pure-Python reference on random words."""
    from . import _kernels_py as ref

    impl = kernels._impl
    bad = []
    for l in random_corpus(count, 20, seed, reduced=False):
        w = l.moves
        if impl.reduce_word(0, 0, w) != ref.reduce_word(0, 0, w):
            bad.append(("reduce_word", w))
        if impl.least_rotation(w) != ref.least_rotation(w):
            bad.append(("least_rotation", w))
        if impl.height_map(0, 0, w) != ref.height_map(0, 0, w):
            bad.append(("height_map", w))
    return [Case("backends", f"{kernels.BACKEND} vs python on {count} words", not bad, str(bad[:3]) if bad else "")]


_RUNNERS = {
    "vanishing": suite_vanishing,
    "edge-independence": suite_edge_independence,
    "table1": suite_table1,
    "winding": suite_winding,
    "series": suite_series,
    "spectrum": suite_spectrum,
    "geometry": suite_geometry,
}


def run_suite(name: str) -> list[Case]:
    if name == "all":
        return [c for s in SUITES for c in _RUNNERS[s]()]
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    return _RUNNERS[name]()


def selfcheck() -> list[Case]:
    """Fast end-to-end check: fixtures, kernels, small engine and oracle runs."""
    cases = suite_fixtures() + suite_backends()
    with _Timer() as t:
        ok = Engine().coefficient(Loop((0, 0), "URDL"), height_assignment(Loop((0, 0), "URDL"))) == 1
    cases.append(Case("selfcheck", "unit plaquette coefficient", ok, "", t.seconds))
    cases += suite_series(N=8, n_max=5, a_max=3)
    cases += [c for c in suite_winding(n_max=3) if c.name.startswith("n=")]
    f = closedform.spectral_density(2, 0.25, 1.0)
    g = closedform.spectral_density(2, 0.25, 1.0, mode="closed")
    cases.append(Case("selfcheck", "area-2 density series vs closed", abs(f - g) <= 1e-10, f"{abs(f - g):.2e}"))
    return cases


__all__ = [
    "Case",
    "SUITES",
    "WINDING_SHAPES",
    "VANISHING_CORPUS",
    "random_loop",
    "random_corpus",
    "layered",
    "noncanonical_balanced",
    "vanishing_families",
    "independence_pairs",
    "root_values",
    "geometry_problems",
    "spectrum_table",
    "run_suite",
    "selfcheck",
] + [f"suite_{s.replace('-', '_')}" for s in SUITES]

