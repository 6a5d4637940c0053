"""Explicit formulas used to cross-check the engine.

Winding coefficients ``c_n(a)``, a truncated formal power series type with
the generating-function identity ``C^a - C^(a-1) = t``, the independent
``c~_{n,m}`` recursion, the catalogue of Wilson polynomials for loops with
at most three self-crossings, the continuum winding formula and the
limiting spectral density of a simple loop.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

from .polynomial import BetaPolynomial


class UnknownClass(KeyError):
    pass


class OutOfRegime(ValueError):
    """Series evaluation requested where absolute convergence is not known."""


class UnsupportedClosedForm(ValueError):
    pass


class NonRealClosedForm(ArithmeticError):
    pass


# -- winding coefficients ----------------------------------------------------


@lru_cache(maxsize=None)
def c_n(n: int, a: int) -> Fraction:
    """Coefficient of ``beta^(n a)`` for a simple area-``a`` loop wound ``n`` times."""
    if n < 1 or a < 1:
        raise ValueError("n and a must be positive integers")
    if a == 1:
        return Fraction(1 if n == 1 else 0)
    return Fraction((-1) ** (n + 1) * comb(n * a - 2, n - 1), n)


def c3_factor(u: int) -> Fraction:
    """``(3u - 3)(3u - 2) / 6``, the triple-winding coefficient written as a polynomial in ``u``."""
    return Fraction((3 * u - 3) * (3 * u - 2), 6)


# -- formal power series -----------------------------------------------------


class FormalSeries:
    """Power series in ``t`` truncated after ``t^N``, with exact coefficients."""

    __slots__ = ("N", "c")

    def __init__(self, coeffs, N: int):
        self.N = N
        c = [Fraction(x) for x in list(coeffs)[: N + 1]]
        self.c = c + [Fraction(0)] * (N + 1 - len(c))

    @classmethod
    def one(cls, N: int) -> "FormalSeries":
        return cls([1], N)

    @classmethod
    def t(cls, N: int) -> "FormalSeries":
        return cls([0, 1], N)

    def _check(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries([other], self.N)
        if other.N != self.N:
            raise ValueError("truncation orders differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FormalSeries([a + b for a, b in zip(self.c, other.c)], self.N)

    def __sub__(self, other):
        other = self._check(other)
        return FormalSeries([a - b for a, b in zip(self.c, other.c)], self.N)

    def __mul__(self, other):
        other = self._check(other)
        out = [Fraction(0)] * (self.N + 1)
        for i, a in enumerate(self.c):
            if a:
                for j in range(self.N + 1 - i):
                    out[i + j] += a * other.c[j]
        return FormalSeries(out, self.N)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = FormalSeries.one(self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, FormalSeries) and self.N == other.N and self.c == other.c

    def is_zero(self) -> bool:
        return not any(self.c)

    def __getitem__(self, k: int) -> Fraction:
        return self.c[k]

    def __repr__(self) -> str:
        return f"FormalSeries({[str(x) for x in self.c]}, N={self.N})"


def winding_series(a: int, N: int) -> FormalSeries:
    """``C(a, t) = 1 + sum_n c_n(a) t^n`` truncated at order ``N``."""
    return FormalSeries([1] + [c_n(n, a) for n in range(1, N + 1)], N)


def series_identity_residual(a: int, N: int = 12) -> FormalSeries:
    """``C^a - C^(a-1) - t`` at order ``N``; the zero series when the identity holds."""
    if a < 1 or N < 2:
        raise ValueError("need a >= 1 and N >= 2")
    C = winding_series(a, N)
    return C**a - C ** (a - 1) - FormalSeries.t(N)


def tilde_recursion(a: int, n_max: int) -> dict:
    """Table ``{(n, m, b): c~_{n,m}(b)}`` for ``1 <= b <= a``, ``0 <= m <= n <= n_max``.

    Built only from ``c~_{n,0}(b) = c~_n(b-1)``, ``c~_n(1) = [n = 1]``,
    ``c~_0 = 1`` and
    ``c~_{n,m}(b) = c~_{n,m-1}(b) - sum_{i=1}^{m-1} c~_{i,i}(b) c~_{n-i,m-i}(b)``,
    with ``c~_n(b) = c~_{n,n}(b)``.
    """
    table = {}
    for b in range(1, a + 1):
        for n in range(0, n_max + 1):
            if b == 1:
                val = Fraction(1 if n in (0, 1) else 0)
                for m in range(n + 1):
                    table[(n, m, b)] = val
                continue
            table[(n, 0, b)] = Fraction(1) if n == 0 else table[(n, n, b - 1)]
            for m in range(1, n + 1):
                acc = table[(n, m - 1, b)]
                for i in range(1, m):
                    acc -= table[(i, i, b)] * table[(n - i, m - i, b)]
                table[(n, m, b)] = acc
    return table


def tilde_c(n: int, a: int, table: dict | None = None) -> Fraction:
    table = table if table is not None else tilde_recursion(a, n)
    return table[(n, n, a)]


# -- catalogue of Wilson polynomials -----------------------------------------


def _mono(coeff, exp) -> BetaPolynomial:
    return BetaPolynomial({exp: coeff})


@dataclass(frozen=True)
class Table1Entry:
    row: int
    slug: str
    params: tuple
    k_count: int
    evaluator: Callable

    def polynomial(self, **areas) -> BetaPolynomial:
        missing = set(self.params) - set(areas)
        extra = set(areas) - set(self.params)
        if missing or extra:
            raise ValueError(f"row {self.row} takes {self.params}; missing {sorted(missing)}, unexpected {sorted(extra)}")
        for k, v in areas.items():
            if int(v) != v or v < 1:
                raise ValueError(f"area {k}={v} must be a positive integer")
        return self.evaluator(**{k: int(v) for k, v in areas.items()})


def _r1(s):
    return _mono(1, s)


def _r2(s1, s2):
    return _mono(1, s1 + s2)


def _r3(s, t):
    return _mono(1 - t, s + 2 * t)


def _r4(s1, s2, s3):
    return _mono(1, s1 + s2 + s3)


def _r5(s, t1, t2):
    return _mono((1 - t1) * (1 - t2), s + 2 * t1 + 2 * t2)


def _r6(s, t1, t2):
    return (_mono(1, 0) - _mono(t1, 2 * t2)) * _mono(1, s + 2 * t1)


def _r7(s1, s2, t):
    return _mono(1 - t, s1 + s2 + 2 * t)


def _r8(s, t, u):
    return _mono(c3_factor(u) - t * (1 - u), s + 2 * t + 3 * u)


def _r9(s1, s2, s3, s4):
    return _mono(1, s1 + s2 + s3 + s4)


def _r10(s, t1, t2, u):
    return _mono((1 - t2) * (c3_factor(u) - t1 * (1 - u)), s + 2 * t1 + 2 * t2 + 3 * u)


def _r11(s, t1, t2, u):
    return (_mono(1, 0) - _mono(t1 * (1 - u), 2 * t2 + 2 * u)) * _mono(1, s + 2 * t1 + u)


def _r12(s1, s2, t, u):
    return _mono(c3_factor(u) - t * (1 - u), s1 + s2 + 2 * t + 3 * u)


def _r13(s, t, u, v):
    F = Fraction
    coeff = (
        1 - F(5, 2) * u + F(3, 2) * u**2 - F(13, 3) * v + F(13, 2) * u * v - F(3, 2) * u**2 * v
        + 6 * v**2 - 4 * u * v**2 - F(8, 3) * v**3 - t * (c3_factor(v) - u * (1 - v))
    )
    return _mono(coeff, s + 2 * t + 3 * u + 4 * v)


def _r14(s1, s2, t1, t2):
    return _mono((1 - t1) * (1 - t2), s1 + s2 + 2 * t1 + 2 * t2)


def _r15(s, t1, t2, t3):
    inner = _mono(1, 2 * t2) + _mono(1, 2 * t3) - _mono(1 + t1, 2 * t2 + 2 * t3)
    return inner * _mono(1, s + 2 * t1)


def _r16(s1, s2, s3, s4):
    return _mono(1, s1 + s2 + s3 + s4)


def _r17(s1, s2, s3, t):
    return _mono(1 - t, s1 + s2 + s3)


def _r18(s1, s2, t1, t2):
    return _mono((1 - t1) * (1 - t2), s1 + s2 + 2 * t1 + 2 * t2)


def _r19(s, t1, t2, t3):
    return _mono((1 - t1) * (1 - t2) * (1 - t3), s + 2 * t1 + 2 * t2 + 2 * t3)


def _r20(s1, s2, t1, t2):
    return (_mono(1, 0) - _mono(t1, 2 * t2)) * _mono(1, s1 + s2 + 2 * t1)


def _r21(s1, s2, s3, t):
    return _mono(1 - t, s1 + s2 + s3 + 2 * t)


def _r22(s, t1, t2, t3):
    return (_mono(1, 0) - _mono(t1, 2 * t2)) * _mono(1 - t3, s + 2 * t1 + 2 * t3)


def _r23(s, t1, t2, t3):
    return (_mono(1 - t3, 0) - _mono(t1, 2 * t2)) * _mono(1, s + 2 * t1 + 2 * t3)


def _r24(s, t1, t2, u):
    inner = _mono(1 - u, 0) + _mono(c3_factor(u) - (1 + t1) * (1 - u), 2 * t2)
    return inner * _mono(1, s + 2 * t1 + 3 * u)


def _r25(s, t, u1, u2):
    F = Fraction
    coeff = c3_factor(u1 + u2) - t * (1 - u1) * (1 - u2) + u1 * u2 * (1 - F(3, 2) * (u1 + u2))
    return _mono(coeff, s + 2 * t + 3 * u1 + 3 * u2)


def _r26(s, t, u1, u2):
    F = Fraction
    inner = _mono(1 - 2 * u1 - t, 0) + _mono(u1 * (t + u2 - F(1, 2)) + F(3, 2) * u1**2, 2 * u2)
    return inner * _mono(1, s + 2 * t + 3 * u1 + 3 * u2)


def _r27(s1, s2, s3, t):
    return _mono(1 - t, s1 + s2 + s3 + 2 * t)


def _r28(s1, s2, t1, t2):
    inner = _mono(1, 2 * t1) + _mono(1, 2 * t2) - _mono(1, 2 * t1 + 2 * t2)
    return inner * _mono(1, s1 + s2)


_ROWS = [
    (1, "circle", ("s",), 1, _r1),
    (2, "figure-eight", ("s1", "s2"), 1, _r2),
    (3, "limacon", ("s", "t"), 1, _r3),
    (4, "three-lobe-chain", ("s1", "s2", "s3"), 1, _r4),
    (5, "two-inner-loops", ("s", "t1", "t2"), 1, _r5),
    (6, "limacon-figure-eight-inner", ("s", "t1", "t2"), 2, _r6),
    (7, "figure-eight-limacon-lobe", ("s1", "s2", "t"), 1, _r7),
    (8, "triple-limacon", ("s", "t", "u"), 1, _r8),
    (9, "row-09", ("s1", "s2", "s3", "s4"), 1, _r9),
    (10, "row-10", ("s", "t1", "t2", "u"), 1, _r10),
    (11, "row-11", ("s", "t1", "t2", "u"), 4, _r11),
    (12, "row-12", ("s1", "s2", "t", "u"), 1, _r12),
    (13, "row-13", ("s", "t", "u", "v"), 1, _r13),
    (14, "row-14", ("s1", "s2", "t1", "t2"), 1, _r14),
    (15, "row-15", ("s", "t1", "t2", "t3"), 4, _r15),
    (16, "row-16", ("s1", "s2", "s3", "s4"), 1, _r16),
    (17, "row-17", ("s1", "s2", "s3", "t"), 1, _r17),
    (18, "row-18", ("s1", "s2", "t1", "t2"), 1, _r18),
    (19, "row-19", ("s", "t1", "t2", "t3"), 1, _r19),
    (20, "row-20", ("s1", "s2", "t1", "t2"), 2, _r20),
    (21, "row-21", ("s1", "s2", "s3", "t"), 1, _r21),
    (22, "row-22", ("s", "t1", "t2", "t3"), 2, _r22),
    (23, "row-23", ("s", "t1", "t2", "t3"), 2, _r23),
    (24, "row-24", ("s", "t1", "t2", "u"), 2, _r24),
    (25, "row-25", ("s", "t", "u1", "u2"), 1, _r25),
    (26, "row-26", ("s", "t", "u1", "u2"), 2, _r26),
    (27, "row-27", ("s1", "s2", "s3", "t"), 1, _r27),
    (28, "row-28", ("s1", "s2", "t1", "t2"), 4, _r28),
]

TABLE1 = {row: Table1Entry(row, slug, params, k, fn) for row, slug, params, k, fn in _ROWS}


def table1_entry(row) -> Table1Entry:
    if isinstance(row, str):
        for e in TABLE1.values():
            if e.slug == row:
                return e
        try:
            row = int(row)
        except ValueError:
            raise UnknownClass(f"no catalogue row {row!r}") from None
    if row not in TABLE1:
        raise UnknownClass(f"no catalogue row {row!r}")
    return TABLE1[row]


def table1_polynomial(row, **areas) -> BetaPolynomial:
    return table1_entry(row).polynomial(**areas)


# -- continuum comparison ----------------------------------------------------


def levy_continuum(n: int, alpha: float) -> float:
    """Continuum expectation of a simple loop of area ``alpha`` wound ``n`` times."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = sum((-alpha) ** k / math.factorial(k) * n ** (k - 1) * comb(n, k + 1) for k in range(n))
    return s * math.exp(-n * alpha / 2)


def lattice_winding_value(n: int, a: int) -> float:
    """``c_n(a) beta^(n a)`` at ``beta = e^(-1/2)``."""
    return float(c_n(n, a)) * math.exp(-n * a / 2)


# -- spectral density --------------------------------------------------------


def tail_ratio(a: int, beta: float) -> float:
    """Geometric ratio ``a^a / (a-1)^(a-1) |beta|^a`` of the term bound."""
    if a == 1:
        return 0.0
    return (a - 1) * (a / (a - 1)) ** a * abs(beta) ** a


def _series_terms_needed(a: int, beta: float, tol: float, n_cap: int) -> int:
    r = tail_ratio(a, beta)
    n = 1
    while n < n_cap:
        # bound on sum_{m > n} m^{-3/2} r^m
        if n ** -1.5 * r ** (n + 1) / (1 - r) < tol:
            return n
        n += 1
    return n_cap


def _coeff_float(n: int, a: int, beta: float) -> float:
    """``c_n(a) beta^(n a)`` in floating point without overflow."""
    c = c_n(n, a)
    if c == 0 or beta == 0:
        return 0.0
    lg = (math.lgamma(n * a - 1) - math.lgamma(n) - math.lgamma(n * a - n)) - math.log(n) + n * a * math.log(abs(beta))
    sign = (1 if c > 0 else -1) * (1 if beta > 0 or (n * a) % 2 == 0 else -1)
    return sign * math.exp(lg)


def _levin_u(partial, omega, k):
    """Levin u-transform of order ``k`` from the first ``k + 1`` partial sums."""
    import mpmath

    num = den = 0
    scale = mpmath.mpf(k + 1) ** (k - 1)
    for j in range(k + 1):
        c = (-1) ** j * comb(k, j) * mpmath.mpf(j + 1) ** (k - 1) / scale
        num += c * partial[j] / omega[j]
        den += c / omega[j]
    return num / den


def _series_boundary(a: int, beta: float, x: float, tol: float, k_max: int = 150) -> float:
    """Sum the series on its circle of convergence.

    Terms decay only like ``n^(-3/2)`` there, so plain truncation cannot reach
    small tolerances.  The complex series ``sum c_n(a) (beta^a e^(ix))^n`` is
    accelerated with the Levin u-transform in extended precision; the order
    grows until two orders six apart agree to ``tol``.
    """
    import mpmath

    k = 30
    while True:
        with mpmath.workdps(20 + k):
            z = mpmath.mpf(beta) ** a * mpmath.expj(mpmath.mpf(x))
            partial, omega = [], []
            s, zn = 0, 1
            for n in range(1, k + 2):
                zn *= z
                t = mpmath.mpf((-1) ** (n + 1) * comb(n * a - 2, n - 1)) / n * zn
                s += t
                partial.append(s)
                omega.append(n * t)
            hi = _levin_u(partial, omega, k)
            lo = _levin_u(partial, omega, k - 6)
            err = abs(mpmath.re(hi - lo)) / mpmath.pi
            if err < tol:
                return float((1 + 2 * mpmath.re(hi)) / (2 * mpmath.pi))
        if k >= k_max:
            raise ArithmeticError(f"series acceleration did not reach tolerance {tol} at x={x}")
        k += 10


def spectral_density(a: int, beta: float, x: float, mode: str = "series", tol: float = 1e-13,
                     n_cap: int = 200000) -> float:
    """Limiting spectral density of a simple area-``a`` loop at angle ``x``.

    ``mode="series"`` sums the Fourier series, truncating where the
    geometric term bound guarantees the tail is below ``tol``; exactly on
    the boundary of the convergence regime (ratio 1) the tail is summed with
    Levin acceleration instead.  ``mode="closed"`` uses the closed forms for
    ``a`` in ``{1, 2, 3}``.
    """
    if mode == "closed":
        return _closed_density(a, beta, x)
    if mode != "series":
        raise ValueError(f"unknown mode {mode!r}")
    if a < 1:
        raise ValueError("a must be a positive integer")
    if a >= 2 and abs(beta) > 0.5:
        raise OutOfRegime(f"series for a={a} needs |beta| <= 1/2, got {beta}")
    if beta == 0:
        return 1 / (2 * math.pi)
    if a == 1:
        return (1 + 2 * beta * math.cos(x)) / (2 * math.pi)
    r = tail_ratio(a, beta)
    if r >= 1 - 1e-12:
        return _series_boundary(a, beta, x, tol)
    N = _series_terms_needed(a, beta, tol, n_cap)
    total = math.fsum(_coeff_float(n, a, beta) * math.cos(n * x) for n in range(1, N + 1))
    return (1 + 2 * total) / (2 * math.pi)


def _closed_density(a: int, beta: float, x: float, imag_tol: float = 1e-10) -> float:
    if a == 1:
        return (1 + 2 * beta * math.cos(x)) / (2 * math.pi)
    if a == 2:
        b2 = beta * beta
        inner = 1 + 4 * b2 * math.cos(x) + math.sqrt(1 + 8 * b2 * math.cos(x) + 16 * b2 * b2)
        return math.sqrt(inner / 2) / (2 * math.pi)
    if a == 3:
        b32 = cmath.sqrt(beta) ** 3
        k = 3 * math.sqrt(3) / 2 * b32
        val = (
            -1
            + 2 * cmath.cosh(2 / 3 * cmath.asinh(k * cmath.exp(-0.5j * x)))
            + 2 * cmath.cosh(2 / 3 * cmath.asinh(k * cmath.exp(0.5j * x)))
        ) / (6 * math.pi)
        if abs(val.imag) > imag_tol:
            raise NonRealClosedForm(f"imaginary part {val.imag:.3e} at a=3, beta={beta}, x={x}")
        return val.real
    raise UnsupportedClosedForm(f"no closed form for a={a}; use the series")


def spectral_mass(a: int, beta: float, mode: str | None = None, tol: float = 1e-12) -> float:
    """Integral of the density over one period (adaptive quadrature, split at pi).

    The density can have a square-root cusp at ``x = pi`` on the regime
    boundary, hence the split.
    """
    from scipy.integrate import quad

    if mode is None:
        mode = "closed" if a in (1, 2, 3) else "series"

    def f(x):
        return spectral_density(a, beta, x, mode=mode)

    left, _ = quad(f, 0.0, math.pi, epsabs=tol, epsrel=tol, limit=200)
    right, _ = quad(f, math.pi, 2 * math.pi, epsabs=tol, epsrel=tol, limit=200)
    return left + right


def grid(points: int = 64) -> list[float]:
    """``points`` equally spaced angles on ``[0, 2 pi)``."""
    return [2 * math.pi * k / points for k in range(points)]
