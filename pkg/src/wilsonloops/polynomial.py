"""Sparse polynomials in beta with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction


class BetaPolynomial:
    """Map ``exponent -> Fraction`` with no stored zeros."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        for k, v in dict(coeffs or {}).items():
            k = int(k)
            if k < 0:
                raise ValueError("exponents must be nonnegative")
            v = Fraction(v)
            if v:
                c[k] = c.get(k, 0) + v
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def monomial(cls, exp: int, coeff=1) -> "BetaPolynomial":
        return cls({exp: coeff})

    def coeffs(self) -> dict:
        return dict(sorted(self._c.items()))

    def __getitem__(self, exp: int) -> Fraction:
        return self._c.get(exp, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def __eq__(self, other):
        if isinstance(other, BetaPolynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self == BetaPolynomial({0: other})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        if not isinstance(other, BetaPolynomial):
            other = BetaPolynomial({0: other})
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return BetaPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BetaPolynomial({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, BetaPolynomial) else -Fraction(other))

    def __mul__(self, other):
        if not isinstance(other, BetaPolynomial):
            return BetaPolynomial({k: v * Fraction(other) for k, v in self._c.items()})
        out = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return BetaPolynomial(out)

    __rmul__ = __mul__

    def __call__(self, beta):
        """Evaluate at ``beta`` (exact for Fraction/int input)."""
        return sum((v * beta**k for k, v in self._c.items()), Fraction(0) if isinstance(beta, (int, Fraction)) else 0.0)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def to_json(self) -> list:
        return [{"exp": k, "num": str(v.numerator), "den": str(v.denominator)} for k, v in sorted(self._c.items())]

    @classmethod
    def from_json(cls, items) -> "BetaPolynomial":
        return cls({int(it["exp"]): Fraction(int(it["num"]), int(it["den"])) for it in items})

    def __repr__(self) -> str:
        return f"BetaPolynomial({str(self)})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items()):
            mag = abs(v)
            sign = "-" if v < 0 else "+"
            num = "" if (mag == 1 and k) else str(mag)
            mono = "" if k == 0 else ("β" if k == 1 else f"β^{k}")
            body = f"{num}{'*' if num and mono else ''}{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s
