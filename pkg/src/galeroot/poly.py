"""Dense univariate polynomials with exact integer coefficients.

Every generating function in the package (g, h, f, fiber Poincare polynomials,
Hilbert functions and the edge-count series behind them) is an ``IntPoly``.
Coefficients are stored lowest degree first, without trailing zeros, so the
zero polynomial is the empty tuple.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence


class IntPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # construction helpers

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, deg: int, c: int = 1) -> "IntPoly":
        if deg < 0:
            raise ValueError("negative degree")
        return cls([0] * deg + [c])

    # basic queries

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def divide_by_t(self, k: int) -> "IntPoly":
        """Exact division by t**k; raises if a low coefficient is nonzero."""
        if k < 0:
            raise ValueError("negative power")
        if any(self.coeffs[:k]):
            raise ValueError(f"{self} is not divisible by t^{k}")
        return IntPoly(self.coeffs[k:])

    def shift(self, a: int) -> "IntPoly":
        return shift(self, a)

    def substitute_square(self) -> "IntPoly":
        """p(t) -> p(t^2)."""
        out = []
        for c in self.coeffs:
            out.extend((c, 0))
        return IntPoly(out)

    # display / serialization

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return self.format()

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                body = str(abs(c))
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self, var: str = "t") -> dict:
        return {"var": var, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntPoly":
        return cls(int(c) for c in obj["coeffs"])


def _coerce(x):
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly((x,))
    return NotImplemented


ZERO = IntPoly()
ONE = IntPoly((1,))
T = IntPoly((0, 1))


def add(a: IntPoly, b: IntPoly) -> IntPoly:
    return a + b


def mul(a: IntPoly, b: IntPoly) -> IntPoly:
    return a * b


def shift(p: IntPoly, a: int) -> IntPoly:
    """Return q with q(t) = p(t + a), by binomial expansion."""
    if a == 0 or not p.coeffs:
        return p
    n = len(p.coeffs)
    out = [0] * n
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        # c * (t + a)^i
        apow = 1
        for j in range(i, -1, -1):
            out[j] += c * comb(i, j) * apow
            apow *= a
    return IntPoly(out)


def p_poly(m: int) -> IntPoly:
    """1 + t + ... + t^(m-1); the zero polynomial for m = 0."""
    if m < 0:
        raise ValueError("p_poly needs m >= 0")
    return IntPoly([1] * m)


def is_palindromic(p: IntPoly) -> bool:
    return p.coeffs == p.coeffs[::-1]


def g_from_h(h: IntPoly, D: int) -> IntPoly:
    """Truncated first difference sum_{i <= D//2} (h_i - h_{i-1}) t^i."""
    if h.coeffs and D < h.degree:
        raise ValueError(f"D={D} is smaller than deg h = {h.degree}")
    return IntPoly(h[i] - h[i - 1] for i in range(D // 2 + 1))


def binomial_row(r: int, floor: int = 0) -> IntPoly:
    """sum_{c=floor}^{r} C(r, c) t^c: labelled ways to pick c of r parallel copies."""
    return IntPoly(comb(r, c) if c >= floor else 0 for c in range(r + 1))


def from_coeffs(coeffs: Sequence[int]) -> IntPoly:
    return IntPoly(coeffs)
