"""Truncated power series over the rationals, Fibonacci polynomials, and the
generating functions for totalB and totalD - totalDTrunc.

A :class:`TruncSeries` of order N carries coefficients 0..N and every
operation is exact through that order. ``derivative`` is the exception:
differentiating loses the top coefficient, so it returns order N-1; use
:meth:`TruncSeries.zderiv` (z d/dz) when the full order is needed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .combinatorics import binom, catalan, exact_div

__all__ = [
    "TruncSeries",
    "Polynomial",
    "catalan_series",
    "inv_sqrt_1m4z",
    "geometric_4z",
    "fib_poly",
    "c_pow_coeff",
    "b_series",
    "d_series",
    "d_series_product_form",
    "f_eval_series",
    "LemmaReport",
    "verify_lemmas",
    "series_to_csv",
]

Number = Union[int, Fraction]


class TruncSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number], order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1 - len(cs)))[:order + 1]
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c: Number, order: int) -> "TruncSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Number = 1) -> "TruncSeries":
        out = [0] * (order + 1)
        if k <= order:
            out[k] = c
        return cls(out)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncSeries({[str(c) for c in self.coeffs]})"

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, Polynomial):
            return other.to_series(self.order)
        return TruncSeries.constant(other, self.order)

    def __add__(self, other) -> "TruncSeries":
        o = self._lift(other)
        m = min(self.order, o.order)
        return TruncSeries(a + b for a, b in zip(self.coeffs[:m + 1], o.coeffs[:m + 1]))

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(-a for a in self.coeffs)

    def __sub__(self, other) -> "TruncSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, (TruncSeries, Polynomial)):
            c = Fraction(other)
            return TruncSeries(a * c for a in self.coeffs)
        o = self._lift(other)
        m = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = [Fraction(0)] * (m + 1)
        for i in range(m + 1):
            ai = a[i]
            if ai:
                for j in range(m + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise ZeroDivisionError(f"divisor must have constant term +-1, got {c0}")
        a = self.coeffs
        out = [Fraction(0)] * len(a)
        out[0] = 1 / c0
        for k in range(1, len(a)):
            s = sum(a[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -s / c0
        return TruncSeries(out)

    def __truediv__(self, other) -> "TruncSeries":
        if isinstance(other, (TruncSeries, Polynomial)):
            return self * self._lift(other).inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other) -> "TruncSeries":
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int) -> "TruncSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by z**k, keeping the order."""
        return TruncSeries([0] * k + list(self.coeffs), self.order)

    def derivative(self) -> "TruncSeries":
        if self.order == 0:
            return TruncSeries([0])
        return TruncSeries(k * c for k, c in enumerate(self.coeffs) if k)

    def zderiv(self) -> "TruncSeries":
        """z * d/dz, exact through the full order."""
        return TruncSeries(k * c for k, c in enumerate(self.coeffs))

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, order)


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in z; ``coeffs[k]`` is the z**k coefficient."""

    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = other.coeffs + (0,) * (m - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "Polynomial":
        return Polynomial((0,) * k + self.coeffs) if self.coeffs else self

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def at_neg(self) -> "Polynomial":
        """The polynomial z -> p(-z)."""
        return Polynomial(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def to_series(self, order: int) -> TruncSeries:
        return TruncSeries(self.coeffs or (0,), order)


def catalan_series(order: int) -> TruncSeries:
    return TruncSeries(catalan(k) for k in range(order + 1))


def inv_sqrt_1m4z(order: int) -> TruncSeries:
    """1/sqrt(1-4z), taken straight from its coefficients C(2k, k)."""
    return TruncSeries(binom(2 * k, k) for k in range(order + 1))


def geometric_4z(order: int) -> TruncSeries:
    """1/(1-4z)."""
    return TruncSeries(4 ** k for k in range(order + 1))


def fib_poly(n: int) -> Polynomial:
    if n < 0:
        return Polynomial()
    return Polynomial(tuple(binom(n - k, k) for k in range(n // 2 + 1)))


def _g(n: int) -> Polynomial:
    """f_n(-z)."""
    return fib_poly(n).at_neg()


def _dg(n: int) -> Polynomial:
    """d/dz of f_n(-z)."""
    return _g(n).derivative()


def c_pow_coeff(m: int, n: int) -> int:
    """[z^n] C(z)^m."""
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got ({m}, {n})")
    return exact_div(m * binom(2 * n + m - 1, n), n + m)


def _cpow(m: int, order: int) -> TruncSeries:
    return TruncSeries(c_pow_coeff(m, k) for k in range(order + 1))


def b_series(l: int, order: int) -> TruncSeries:
    """Generating function of totalB(n, l) in n."""
    if l < 1:
        raise ValueError("level must be at least 1")
    c = catalan_series(order)
    inner = (c * _dg(l)).shift(1) - _dg(l + 1)
    return (_cpow(3 * l + 1, order) * inner).shift(l)


def d_series(l: int, order: int) -> TruncSeries:
    """Generating function of 2(totalD - totalDTrunc), in the form built from
    explicit Catalan powers, 1/(1-4z) and 1/sqrt(1-4z)."""
    if l < 1:
        raise ValueError("level must be at least 1")
    N = order
    c = catalan_series(N)
    c_l, c_2l = _cpow(l, N), _cpow(2 * l, N)
    c_3l1, c_3l2 = _cpow(3 * l + 1, N), _cpow(3 * l + 2, N)
    t1 = (c_l - 2 * c_3l2.shift(l + 1)) * _g(l - 1)
    t2 = (c_2l * (l + 1) * (2 - c) * geometric_4z(N)).shift(l)
    t3 = (c_2l.shift(l) + 1) * inv_sqrt_1m4z(N)
    t4 = ((2 * c_3l1 - c_3l2) * _dg(l)).shift(l + 1)
    t5 = (c_3l1 * _g(l) * (l - 1)).shift(l)
    return t1 + t2 - t3 + t4 - t5


def d_series_product_form(l: int, order: int) -> TruncSeries:
    """The same generating function, assembled term by term from the partial
    derivatives of F_l (uses z dC/dz rather than 1/sqrt(1-4z))."""
    if l < 1:
        raise ValueError("level must be at least 1")
    N = order
    c = catalan_series(N)
    zdc = c.zderiv()
    c_2l, c_3l1, c_3l2 = _cpow(2 * l, N), _cpow(3 * l + 1, N), _cpow(3 * l + 2, N)
    t1 = (c_2l * (l * c + (2 * l + 1) * zdc)).shift(l)
    t2 = (c_3l1 * ((c * _dg(l)).shift(1) - _dg(l + 1) - _g(l))).shift(l)
    t4 = (_cpow(l + 1, N) * _g(l - 2)).shift(1)
    t5 = 2 * (c_3l2 * _g(l - 1)).shift(l + 1)
    return t1 - t2 - zdc + t4 - t5


def f_eval_series(l: int, x0, y0, order: int) -> TruncSeries:
    """F_l(x0, y0, z) by the root-decomposition recursion."""
    if l < 0:
        raise ValueError("level must be non-negative")
    x0, y0 = Fraction(x0), Fraction(y0)
    c = catalan_series(order)
    if l == 0:
        return c * y0
    f = 1 / (1 - (c * y0).shift(1))
    for _ in range(2, l + 1):
        f = 1 / (1 - (f * x0).shift(1))
    return f


@dataclass
class LemmaReport:
    order: int
    # lemma name -> first index that failed (None when every index passed)
    first_failure: dict[str, int | None] = field(default_factory=dict)
    # which sign in front of d/dz f_{n+2}(-z) makes the second derivative identity hold
    fderiv2_sign: str | None = None

    @property
    def passed(self) -> bool:
        core = [v for k, v in self.first_failure.items() if not k.startswith("derivative2_")]
        return all(v is None for v in core) and self.fderiv2_sign is not None


def verify_lemmas(order: int) -> LemmaReport:
    """Check the five Fibonacci-polynomial lemmas for every index n <= order.

    The last identity is tried with both signs on its f_{n+2} term; the
    report records the sign (if any) that holds for all n.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    rep = LemmaReport(order)
    c = catalan_series(order)
    z = Polynomial((0, 1))

    def first_bad(pred) -> int | None:
        return next((k for k in range(order + 1) if not pred(k)), None)

    rep.first_failure["recurrence"] = first_bad(
        lambda k: fib_poly(k + 1) == fib_poly(k) + z * fib_poly(k - 1))
    rep.first_failure["cassini"] = first_bad(
        lambda k: fib_poly(k) * fib_poly(k) - fib_poly(k - 1) * fib_poly(k + 1)
        == Polynomial((0,) * k + ((-1) ** k,)))
    one = TruncSeries.constant(1, order)
    rep.first_failure["denominator"] = first_bad(
        lambda k: (_g(k).to_series(order) - (c * _g(k - 1)).shift(1)) * (c ** k) == one)
    rep.first_failure["derivative"] = first_bad(
        lambda k: _g(k) * k - 2 * (z * _dg(k)) == -_dg(k + 1))
    minus = first_bad(lambda k: _g(k) == _dg(k + 1) - z * _dg(k) - _dg(k + 2))
    plus = first_bad(lambda k: _g(k) == _dg(k + 1) - z * _dg(k) + _dg(k + 2))
    rep.first_failure["derivative2_minus"] = minus
    rep.first_failure["derivative2_plus"] = plus
    if minus is None and plus is not None:
        rep.fderiv2_sign = "-"
    elif plus is None and minus is not None:
        rep.fderiv2_sign = "+"
    return rep


def series_to_csv(s: TruncSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "numerator", "denominator"])
    for k, a in enumerate(s.coeffs):
        w.writerow([k, a.numerator, a.denominator])
    return buf.getvalue()
