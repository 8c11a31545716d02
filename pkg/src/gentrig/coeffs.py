"""Exact coefficient polynomials of the phase and inverse-phase expansions.

All polynomials are in the variable ``x = 1 - a`` and are built with
:class:`fractions.Fraction` coefficients:

``t_n(x)``
    coefficients of the phase expansion, monic of degree ``2n+1`` with
    integer coefficients;
``d_{n,k}(x)``
    coefficient of ``(-1)^k z^{-2k}`` in ``(z^{-1} Phi)^{2n+1}``;
``c_n(x) = d_{n,n+1}(x)``
    coefficients of the inverse-phase (zero) expansion.

Tables are memoised; the cache is guarded by a lock so concurrent readers
always see fully built entries.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp

__all__ = [
    "RationalPolynomial",
    "CoefficientError",
    "t_poly",
    "d_poly",
    "c_poly",
    "eval_poly",
    "t_values",
    "c_values",
]


class CoefficientError(ArithmeticError):
    """Raised when an exact step of the recurrences fails (an internal bug)."""


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (Fraction(0),)


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact rational coefficients, lowest power first."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable = (0,)):
        object.__setattr__(self, "coefficients", _trim(coefficients))

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        if self.is_zero():
            return 0
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return len(self.coefficients) == 1 and self.coefficients[0] == 0

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(c * other for c in self.coefficients)
        other = _as_poly(other)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def divmod_linear(self, shift) -> tuple["RationalPolynomial", Fraction]:
        """Divide by ``x + shift``; returns ``(quotient, remainder)``."""
        shift = Fraction(shift)
        c = self.coefficients
        if len(c) == 1:
            return RationalPolynomial((0,)), c[0]
        q = [Fraction(0)] * (len(c) - 1)
        acc = Fraction(0)
        for i in range(len(c) - 1, 0, -1):
            acc = c[i] - shift * acc if i < len(c) - 1 else c[i]
            q[i - 1] = acc
        rem = c[0] - shift * acc
        return RationalPolynomial(q), rem

    def exact_div_linear(self, shift) -> "RationalPolynomial":
        q, r = self.divmod_linear(shift)
        if r != 0:
            raise CoefficientError(f"x + {shift} does not divide {self}: remainder {r}")
        return q

    def __call__(self, x):
        return eval_poly(self, x)

    def to_strings(self) -> list[str]:
        """Coefficients as exact ``"p/q"`` strings (``"p"`` when integral)."""
        return [str(c) for c in self.coefficients]

    def __str__(self) -> str:
        terms = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                pw = "x" if i == 1 else f"x^{i}"
                body = pw if mag == 1 else f"{mag}*{pw}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(p) -> RationalPolynomial:
    if isinstance(p, RationalPolynomial):
        return p
    return RationalPolynomial.constant(p)


def eval_poly(p: RationalPolynomial, x):
    """Horner evaluation.

    ``x`` may be a float, a Fraction, or an mpmath number; the result has
    the type that arithmetic between ``x`` and a Fraction coefficient gives
    (floats for float input, mpmath numbers for mpmath input).
    """
    coeffs = p.coefficients
    if isinstance(x, (int, Fraction)):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc
    if isinstance(x, (float, complex)):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + float(c)
        return acc
    # mpmath numbers do not mix with Fraction directly
    acc = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + mp.mpf(c.numerator) / c.denominator
    return acc


def _rising(x: RationalPolynomial, m: int) -> RationalPolynomial:
    """Pochhammer symbol ``(x)_m`` as a polynomial in ``x``."""
    out = RationalPolynomial.constant(1)
    for j in range(m):
        out = out * (x + j)
    return out


class _Tables:
    """Lazily grown, lock-protected tables of ``t_n`` and ``d_{n,k}``."""

    def __init__(self):
        self._lock = threading.Lock()
        self._t: list[RationalPolynomial] = []
        self._d: dict[tuple[int, int], RationalPolynomial] = {}

    def t(self, n: int) -> RationalPolynomial:
        if n < len(self._t):
            return self._t[n]
        with self._lock:
            self._extend_t(n)
            return self._t[n]

    def _extend_t(self, n: int) -> None:
        x = RationalPolynomial.x()
        t = self._t
        while len(t) <= n:
            m = len(t)
            if m == 0:
                t.append(x)
                continue
            head = _rising(x, 2 * m + 2).exact_div_linear(m + 1) * (m + 1)
            acc = head
            for k in range(1, m + 1):
                acc = acc - _rising(x, 2 * k + 1).exact_div_linear(k) * t[m - k]
            t.append(acc)

    def d(self, n: int, k: int) -> RationalPolynomial:
        key = (n, k)
        got = self._d.get(key)
        if got is not None:
            return got
        # t is filled first, outside the d-lock section, to keep one lock.
        self.t(max(k - 1, 0))
        with self._lock:
            for kk in range(1, k + 1):
                if (n, kk) in self._d:
                    continue
                self._d[(n, kk)] = self._d_entry(n, kk)
            return self._d[key]

    def _d_entry(self, n: int, k: int) -> RationalPolynomial:
        t = self._t
        if k == 1:
            return RationalPolynomial((0, 2 * n + 1))
        acc = t[k - 1] * Fraction(2 * n + 1, 2 * k - 1)
        inner = RationalPolynomial.constant(0)
        for j in range(1, k):
            w = Fraction(2 * j * (n + 1) - k, 2 * j - 1)
            if w == 0:
                continue
            inner = inner + (t[j - 1] * self._d[(n, k - j)]) * w
        return acc + inner * Fraction(1, k)


_TABLES = _Tables()


def t_poly(n: int) -> RationalPolynomial:
    """Return ``t_n(x)``, the n-th phase-expansion coefficient polynomial."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _TABLES.t(n)


def d_poly(n: int, k: int) -> RationalPolynomial:
    """Return ``d_{n,k}(x)`` for ``n >= 0``, ``k >= 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 1:
        raise ValueError("k must be at least 1")
    return _TABLES.d(n, k)


def c_poly(n: int) -> RationalPolynomial:
    """Return ``c_n(x) = d_{n,n+1}(x)``, the inverse-phase coefficient."""
    return d_poly(n, n + 1)


# ---------------------------------------------------------------------------
# Values at a fixed exact point.
#
# Building c_n as polynomials costs O(n^5) rational operations, which gets
# slow past n ~ 25.  The expansions only ever need numbers at one x, so the
# same recurrences are also run with x substituted by an exact Fraction.

_VALUE_LOCK = threading.Lock()
_T_VALUES: dict[Fraction, list[Fraction]] = {}
_C_VALUES: dict[Fraction, list[Fraction]] = {}


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x)) if not isinstance(x, str) else Fraction(x)


def _rising_value(x: Fraction, m: int, skip: int | None = None) -> Fraction:
    out = Fraction(1)
    for j in range(m):
        if j != skip:
            out *= x + j
    return out


def t_values(x, n_max: int) -> list[Fraction]:
    """``[t_0(x), ..., t_{n_max}(x)]`` for an exactly representable ``x``.

    The division by ``x + n + 1`` is performed by omitting that factor
    from the rising factorial, which is the same exact quotient the
    polynomial path computes.
    """
    x = _exact(x)
    with _VALUE_LOCK:
        t = _T_VALUES.setdefault(x, [])
        while len(t) <= n_max:
            m = len(t)
            if m == 0:
                t.append(x)
                continue
            acc = (m + 1) * _rising_value(x, 2 * m + 2, skip=m + 1)
            for k in range(1, m + 1):
                acc -= _rising_value(x, 2 * k + 1, skip=k) * t[m - k]
            t.append(acc)
        return list(t[: n_max + 1])


def c_values(x, n_max: int) -> list[Fraction]:
    """``[c_0(x), ..., c_{n_max}(x)]`` for an exactly representable ``x``."""
    x = _exact(x)
    t = t_values(x, n_max)
    with _VALUE_LOCK:
        c = _C_VALUES.setdefault(x, [])
        while len(c) <= n_max:
            n = len(c)
            d: dict[int, Fraction] = {1: (2 * n + 1) * x}
            for k in range(2, n + 2):
                inner = Fraction(0)
                for j in range(1, k):
                    inner += Fraction(2 * j * (n + 1) - k, 2 * j - 1) * t[j - 1] * d[k - j]
                d[k] = Fraction(2 * n + 1, 2 * k - 1) * t[k - 1] + inner / k
            c.append(d[n + 1])
        return list(c[: n_max + 1])


def coefficient_table(kind: str, n: int, k: int | None = None) -> RationalPolynomial:
    """Dispatch helper for the CLI: ``kind`` is ``"t"``, ``"c"`` or ``"d"``."""
    if kind == "t":
        return t_poly(n)
    if kind == "c":
        return c_poly(n)
    if kind == "d":
        if k is None:
            raise ValueError("kind 'd' needs k")
        return d_poly(n, k)
    raise ValueError(f"unknown coefficient kind {kind!r}")


def polynomials(kind: str, n_values: Sequence[int]) -> list[RationalPolynomial]:
    return [coefficient_table(kind, n) for n in n_values]
