"""Truncated large-z expansions with explicit remainder bounds.

Each evaluator returns a :class:`CertifiedValue`: the partial sum, a
rigorous radius for the remainder when the bounding result applies, and on
the positive real axis the sign of the remainder (the series there are
enveloping, so the remainder has the sign of the first neglected term and a
smaller modulus).

Remainders of ``f`` and ``g`` are terminants, so their bounds come from
:func:`gentrig.terminant.best_bound`.  The phase and inverse phase carry
closed-form bounds: the first neglected coefficient times 1 for
``|arg| <= pi/4`` and ``|csc(2 arg)|`` up to ``pi/2``.

Partial sums are formed in mpmath at :func:`gentrig._numerics.working_dps`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from . import oracle
from ._numerics import DomainError, working_dps
from .coeffs import c_values, t_values
from .terminant import best_bound

__all__ = [
    "CertifiedValue",
    "EvalRequest",
    "Truncation",
    "Sign",
    "PreconditionError",
    "f_expand",
    "g_expand",
    "m2_expand",
    "phi_expand",
    "x_expand",
    "ti_expand",
    "si_expand",
    "ci_expand",
    "optimal_order",
    "term_magnitude",
    "fresnel",
    "evaluate",
]

MAX_ORDER = 60


class PreconditionError(DomainError):
    """The requested truncation order is too small for the parameter."""


class Truncation(str, enum.Enum):
    requested = "requested"
    optimal = "optimal"


class Sign(str, enum.Enum):
    remainder_positive = "remainder_positive"
    remainder_negative = "remainder_negative"


@dataclass(frozen=True)
class CertifiedValue:
    """A partial sum together with what is known about its remainder.

    ``error_bound`` is ``None`` when no bound applies (order too small,
    argument outside the sector).  ``first_neglected`` is the next term of
    the series in function units.
    """

    value: object
    error_bound: float | None
    terms_used: int
    truncation: Truncation = Truncation.requested
    sign_certificate: Sign | None = None
    basis: str | None = None
    first_neglected: object = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_bound": self.error_bound,
            "terms_used": self.terms_used,
            "truncation": self.truncation.value,
            "sign_certificate": None if self.sign_certificate is None else self.sign_certificate.value,
            "basis": self.basis,
        }


@dataclass(frozen=True)
class EvalRequest:
    a: float | complex
    z: complex
    N: int | str = "optimal"
    alpha: float = 0.0
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def _mp(x):
    x = mp.mpmathify(x)
    if isinstance(x, mp.mpc) and x.imag == 0:
        return mp.mpf(x.real)
    return x


def _positive_real(z) -> bool:
    return not isinstance(z, mp.mpc) and z > 0


def _real(a) -> bool:
    return not isinstance(a, mp.mpc)


def _exact(a) -> Fraction:
    """``a`` as an exact rational (floats convert without rounding)."""
    if isinstance(a, Fraction):
        return a
    if isinstance(a, (int, float)):
        return Fraction(a)
    if isinstance(a, str):
        return Fraction(a)
    return Fraction(float(a))


def _frac(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def _sign_of(term) -> Sign | None:
    if term == 0:
        return None
    return Sign.remainder_positive if term > 0 else Sign.remainder_negative


def _csc_factor(theta: float) -> float:
    if abs(theta) <= math.pi / 4:
        return 1.0
    return abs(1.0 / math.sin(2 * theta))


def _m2_coefficient(a, n: int):
    """``(1-a)_{2n+1} / (n+1-a)`` as the product with the cancelled factor
    left out, so integer ``a`` gives the finite limiting value."""
    out = mp.mpf(1)
    for j in range(2 * n + 1):
        if j != n:
            out *= 1 - a + j
    return out


def _order(N, a, series, z) -> tuple[int, Truncation]:
    if N == "optimal" or N is None:
        return optimal_order(a, float(abs(complex(z))), series), Truncation.optimal
    N = int(N)
    if N < 0:
        raise ValueError("truncation order must be non-negative")
    return N, Truncation.requested


def _no_bound(strict: bool, message: str):
    if strict:
        raise PreconditionError(message)
    return None


def _terminant_factor(p, z) -> tuple[float | None, str | None]:
    """Best bound for ``|Pi_p|`` on the ray through ``z`` and its label."""
    try:
        b = best_bound(complex(p), complex(z))
    except DomainError:
        return None, None
    return b.bound, "terminant:" + b.proposition.value


# ---------------------------------------------------------------------------
# f, g, M^2


def f_expand(a, z, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """``f(a, z) ~ z^(a-1) sum (-1)^n (1-a)_{2n} / z^{2n}``.

    The bound needs ``2N + 1 > Re a``; without it the partial sum is
    returned bare (or :class:`PreconditionError` raised when ``strict``).
    """
    with mp.workdps(working_dps()):
        a, z = _mp(a), _mp(z)
        if z == 0:
            raise DomainError("z must be non-zero")
        N, trunc = _order(N, a, "f", z)
        lead = z ** (a - 1)
        s = mp.zero
        for n in range(N):
            s += (-1) ** n * mp.rf(1 - a, 2 * n) / z ** (2 * n)
        nxt = (-1) ** N * mp.rf(1 - a, 2 * N) / z ** (2 * N)
        value, first = lead * s, lead * nxt
        bound = sign = basis = None
        if 2 * N + 1 > mp.re(a):
            factor, basis = _terminant_factor(2 * N + 1 - a, z)
            if factor is not None:
                bound = float(abs(first)) * factor
            if _positive_real(z) and _real(a):
                sign = _sign_of(first)
        else:
            _no_bound(strict, f"f expansion bound needs 2N+1 > Re(a), got N={N}")
        return CertifiedValue(value, bound, N, trunc, sign, basis, first)


def g_expand(a, z, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """``g(a, z) ~ z^(a-1) sum (-1)^n (1-a)_{2n+1} / z^{2n+1}``; bound needs ``2N+2 > Re a``."""
    with mp.workdps(working_dps()):
        a, z = _mp(a), _mp(z)
        if z == 0:
            raise DomainError("z must be non-zero")
        N, trunc = _order(N, a, "g", z)
        lead = z ** (a - 1)
        s = mp.zero
        for n in range(N):
            s += (-1) ** n * mp.rf(1 - a, 2 * n + 1) / z ** (2 * n + 1)
        nxt = (-1) ** N * mp.rf(1 - a, 2 * N + 1) / z ** (2 * N + 1)
        value, first = lead * s, lead * nxt
        bound = sign = basis = None
        if 2 * N + 2 > mp.re(a):
            factor, basis = _terminant_factor(2 * N + 2 - a, z)
            if factor is not None:
                bound = float(abs(first)) * factor
            if _positive_real(z) and _real(a):
                sign = _sign_of(first)
        else:
            _no_bound(strict, f"g expansion bound needs 2N+2 > Re(a), got N={N}")
        return CertifiedValue(value, bound, N, trunc, sign, basis, first)


def m2_expand(a, z, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """``M^2(a, z) ~ z^(2a-1) sum (-1)^n (1-a)_{2n+1} / ((n+1-a) z^{2n+1})``.

    The bound needs ``N + 1 > Re a``; the terminant factor is taken on the
    ray through ``z`` (it is constant along the ray).
    """
    with mp.workdps(working_dps()):
        a, z = _mp(a), _mp(z)
        if z == 0:
            raise DomainError("z must be non-zero")
        N, trunc = _order(N, a, "m2", z)
        lead = z ** (2 * a - 1)
        s = mp.zero
        for n in range(N):
            s += (-1) ** n * _m2_coefficient(a, n) / z ** (2 * n + 1)
        nxt = (-1) ** N * _m2_coefficient(a, N) / z ** (2 * N + 1)
        value, first = lead * s, lead * nxt
        bound = sign = basis = None
        if N + 1 > mp.re(a):
            factor, basis = _terminant_factor(2 * N + 2 - a, z)
            if factor is not None:
                radius = abs(lead) * abs(mp.rf(1 - a, 2 * N + 1)) / (
                    (N + 1 - mp.re(a)) * abs(z) ** (2 * N + 1))
                bound = float(radius) * factor
            if _positive_real(z) and _real(a):
                sign = _sign_of(first)
        else:
            _no_bound(strict, f"M^2 expansion bound needs N+1 > Re(a), got N={N}")
        return CertifiedValue(value, bound, N, trunc, sign, basis, first)


# ---------------------------------------------------------------------------
# phase and inverse phase


def _phase_args(a, z, name: str):
    if isinstance(a, complex) or (hasattr(a, "imag") and getattr(a, "imag") != 0):
        raise DomainError(f"{name} needs real a")
    if float(a) >= 1:
        raise DomainError(f"{name} needs a < 1")
    z = _mp(z)
    if not mp.re(z) > 0:
        raise DomainError(f"{name} needs Re > 0")
    return z


def phi_expand(a, z, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """``phi(a, z) ~ z + pi/2 - sum (-1)^n t_n(1-a) / ((2n+1) z^{2n+1})`` for ``Re z > 0``."""
    with mp.workdps(working_dps()):
        z = _phase_args(a, z, "phi_expand")
        N, trunc = _order(N, a, "phi", z)
        t = t_values(1 - _exact(a), N)
        s = z + mp.pi / 2
        for n in range(N):
            s -= (-1) ** n * _frac(t[n]) / ((2 * n + 1) * z ** (2 * n + 1))
        first = -((-1) ** N) * _frac(t[N]) / ((2 * N + 1) * z ** (2 * N + 1))
        theta = float(mp.arg(z))
        bound = sign = None
        if abs(theta) < math.pi / 2:
            bound = float(_frac(t[N]) / ((2 * N + 1) * abs(z) ** (2 * N + 1))) * _csc_factor(theta)
        if _positive_real(z):
            sign = _sign_of(first)
        return CertifiedValue(s, bound, N, trunc, sign, "phase", first)


def x_expand(a, w, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """Inverse phase ``X(a, w) ~ w + sum (-1)^n c_n(1-a) / ((2n+1) w^{2n+1})`` for ``Re w > 0``."""
    with mp.workdps(working_dps()):
        w = _phase_args(a, w, "x_expand")
        N, trunc = _order(N, a, "x", w)
        c = c_values(1 - _exact(a), N)
        s = +w
        for n in range(N):
            s += (-1) ** n * _frac(c[n]) / ((2 * n + 1) * w ** (2 * n + 1))
        first = (-1) ** N * _frac(c[N]) / ((2 * N + 1) * w ** (2 * N + 1))
        theta = float(mp.arg(w))
        bound = sign = None
        if abs(theta) < math.pi / 2:
            bound = float(_frac(c[N]) / ((2 * N + 1) * abs(w) ** (2 * N + 1))) * _csc_factor(theta)
        if _positive_real(w):
            sign = _sign_of(first)
        return CertifiedValue(s, bound, N, trunc, sign, "inverse-phase", first)


# ---------------------------------------------------------------------------
# optimal truncation


def _min_order(a, series: str) -> int:
    """Smallest N for which the remainder bound applies."""
    re_a = float(mp.re(mp.mpmathify(a)))
    if series == "f":
        return max(0, math.floor((re_a - 1) / 2) + 1)
    if series == "g":
        return max(0, math.floor((re_a - 2) / 2) + 1)
    if series == "m2":
        return max(0, math.floor(re_a - 1) + 1)
    return 0


def term_magnitude(a, z_mag, series: str, n: int):
    """Modulus of the n-th term (without the common ``|z^(a-1)|``-type factor)."""
    z = mp.mpf(z_mag)
    if series == "f":
        return abs(mp.rf(1 - _mp(a), 2 * n)) / z ** (2 * n)
    if series == "g":
        return abs(mp.rf(1 - _mp(a), 2 * n + 1)) / z ** (2 * n + 1)
    if series == "m2":
        return abs(_m2_coefficient(_mp(a), n)) / z ** (2 * n + 1)
    if series == "phi":
        return abs(_frac(t_values(1 - _exact(a), n)[n])) / ((2 * n + 1) * z ** (2 * n + 1))
    if series == "x":
        return abs(_frac(c_values(1 - _exact(a), n)[n])) / ((2 * n + 1) * z ** (2 * n + 1))
    raise ValueError(f"unknown series {series!r}")


def optimal_order(a, z_mag: float, series: str) -> int:
    """Order at the first local minimum of the term modulus, capped at 60.

    Truncating after N terms leaves the N-th term as the first neglected
    one, which is what the bounds scale with; scanning starts at the
    smallest N whose bound applies.  A vanishing term stops the scan.
    """
    if series not in ("f", "g", "m2", "phi", "x"):
        raise ValueError(f"unknown series {series!r}")
    if not z_mag > 0:
        raise DomainError("z_mag must be positive")
    with mp.workdps(working_dps()):
        n = _min_order(a, series)
        cur = term_magnitude(a, z_mag, series, n)
        while n < MAX_ORDER:
            if cur == 0:
                return n
            nxt = term_magnitude(a, z_mag, series, n + 1)
            if nxt >= cur:
                return n
            n, cur = n + 1, nxt
        return MAX_ORDER


# ---------------------------------------------------------------------------
# ti, si, ci


def ti_expand(a, z, alpha=0.0, N="optimal", *, strict: bool = False) -> CertifiedValue:
    """``ti = -f sin(z - pi alpha) + g cos(z - pi alpha)`` from the f and g series.

    With ``N="optimal"`` each series is truncated at its own least term.
    """
    fv = f_expand(a, z, N, strict=strict)
    gv = g_expand(a, z, N, strict=strict)
    with mp.workdps(working_dps()):
        shift = _mp(z) - mp.pi * _mp(alpha)
        sn, cs = mp.sin(shift), mp.cos(shift)
        value = -fv.value * sn + gv.value * cs
        bound = None
        if fv.error_bound is not None and gv.error_bound is not None:
            bound = float(abs(sn)) * fv.error_bound + float(abs(cs)) * gv.error_bound
        trunc = fv.truncation
        return CertifiedValue(value, bound, max(fv.terms_used, gv.terms_used), trunc, None,
                              "f,g", None)


def si_expand(a, z, N="optimal", **kw) -> CertifiedValue:
    return ti_expand(a, z, 0.5, N, **kw)


def ci_expand(a, z, N="optimal", **kw) -> CertifiedValue:
    return ti_expand(a, z, 0.0, N, **kw)


# ---------------------------------------------------------------------------
# Fresnel integrals


FRESNEL_SWITCH = 1e-16


def _fresnel_folded(z):
    """S and C for ``Re z >= 0``, ``|arg z| <= pi/4``, plus the evaluation path used."""
    if z == 0:
        return mp.zero, mp.zero, "closed-form"
    u = mp.pi * z * z / 2
    scale = 1 / mp.sqrt(2 * mp.pi)
    sv, cv = si_expand(mp.mpf(1) / 2, u), ci_expand(mp.mpf(1) / 2, u)
    if (sv.error_bound is not None and cv.error_bound is not None
            and max(sv.error_bound, cv.error_bound) * float(scale) <= FRESNEL_SWITCH):
        si_v, ci_v, path = sv.value, cv.value, "expansion"
    else:
        si_v, ci_v, path = oracle.si(mp.mpf(1) / 2, u), oracle.ci(mp.mpf(1) / 2, u), "oracle"
    return mp.mpf(1) / 2 - scale * si_v, mp.mpf(1) / 2 - scale * ci_v, path


def fresnel(z, *, with_path: bool = False):
    """Return ``(F, S, C)``: the auxiliary Fresnel function and the integrals.

    ``S(z) = 1/2 - si(1/2, pi z^2/2)/sqrt(2 pi)``, likewise ``C`` with ci,
    and ``F = (ci + i si)/sqrt(2 pi)`` at the same argument.  The large-
    argument series is used when its bound is below 1e-16, otherwise the
    quadrature oracle.  ``S`` and ``C`` are odd, and ``S(iy) = -i S(y)``,
    ``C(iy) = i C(y)`` reach ``|arg z| > pi/4``; there ``pi z^2/2`` leaves
    the sector of the si/ci evaluators, so ``F`` is returned as ``None``.
    """
    with mp.workdps(working_dps()):
        z = _mp(z)
        flip = 1
        if mp.re(z) < 0 or (mp.re(z) == 0 and mp.im(z) < 0):
            z, flip = -z, -1
        rot = 0
        if abs(mp.arg(z)) > mp.pi / 4:
            rot = 1 if mp.im(z) > 0 else -1
            z = -1j * rot * z
        S, C, path = _fresnel_folded(_mp(z))
        F = None if rot else (mp.mpf(1) / 2 - C) + 1j * (mp.mpf(1) / 2 - S)
        if rot:
            S, C = -1j * rot * S, 1j * rot * C
        S, C = flip * S, flip * C
        out = (F, S, C)
        return out + (path,) if with_path else out


# ---------------------------------------------------------------------------
# dispatch


_SERIES = {
    "f": f_expand,
    "g": g_expand,
    "m2": m2_expand,
    "phi": phi_expand,
    "x": x_expand,
}


def evaluate(fn: str, req: EvalRequest) -> CertifiedValue:
    """Evaluate series ``fn`` for a request (used by the command line)."""
    if fn in _SERIES:
        return _SERIES[fn](req.a, req.z, req.N)
    if fn == "ti":
        return ti_expand(req.a, req.z, req.alpha, req.N)
    if fn == "si":
        return si_expand(req.a, req.z, req.N)
    if fn == "ci":
        return ci_expand(req.a, req.z, req.N)
    if fn in ("fresnelS", "fresnelC"):
        F, S, C, path = fresnel(req.z, with_path=True)
        v = S if fn == "fresnelS" else C
        return CertifiedValue(v, None, 0, Truncation.optimal, None, "fresnel:" + path)
    raise ValueError(f"unknown function {fn!r}")
