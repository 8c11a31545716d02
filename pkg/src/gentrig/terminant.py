"""Dingle's basic terminant and explicit bounds for its modulus.

The terminant is

    Pi_p(z) = 1/Gamma(p) * int_0^inf s^(p-1) e^(-s) / (1 + (s/z)^2) ds,

for ``Re p > 0``.  :func:`terminant_eval` computes it by double-exponential
quadrature along a ray; the ``bound_b*`` functions return the closed-form
upper bounds for ``|Pi_p(z)|`` that depend only on ``p`` and ``arg z``, and
:func:`best_bound` picks the smallest applicable one.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

from ._numerics import ConvergenceError, DomainError, arg, chi, chi_watson, gamma_ratio

__all__ = [
    "Proposition",
    "TerminantBound",
    "TerminantQuery",
    "terminant_eval",
    "bound_b1",
    "bound_b2",
    "bound_b3",
    "bound_b4",
    "bound_b5",
    "best_bound",
    "all_bounds",
    "b3_objective",
    "b3_residual",
    "b3_bracket",
    "chi",
    "chi_watson",
]

PI = math.pi
QUARTER = PI / 4
HALF = PI / 2


class Proposition(str, enum.Enum):
    B1_csc = "B1_csc"
    B2_halfplane_a = "B2_halfplane_a"
    B2_halfplane_b = "B2_halfplane_b"
    B3_theta = "B3_theta"
    B4_chi_a = "B4_chi_a"
    B4_chi_b = "B4_chi_b"
    B5_reflect = "B5_reflect"


# cheaper propositions win exact ties in best_bound
_COST = {
    Proposition.B1_csc: 0,
    Proposition.B2_halfplane_a: 1,
    Proposition.B2_halfplane_b: 1,
    Proposition.B4_chi_a: 2,
    Proposition.B4_chi_b: 2,
    Proposition.B3_theta: 3,
    Proposition.B5_reflect: 4,
}


@dataclass(frozen=True)
class TerminantBound:
    proposition: Proposition
    sector_ok: bool
    bound: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if not self.sector_ok and self.bound is not None:
            raise ValueError("a bound outside its sector must be absent")
        if self.bound is not None and not self.bound >= 0:
            raise ValueError("bound must be non-negative")

    def to_dict(self) -> dict:
        return {
            "proposition": self.proposition.value,
            "sector_ok": self.sector_ok,
            "bound": self.bound,
            "theta": self.theta,
        }


@dataclass(frozen=True)
class TerminantQuery:
    p: complex
    z: complex

    def __post_init__(self):
        p, z = complex(self.p), complex(self.z)
        if not p.real > 0:
            raise DomainError(f"terminant needs Re(p) > 0, got p = {p}")
        if z == 0:
            raise DomainError("terminant needs z != 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "z", z)

    @property
    def arg(self) -> float:
        return arg(self.z)

    @property
    def real_p(self) -> bool:
        return self.p.imag == 0


def _query(q, z=None) -> TerminantQuery:
    if isinstance(q, TerminantQuery):
        return q
    return TerminantQuery(q, z)


# ---------------------------------------------------------------------------
# evaluation


def _log1p_sq(w: np.ndarray) -> np.ndarray:
    """``log(1 + w^2)`` for complex arrays without overflow for huge ``w``."""
    out = np.empty_like(w)
    big = np.abs(w) > 1e100
    out[~big] = np.log1p(w[~big] ** 2)
    wb = w[big]
    out[big] = 2 * np.log(wb) + np.log1p(wb ** -2)
    return out


def terminant_eval(q, z=None, *, tol: float = 1e-14, max_level: int = 10) -> complex:
    """Evaluate ``Pi_p(z)`` for ``|arg z| <= 3 pi / 4``.

    The pole of the integrand nearest the positive axis sits at
    ``s = z e^{-i pi/2 sgn(arg z)}``.  Up to ``|arg z| = 3 pi/8`` the real
    axis is used; up to ``5 pi/8`` the ray is turned just enough to keep an
    angular gap of ``pi/8`` to the pole (this continues the function
    analytically past ``|arg z| = pi/2``); beyond that the real axis is used
    again and the residue of the crossed pole is added.  Turning the ray
    further would cost about ``sec(angle)^Re(p)`` in cancellation.

    Nodes come from the exp-sinh map ``s = exp(pi/2 sinh t)`` with step
    halving until two levels agree to ``tol``.
    """
    q = _query(q, z)
    theta = q.arg
    if abs(theta) > 3 * QUARTER + 1e-15:
        raise DomainError(f"terminant_eval supports |arg z| <= 3 pi/4, got {theta:.6g}")
    p, zz = q.p, q.z
    sign = 1 if theta >= 0 else -1
    residue = 0j
    if abs(theta) <= 3 * PI / 8 or abs(theta) > 5 * PI / 8:
        beta = 0.0
    else:
        beta = sign * (abs(theta) - 3 * PI / 8)
    lg = complex(loggamma(p))
    if abs(theta) > 5 * PI / 8:
        pole = zz * cmath.exp(-1j * sign * HALF)
        residue = PI * zz * cmath.exp((p - 1) * cmath.log(pole) - pole - lg)
    rot = cmath.exp(1j * beta)

    # truncate the t-range where the integrand has decayed below e^-60
    t_lo = -math.asinh(60.0 / (p.real * HALF)) - 0.5
    t_hi = math.asinh(math.log(max(abs(p), 1.0) + 200.0) / HALF) + 1.0

    def samples(t: np.ndarray) -> np.ndarray:
        log_r = HALF * np.sinh(t)
        r = np.exp(np.minimum(log_r, 700.0))
        s = r * rot
        logv = (
            (p - 1) * (log_r + 1j * beta)
            - s
            - lg
            + np.log(HALF * np.cosh(t))
            + log_r
            + 1j * beta
            - _log1p_sq(s / zz)
        )
        out = np.exp(logv)
        out[log_r > 700.0] = 0.0
        return out

    # Cancellation (large p on a turned ray, or large Im p) puts a floor of
    # a few ulps of the absolute mass under any achievable agreement.
    h = 0.5
    t = np.arange(t_lo, t_hi + h, h)
    vals = samples(t)
    total, mass = vals.sum(), np.abs(vals).sum()
    estimate = h * total
    offset = t_lo
    for level in range(1, max_level + 1):
        h /= 2
        vals = samples(np.arange(offset + h, t_hi + h, 2 * h))
        total += vals.sum()
        mass += np.abs(vals).sum()
        new = h * total
        floor = 64 * np.finfo(float).eps * h * mass
        if level >= 2 and abs(new - estimate) <= max(tol * abs(new), floor):
            return complex(new) + residue
        estimate = new
    raise ConvergenceError(
        "terminant quadrature did not converge",
        p=p,
        z=zz,
        last=complex(estimate),
        step=h,
        mass=float(h * mass),
    )


# ---------------------------------------------------------------------------
# bounds


def _csc_factor(theta: float) -> float:
    a = abs(theta)
    if a <= QUARTER:
        return 1.0
    return abs(1.0 / math.sin(2 * theta))


def bound_b1(q, z=None) -> TerminantBound:
    """Gamma-ratio bound, valid for ``|arg z| < pi/2``."""
    q = _query(q, z)
    theta = q.arg
    if abs(theta) >= HALF:
        return TerminantBound(Proposition.B1_csc, False)
    return TerminantBound(Proposition.B1_csc, True, gamma_ratio(q.p) * _csc_factor(theta))


def _b2_variants(p: complex, theta: float, sign: int) -> tuple[float, float]:
    re, im = p.real, p.imag
    first = 0.5 * (1.0 / math.cos(theta)) ** re * max(1.0, math.exp(im * (-sign * HALF - theta)))
    second_a = 0.5 * max(1.0, math.exp(im * (sign * HALF - theta)))
    second_b = 0.5 * gamma_ratio(p)
    return first + second_a, first + second_b


def bound_b2(q, z=None) -> TerminantBound:
    """Half-plane secant bounds for ``0 <= |arg z| < pi/2`` (smaller variant)."""
    q = _query(q, z)
    theta = q.arg
    if abs(theta) >= HALF:
        return TerminantBound(Proposition.B2_halfplane_a, False)
    signs = (1, -1) if theta == 0 else ((1,) if theta > 0 else (-1,))
    best = None
    for sign in signs:
        va, vb = _b2_variants(q.p, theta, sign)
        for prop, v in ((Proposition.B2_halfplane_a, va), (Proposition.B2_halfplane_b, vb)):
            if best is None or v < best[1]:
                best = (prop, v)
    return TerminantBound(best[0], True, best[1])


def b3_bracket(theta_z: float) -> tuple[float, float]:
    """Open interval containing the optimal ``theta`` for ``pi/4 < |arg z| < pi``."""
    a = abs(theta_z)
    if not QUARTER < a < PI:
        raise DomainError("B3 needs pi/4 < |arg z| < pi")
    if a < HALF:
        lo, hi = 0.0, a - QUARTER
    elif a < 3 * QUARTER:
        lo, hi = a - HALF, a - QUARTER
    else:
        lo, hi = a - HALF, HALF
    if theta_z < 0:
        lo, hi = -hi, -lo
    return lo, hi


def b3_residual(p: float, theta_z: float, theta: float) -> float:
    return (p + 2) * math.cos(2 * theta_z - 3 * theta) - (p - 2) * math.cos(2 * theta_z - theta)


def b3_objective(p: float, theta_z: float, theta: float) -> float:
    """Right-hand side ``|csc(2(arg z - theta))| / cos^p(theta)``."""
    return abs(1.0 / math.sin(2 * (theta_z - theta))) / math.cos(theta) ** p


def bound_b3(q, z=None) -> TerminantBound:
    """Optimised-angle bound for real ``p > 0`` and ``pi/4 < |arg z| < pi``."""
    q = _query(q, z)
    theta_z = q.arg
    if not q.real_p or not QUARTER < abs(theta_z) < PI:
        return TerminantBound(Proposition.B3_theta, False)
    p = q.p.real
    lo, hi = b3_bracket(theta_z)
    f = lambda th: b3_residual(p, theta_z, th)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        root = lo
    elif fhi == 0:
        root = hi
    else:
        if flo * fhi > 0:
            raise ConvergenceError(
                "B3 root not bracketed", p=p, arg_z=theta_z, bracket=(lo, hi), values=(flo, fhi)
            )
        root = brentq(f, lo, hi, xtol=1e-16, rtol=1e-15, maxiter=200)
    return TerminantBound(Proposition.B3_theta, True, b3_objective(p, theta_z, root), theta=root)


def bound_b4(q, z=None) -> TerminantBound:
    """Chi-function bounds for ``pi/4 < |arg z| <= pi/2`` (smaller variant)."""
    q = _query(q, z)
    theta = q.arg
    if not QUARTER < abs(theta) <= HALF:
        return TerminantBound(Proposition.B4_chi_a, False)
    p = q.p
    sign = 1 if theta > 0 else -1
    common = 0.5 + abs(p) / (2 * p.real) * chi(p.real) * max(1.0, math.exp(-p.imag * theta))
    va = common + 0.5 * max(1.0, math.exp(p.imag * (sign * HALF - theta)))
    vb = common + 0.5 * gamma_ratio(p)
    if vb < va:
        return TerminantBound(Proposition.B4_chi_b, True, vb)
    return TerminantBound(Proposition.B4_chi_a, True, va)


def _best_in_right_half(p: complex, theta: float) -> TerminantBound:
    candidates = [bound_b1(p, cmath.rect(1.0, theta)), bound_b2(p, cmath.rect(1.0, theta))]
    zq = TerminantQuery(p, cmath.rect(1.0, theta))
    candidates += [bound_b4(zq), bound_b3(zq)]
    return _pick(candidates)


def bound_b5(q, z=None, variant: str = "best") -> TerminantBound:
    """Reflection bound for ``pi/2 < |arg z| < pi``.

    ``variant`` selects the ``sqrt(2 pi Re p)/2`` form (``"sqrt"``), the
    ``chi(Re p)`` form (``"chi"``) or the smaller of the two (``"best"``).
    The terminant at the reflected argument is bounded by the best of the
    other propositions there.
    """
    q = _query(q, z)
    theta = q.arg
    if not HALF < abs(theta) < PI:
        return TerminantBound(Proposition.B5_reflect, False)
    p = q.p
    sign = 1 if theta > 0 else -1
    pref = (
        math.exp(p.imag * (sign * HALF - theta))
        * gamma_ratio(p)
        / abs(math.sin(theta)) ** p.real
    )
    reflected = _best_in_right_half(p, theta - sign * PI).bound
    v_sqrt = pref * math.sqrt(2 * PI * p.real) / 2 + reflected
    v_chi = pref * chi(p.real) + reflected
    value = {"sqrt": v_sqrt, "chi": v_chi, "best": min(v_sqrt, v_chi)}[variant]
    return TerminantBound(Proposition.B5_reflect, True, value)


def _pick(candidates) -> TerminantBound:
    ok = [b for b in candidates if b.sector_ok]
    if not ok:
        raise DomainError("no terminant bound applies")
    return min(ok, key=lambda b: (b.bound, _COST[b.proposition]))


def all_bounds(q, z=None) -> list[TerminantBound]:
    """Every proposition evaluated at ``q`` (inapplicable ones flagged)."""
    q = _query(q, z)
    return [bound_b1(q), bound_b2(q), bound_b4(q), bound_b3(q), bound_b5(q)]


def best_bound(q, z=None) -> TerminantBound:
    """Smallest applicable bound for ``|Pi_p(z)|``, ``|arg z| < pi``.

    Only ``p`` and ``arg z`` enter, so one value covers the whole ray.
    """
    q = _query(q, z)
    if abs(q.arg) >= PI:
        raise DomainError("no terminant bound on the negative real axis")
    return _pick(all_bounds(q))
