"""Positive real zeros of ti(a, z, alpha) for real a <= 1.

The k-th zero satisfies ``phi(a, z) = pi (k + alpha + 1/2)``, i.e. it equals
the inverse phase ``X(a, pi kappa)`` with ``kappa = k + alpha``.  A zero is
seeded from the inverse-phase series (with its certified radius), refined by
Newton's method on ti using ``d ti/dz = -z^(a-1) cos(z - pi alpha)``, and can
be checked against the classical two-sided bracket for si and ci zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from mpmath import mp

from . import oracle
from ._numerics import ConvergenceError, DomainError, working_dps
from .expansions import optimal_order, x_expand

__all__ = [
    "ZeroRecord",
    "ZeroIndexError",
    "first_index",
    "zero_exists",
    "zero_seed",
    "zero_refine",
    "zero",
    "literature_bracket",
    "zeros_below",
    "count_zeros_phase",
    "count_sign_changes",
    "x_expand",
]

SEED_BOUND_LIMIT = 1.0  # above this the series seed is not trusted


class ZeroIndexError(IndexError):
    """The requested zero does not exist (index below the first one)."""


@dataclass(frozen=True)
class ZeroRecord:
    a: float
    alpha: float
    k: int
    kappa: float
    seed: object
    seed_bound: float | None
    seed_terms: int | None = None
    seed_method: str = "series"
    refined: object = None
    residual: float | None = None
    iterations: int = 0

    @property
    def certified(self) -> bool | None:
        """``|refined - seed| <= seed_bound``, or None if either is missing."""
        if self.refined is None or self.seed_bound is None:
            return None
        return bool(abs(self.refined - self.seed) <= self.seed_bound)

    def to_dict(self) -> dict:
        lo = hi = None
        if self.alpha in (0.0, 0.5) and self.kappa > 0:
            lo, hi = literature_bracket(self.a, self.alpha, self.k)
        return {
            "k": self.k,
            "kappa": self.kappa,
            "seed": self.seed,
            "seed_bound": self.seed_bound,
            "refined": self.refined,
            "residual": self.residual,
            "bracket_lo": lo,
            "bracket_hi": hi,
        }


def _threshold(a, alpha) -> Fraction:
    a, alpha = Fraction(a), Fraction(alpha)
    return (a + abs(a) - 2) / 4 - alpha


def first_index(a: float, alpha: float) -> int:
    """Smallest integer k with ``k + alpha > (a + |a| - 2)/4``.

    Exact rational arithmetic, so the boundary case (equality) counts as
    no zero.
    """
    return math.floor(_threshold(a, alpha)) + 1


def zero_exists(a: float, alpha: float, k: int) -> bool:
    return k >= first_index(a, alpha)


def _check(a, alpha, k):
    if not a <= 1:
        raise DomainError("zeros are supported for a <= 1 only")
    if not 0 <= alpha < 1:
        raise DomainError("alpha must lie in [0, 1)")
    if not zero_exists(a, alpha, k):
        raise ZeroIndexError(
            f"no zero with k={k}: k + alpha must exceed (a+|a|-2)/4 (first index {first_index(a, alpha)})")


def zero_seed(a: float, alpha: float, k: int) -> ZeroRecord:
    """Seed from the inverse-phase series at ``w = pi kappa``.

    The series is truncated at its least term.  When ``pi kappa`` is too
    small for that (no positive ``w``, or a radius above 1) the seed comes
    from inverting the phase numerically and carries no radius.
    """
    _check(a, alpha, k)
    kappa = k + alpha
    if a == 1:
        return ZeroRecord(a, alpha, k, kappa, mp.pi * kappa, 0.0, 0, "closed-form")
    with mp.workdps(working_dps()):
        w = mp.pi * (k + mp.mpf(alpha))
        if w > 0:
            N = optimal_order(a, float(w), "x")
            cv = x_expand(a, w, N)
            if cv.error_bound is not None and cv.error_bound <= SEED_BOUND_LIMIT:
                return ZeroRecord(a, alpha, k, kappa, cv.value, cv.error_bound, N, "series")
        z = oracle.invert_phase(a, w)
        return ZeroRecord(a, alpha, k, kappa, z, None, None, "phase-inversion")


def zero_refine(rec: ZeroRecord, max_iter: int = 50) -> ZeroRecord:
    """Newton's method on ti from ``rec.seed``.

    Stops when the step falls below ``10^-(dps-6)`` relative to z; the
    residual ``|ti|`` at the returned point is recorded.
    """
    if rec.seed is None:
        raise ValueError("record has no seed")
    a, alpha = rec.a, rec.alpha
    if a == 1:
        return replace(rec, refined=rec.seed, residual=0.0)
    with mp.workdps(working_dps()):
        tol = mp.mpf(10) ** (-(working_dps() - 6))
        shift = mp.pi * mp.mpf(alpha)
        z = mp.mpf(rec.seed)
        for it in range(1, max_iter + 1):
            val = oracle.ti(a, z, alpha)
            slope = -z ** (mp.mpf(a) - 1) * mp.cos(z - shift)
            step = val / slope
            if abs(step) <= tol * z:
                return replace(rec, refined=z, residual=float(abs(val)), iterations=it)
            z = z - step
            if not z > 0:
                break
    raise ConvergenceError("Newton iteration for the zero did not converge",
                           a=a, alpha=alpha, k=rec.k, last=float(z))


def zero(a: float, alpha: float, k: int) -> ZeroRecord:
    """Seeded and refined record for the k-th zero."""
    return zero_refine(zero_seed(a, alpha, k))


def literature_bracket(a: float, alpha: float, k: int) -> tuple[float, float]:
    """Classical bracket ``pi kappa < z < pi kappa + (1-a)/(pi kappa) * 2/(1 + sqrt(1 + 4(1-a)/(pi kappa)^2))``.

    Stated for the si and ci cases (``alpha`` 1/2 and 0) with ``kappa > 0``.
    """
    if alpha not in (0, 0.5):
        raise DomainError("the bracket is known for alpha in {0, 1/2} only")
    _check(a, alpha, k)
    w = math.pi * (k + alpha)
    if not w > 0:
        raise DomainError("the bracket needs kappa > 0")
    x = 1 - a
    return w, w + (x / w) * 2 / (1 + math.sqrt(1 + 4 * x / w ** 2))


def zeros_below(a: float, alpha: float, Z: float, refine: bool = True) -> list[ZeroRecord]:
    """All zeros in ``(0, Z]`` in increasing order."""
    out = []
    k = first_index(a, alpha)
    while True:
        rec = zero(a, alpha, k) if refine else zero_seed(a, alpha, k)
        root = rec.refined if refine else rec.seed
        if root > Z:
            return out
        out.append(rec)
        k += 1


def count_zeros_phase(a: float, alpha: float, Z: float) -> int:
    """Number of zeros in ``(0, Z]`` from the phase: k with ``pi(k+alpha+1/2) <= phi(a, Z)``."""
    with mp.workdps(working_dps()):
        phi = oracle.phase_modulus(a, Z).phi
        top = math.floor(phi / mp.pi - mp.mpf(alpha) - mp.mpf(1) / 2)
    return max(0, top - first_index(a, alpha) + 1)


def count_sign_changes(a: float, alpha: float, Z: float, step: float = 0.01,
                       z_min: float = 1e-6) -> int:
    """Sign changes of ti on ``(0, Z]`` by dense double-precision sampling.

    The grid is geometric from ``z_min`` to 1 and uniform with spacing
    ``step`` beyond; zeros of ti are about ``pi`` apart, so no pair is
    missed.
    """
    grid = np.concatenate([np.geomspace(z_min, 1.0, 200, endpoint=False),
                           np.arange(1.0, Z + step / 2, step)])
    vals = np.array([oracle.ti_fast(a, float(z), alpha) for z in grid])
    signs = np.sign(vals)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
