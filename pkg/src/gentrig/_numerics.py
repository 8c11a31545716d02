"""Shared numeric plumbing: working precision, complex Gamma helpers, errors."""

from __future__ import annotations

import cmath
import math
import os
from contextlib import contextmanager

import numpy as np
from mpmath import mp
from scipy.special import loggamma

DEFAULT_DPS = 30

_dps_override: int | None = None


class DomainError(ValueError):
    """Arguments lie outside the region where an operation is defined."""


class ConvergenceError(ArithmeticError):
    """An iterative or quadrature procedure failed to converge."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


def working_dps() -> int:
    """Decimal digits used by mpmath evaluations.

    Resolution order: :func:`set_working_dps`, ``GENTRIG_PRECISION``,
    :data:`DEFAULT_DPS`.
    """
    if _dps_override is not None:
        return _dps_override
    env = os.environ.get("GENTRIG_PRECISION")
    if env:
        return int(env)
    return DEFAULT_DPS


def set_working_dps(dps: int | None) -> None:
    global _dps_override
    if dps is not None and dps < 15:
        raise ValueError("working precision below 15 digits is not supported")
    _dps_override = dps


@contextmanager
def precision(dps: int | None = None):
    with mp.workdps(dps or working_dps()):
        yield


def arg(z) -> float:
    """Principal argument in (-pi, pi] as a float."""
    return cmath.phase(complex(z))


def gamma_ratio(p: complex) -> float:
    """``Gamma(Re p) / |Gamma(p)|``; exactly 1 for real ``p``."""
    p = complex(p)
    if p.imag == 0:
        return 1.0
    return float(np.exp(loggamma(p.real) - loggamma(p).real))


def chi(p: float) -> float:
    """``sqrt(pi) Gamma(p/2 + 1) / Gamma((p + 1)/2)`` for ``p > 0``."""
    if p <= 0:
        raise DomainError("chi(p) needs p > 0")
    return math.sqrt(math.pi) * math.exp(math.lgamma(p / 2 + 1) - math.lgamma((p + 1) / 2))


def chi_watson(p: float) -> tuple[float, float]:
    """Watson's two-sided bracket ``(lower, upper)`` for ``chi(p)``, ``p > 0``."""
    return (math.sqrt(math.pi / 2 * (p + 0.5)), math.sqrt(math.pi / 2 * (p + 2 / math.pi)))


def parse_complex(text: str) -> complex:
    """Parse ``RE``, ``RE,IM``, ``MOD:ARG`` (radians) or ``MOD:ARGdeg``."""
    text = text.strip()
    if ":" in text:
        mod_s, arg_s = text.split(":", 1)
        mod = float(mod_s)
        arg_s = arg_s.strip()
        if arg_s.endswith("deg"):
            ang = math.radians(float(arg_s[:-3]))
        elif arg_s.endswith("pi"):
            ang = math.pi * float(arg_s[:-2] or 1)
        else:
            ang = float(arg_s)
        return cmath.rect(mod, ang)
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(float(text), 0.0)
