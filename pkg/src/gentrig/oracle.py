"""High-precision reference values by direct quadrature.

Everything here is computed from the Stieltjes-type integrals

    f(a, z) = z^(a-1) / Gamma(1-a) * int_0^inf s^-a e^-s / (1 + (s/z)^2) ds
    g(a, z) = z^(a-2) / Gamma(1-a) * int_0^inf s^(1-a) e^-s / (1 + (s/z)^2) ds

with mpmath's tanh-sinh rule at the working precision, independently of the
asymptotic series.  For ``3 pi/8 < |arg z| <= 5 pi/8`` the integration ray
is turned towards ``z`` so the poles at ``s = +-iz`` stay a fixed angle
away; this is the analytic continuation in ``z``.

A double-precision path (:func:`f_g_fast`, :func:`ti_fast`) based on
``scipy.integrate.quad`` exists for dense sign-change scans where thousands
of evaluations are needed and 1e-12 relative accuracy is plenty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp
from scipy import integrate

from ._numerics import ConvergenceError, DomainError, working_dps

__all__ = [
    "OraclePoint",
    "f_g_quadrature",
    "f_quadrature",
    "g_quadrature",
    "m2",
    "incomplete_gamma_upper",
    "phase_modulus",
    "phase_complex",
    "phase",
    "invert_phase",
    "ti",
    "si",
    "ci",
    "f_g_fast",
    "ti_fast",
]

_GAP = 3 * math.pi / 8  # largest |arg z| handled on the real axis


@dataclass(frozen=True)
class OraclePoint:
    """Reference values of ``f, g, M^2`` and the phase at a point."""

    a: float
    z: object
    f: object
    g: object
    m2: object
    phi: object
    precision_target: float = 1e-13


def _mpc(z):
    z = mp.mpmathify(z)
    if isinstance(z, mp.mpc) and z.imag == 0:
        return mp.mpf(z.real)
    return z


def _is_real(x) -> bool:
    return not isinstance(x, mp.mpc) or x.imag == 0


def _check(value, err, what):
    # the tanh-sinh error estimate is conservative; only reject clear failures
    scale = max(abs(value), mp.mpf(1))
    if err > mp.mpf(10) ** (-(mp.dps // 2)) * scale:
        raise ConvergenceError(f"{what}: quadrature error estimate {mp.nstr(err, 3)} too large",
                               value=complex(value), error=float(err))


@lru_cache(maxsize=4096)
def _ray_integral(b, z, kind: str, beta, dps: int):
    """``int_0^inf s^b e^-s K(s) ds`` along ``arg s = beta``.

    ``K`` is ``1/(1 + (s/z)^2)`` for kind ``"sq"`` and ``1/(1 + s/z)`` for
    kind ``"lin"``.  For ``Re b < 0`` the radius is written ``r = u^q`` with
    ``q = 1/(1 + Re b)``, which removes the endpoint singularity.
    """
    with mp.workdps(dps):
        rot = mp.expj(beta) if beta else mp.mpf(1)
        if kind == "sq":
            kern = lambda s: 1 / (1 + (s / z) ** 2)
        else:
            kern = lambda s: 1 / (1 + s / z)
        R = abs(z)
        if mp.re(b) < 0:
            q = 1 / (1 + mp.re(b))
            bq = b * q + q - 1  # exponent of u after the substitution

            def h(u):
                if u == 0:
                    return mp.zero
                s = u ** q * rot
                return q * u ** bq * mp.exp(-s) * kern(s)

            pts = [0, (R / 2) ** (1 / q), R ** (1 / q), mp.inf]
        else:

            def h(r):
                if r == 0:
                    return mp.zero if mp.re(b) > 0 else kern(0)
                s = r * rot
                return r ** b * mp.exp(-s) * kern(s)

            pts = [0, R / 2, R, mp.inf]
        val, err = mp.quad(h, pts, error=True)
        _check(val, err, "oracle integral")
        if beta:
            val *= rot ** (b + 1)
        return val


def _ray_angle(theta: float) -> float:
    t = abs(theta)
    if t <= _GAP:
        return 0.0
    if t > 5 * math.pi / 8 + 1e-15:
        raise DomainError(f"oracle supports |arg z| <= 5 pi/8, got {theta:.6g}")
    return math.copysign(t - _GAP, theta)


def _sq_integral(b, z):
    dps = working_dps() + 5
    beta = _ray_angle(float(mp.arg(z)))
    return _ray_integral(b, z, "sq", mp.mpf(beta), dps)


def _prep(a, z):
    a, z = _mpc(a), _mpc(z)
    if z == 0:
        raise DomainError("z must be non-zero")
    return a, z


def f_quadrature(a, z):
    """``f(a, z)`` for ``Re a < 1`` (or ``a = 1`` exactly, where f = 1)."""
    with mp.workdps(working_dps()):
        a, z = _prep(a, z)
        if a == 1:
            return mp.mpf(1)
        if not mp.re(a) < 1:
            raise DomainError("the f integral needs Re(a) < 1")
        val = z ** (a - 1) * mp.rgamma(1 - a) * _sq_integral(-a, z)
        return +val


def g_quadrature(a, z):
    """``g(a, z)`` for ``Re a < 2``."""
    with mp.workdps(working_dps()):
        a, z = _prep(a, z)
        if a == 1:
            return mp.mpf(0)
        if not mp.re(a) < 2:
            raise DomainError("the g integral needs Re(a) < 2")
        val = z ** (a - 2) * mp.rgamma(1 - a) * _sq_integral(1 - a, z)
        return +val


def f_g_quadrature(a, z):
    """Return ``(f(a, z), g(a, z))`` as mpmath numbers."""
    return f_quadrature(a, z), g_quadrature(a, z)


def m2(a, z):
    """``M^2 = f^2 + g^2`` (the analytic continuation off the real axis)."""
    f, g = f_g_quadrature(a, z)
    with mp.workdps(working_dps()):
        return f * f + g * g


def incomplete_gamma_upper(a, w):
    """``Gamma(a, w)`` for real ``a < 1`` and ``|arg w| <= 7 pi/8``.

    Uses ``w^(a-1) e^-w / Gamma(1-a) * int_0^inf s^-a e^-s / (1 + s/w) ds``.
    Past ``|arg w| = pi/2`` the ray is turned by half the excess, which keeps
    the pole at ``s = -w`` at least ``5 pi/16`` off the path.
    """
    with mp.workdps(working_dps()):
        a, w = _prep(a, w)
        if not (_is_real(a) and a < 1):
            raise DomainError("incomplete_gamma_upper needs real a < 1")
        theta = float(mp.arg(w))
        if abs(theta) > 7 * math.pi / 8 + 1e-15:
            raise DomainError("pole too close to the path: |arg w| > 7 pi/8")
        beta = math.copysign(max(0.0, (abs(theta) - math.pi / 2) / 2), theta)
        I = _ray_integral(-a, w, "lin", mp.mpf(beta), working_dps() + 5)
        return +(w ** (a - 1) * mp.exp(-w) * mp.rgamma(1 - a) * I)


def _real_phase_args(a, z):
    with mp.workdps(working_dps()):
        a, z = _prep(a, z)
        if not _is_real(a) or not a < 1:
            raise DomainError("the phase needs real a < 1")
        return a, z


def phase_modulus(a, z) -> OraclePoint:
    """``M^2`` and ``phi`` on the positive axis.

    ``phi = z + atan2(f, g)``: from ``M e^{i phi} = e^{iz} (g + i f)`` and
    ``f, g > 0`` the two-argument arctangent stays on the continuous branch.
    """
    a, z = _real_phase_args(a, z)
    if not (_is_real(z) and z > 0):
        raise DomainError("phase_modulus needs z > 0")
    f, g = f_g_quadrature(a, z)
    with mp.workdps(working_dps()):
        return OraclePoint(float(a), z, f, g, f * f + g * g, z + mp.atan2(f, g))


def phase_complex(a, z):
    """Phase continued to ``Re z > 0``.

    Uses ``phi = z + pi/2 + Log(-(g + i f)/(g - i f)) / (2i)``.  The ratio
    tends to 1 as ``|z|`` grows, so the principal logarithm picks the branch
    that matches the real-axis phase.
    """
    a, z = _real_phase_args(a, z)
    if not mp.re(z) > 0:
        raise DomainError("phase_complex needs Re(z) > 0")
    f, g = f_g_quadrature(a, z)
    with mp.workdps(working_dps()):
        ratio = -(g + 1j * f) / (g - 1j * f)
        return z + mp.pi / 2 + mp.log(ratio) / 2j


def phase(a, z):
    """Phase on the real axis (atan2 form) or in the right half-plane."""
    with mp.workdps(working_dps()):
        z = _mpc(z)
    if _is_real(z) and z > 0:
        return phase_modulus(a, z).phi
    return phase_complex(a, z)


def _phase_and_slope(a, z):
    f, g = f_g_quadrature(a, z)
    with mp.workdps(working_dps()):
        mm = f * f + g * g
        if _is_real(z):
            phi = z + mp.atan2(f, g)
        else:
            phi = z + mp.pi / 2 + mp.log(-(g + 1j * f) / (g - 1j * f)) / 2j
        return phi, z ** (a - 1) * f / mm


def invert_phase(a, w, seed=None, max_iter: int = 60):
    """Solve ``phi(a, z) - pi/2 = w`` for ``z``.

    Real ``w`` must exceed ``pi(a + |a| - 2)/4``; a bracketed Newton iteration
    with ``dphi/dz = z^(a-1) f / M^2`` is used, falling back to bisection
    whenever a step leaves the bracket.  Complex ``w`` with ``Re w > 0`` is
    handled by plain Newton from ``seed`` (default: ``w`` plus the leading
    correction ``(1-a)/w``).
    """
    with mp.workdps(working_dps()):
        a, w = _mpc(a), _mpc(w)
        if not _is_real(a) or not a < 1:
            raise DomainError("invert_phase needs real a < 1")
        tol = mp.mpf(10) ** (-(working_dps() - 6))
        if _is_real(w):
            lower = mp.pi * (a + abs(a) - 2) / 4
            if not w > lower:
                raise DomainError(f"w must exceed pi(a+|a|-2)/4 = {mp.nstr(lower, 8)}")
            return _invert_real(a, w, seed, tol, max_iter)
        if not mp.re(w) > 0:
            raise DomainError("complex w needs Re(w) > 0")
        z = _mpc(seed) if seed is not None else w + (1 - a) / w
        for _ in range(max_iter):
            phi, slope = _phase_and_slope(a, z)
            step = (phi - mp.pi / 2 - w) / slope
            z = z - step
            if abs(step) <= tol * abs(z):
                return z
        raise ConvergenceError("complex phase inversion did not converge", a=float(a), w=complex(w))


def _invert_real(a, w, seed, tol, max_iter):
    target = w + mp.pi / 2
    z = mp.mpf(seed) if seed is not None else w + (1 - a) / max(abs(w), mp.mpf(1))
    if not z > 0:
        z = mp.mpf(1)
    lo, hi = mp.zero, mp.inf
    for _ in range(max_iter):
        phi, slope = _phase_and_slope(a, z)
        r = phi - target
        if r == 0:
            return z
        if r > 0:
            hi = z
        else:
            lo = z
        new = z - r / slope
        if not lo < new < hi:
            if hi == mp.inf:
                new = 2 * z
            elif lo == 0:
                new = z / 2
            else:
                new = (lo + hi) / 2
        if abs(new - z) <= tol * z:
            return new
        z = new
    raise ConvergenceError("phase inversion did not converge", a=float(a), w=float(w))


def ti(a, z, alpha=0):
    """``ti(a, z, alpha) = -f sin(z - pi alpha) + g cos(z - pi alpha)``.

    This is ``int_z^inf t^(a-1) cos(t - pi alpha) dt`` when that converges.
    """
    with mp.workdps(working_dps()):
        a, z = _prep(a, z)
        shift = z - mp.pi * mp.mpf(alpha)
        if a == 1:
            return -mp.sin(shift)
    f, g = f_g_quadrature(a, z)
    with mp.workdps(working_dps()):
        return -f * mp.sin(shift) + g * mp.cos(shift)


def si(a, z):
    return ti(a, z, mp.mpf(1) / 2)


def ci(a, z):
    return ti(a, z, 0)


# ---------------------------------------------------------------------------
# double precision path for scans


def _fast_integral(b: float, z: float) -> float:
    kern = lambda s: 1.0 / (1.0 + (s / z) ** 2)
    body = lambda s: s ** b * math.exp(-s) * kern(s)
    # for small z the kernel lives on s <~ z, so split there
    cut = min(z, 1.0)
    if b < 0:
        total, _ = integrate.quad(lambda s: math.exp(-s) * kern(s), 0.0, cut,
                                  weight="alg", wvar=(b, 0.0), epsabs=0, epsrel=1e-11)
    else:
        total, _ = integrate.quad(body, 0.0, cut, epsabs=0, epsrel=1e-11)
    if z < 1.0:
        # the kernel decays over several decades above s = z: use log s
        part, _ = integrate.quad(lambda t: body(math.exp(t)) * math.exp(t), math.log(z), 0.0,
                                 epsabs=0, epsrel=1e-11, limit=200)
        total += part
    else:
        part, _ = integrate.quad(body, 1.0, z, epsabs=0, epsrel=1e-11, limit=200)
        total += part
    part, _ = integrate.quad(body, max(z, 1.0), math.inf, epsabs=0, epsrel=1e-11, limit=200)
    return total + part


def f_g_fast(a: float, z: float) -> tuple[float, float]:
    """Double-precision ``(f, g)`` for real ``a < 1`` and ``z > 0``."""
    if a == 1:
        return 1.0, 0.0
    if not a < 1 or not z > 0:
        raise DomainError("f_g_fast needs a < 1 and z > 0")
    rg = 1.0 / math.gamma(1 - a)
    f = z ** (a - 1) * rg * _fast_integral(-a, z)
    g = z ** (a - 2) * rg * _fast_integral(1 - a, z)
    return f, g


def ti_fast(a: float, z: float, alpha: float = 0.0) -> float:
    f, g = f_g_fast(a, z)
    shift = z - math.pi * alpha
    return -f * math.sin(shift) + g * math.cos(shift)
