"""Verification suites run by ``gentrig verify``.

Each suite walks a deterministic grid, compares the certified expansions
and bounds against the quadrature oracle and returns a :class:`VerifyReport`.
Grids come from :class:`GridConfig`, which parses ``key=value`` text such as

    a = -2.5, 0, 0.5
    z = 5, 10, 20
    arg = pi/8, pi/4
    N = 1..6
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from . import oracle
from ._numerics import working_dps
from .coeffs import RationalPolynomial, c_poly, t_poly
from .expansions import f_expand, g_expand, m2_expand, phi_expand, x_expand
from .terminant import b3_bracket, b3_objective, b3_residual, best_bound, bound_b3, terminant_eval
from .zeros import count_sign_changes, literature_bracket, zero, zeros_below

__all__ = ["VerifyReport", "GridConfig", "ConfigError", "run_verify", "SUITES",
           "TABLE_T", "TABLE_C", "reversion_coefficient"]

# Coefficients of t_n and c_n, lowest power first (constant term 0 omitted).
TABLE_T = {
    0: ["1"],
    1: ["6", "6", "1"],
    2: ["120", "210", "110", "20", "1"],
    3: ["5040", "11256", "8946", "3248", "560", "42", "1"],
    4: ["362880", "930960", "920184", "463050", "129834", "20580", "1764", "72", "1"],
    5: ["39916800", "112289760", "127178832", "77504328", "28332282", "6494092",
        "939774", "83688", "4290", "110", "1"],
}
TABLE_C = {
    0: ["1"],
    1: ["6", "9", "1"],
    2: ["120", "250", "160", "80/3", "1"],
    3: ["5040", "12348", "11088", "4529", "791", "791/15", "1"],
    4: ["362880", "986256", "1052520", "578466", "176016", "144924/5", "11996/5",
        "3048/35", "1"],
    5: ["39916800", "116915040", "139585512", "271612924/3", "35393952", "8635462",
        "3907442/3", "2439712/21", "356092/63", "40843/315", "1"],
}


class ConfigError(ValueError):
    """The grid configuration could not be parsed."""


@dataclass
class VerifyReport:
    suite: str
    cases_run: int = 0
    cases_failed: int = 0
    worst_margin: float | None = None
    elapsed: float = 0.0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, margin: float | None = None, note: str = ""):
        self.cases_run += 1
        if not ok:
            self.cases_failed += 1
            if len(self.failures) < 20:
                self.failures.append(note)
        if margin is not None:
            m = float(margin)
            self.worst_margin = m if self.worst_margin is None else min(self.worst_margin, m)

    @property
    def passed(self) -> bool:
        return self.cases_failed == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases_run": self.cases_run,
            "cases_failed": self.cases_failed,
            "worst_margin": self.worst_margin,
            "elapsed": round(self.elapsed, 3),
            "failures": list(self.failures),
        }


_PI_RE = re.compile(r"^([+-]?[\d.]*)\s*\*?\s*pi\s*(?:/\s*([\d.]+))?$")


def parse_number(text: str) -> float:
    """Float, or a multiple of pi such as ``3pi/8`` or ``-pi/4``."""
    text = text.strip()
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        c = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        d = float(m.group(2)) if m.group(2) else 1.0
        return c * math.pi / d
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def _parse_list(text: str, integer: bool = False) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ".." in item:
            lo, hi = item.split("..", 1)
            try:
                out.extend(range(int(lo), int(hi) + 1))
            except ValueError as exc:
                raise ConfigError(f"bad integer range {item!r}") from exc
        elif integer:
            try:
                out.append(int(item))
            except ValueError as exc:
                raise ConfigError(f"bad integer {item!r}") from exc
        else:
            out.append(parse_number(item))
    return out


@dataclass
class GridConfig:
    a: list = field(default_factory=lambda: [-1.0, 0.0, 0.5])
    z: list = field(default_factory=lambda: [10.0, 20.0])
    arg: list = field(default_factory=lambda: [math.pi / 8, math.pi / 4])
    N: list = field(default_factory=lambda: [1, 2, 3, 4])
    k: list = field(default_factory=lambda: list(range(3, 7)))
    alpha: list = field(default_factory=lambda: [0.0, 0.5])
    p: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    zmax: float = 20.0

    _INT_KEYS = ("N", "k")

    @classmethod
    def from_text(cls, text: str) -> "GridConfig":
        cfg = cls()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"expected key=value, got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg.set(key, value)
        return cfg

    def set(self, key: str, value: str) -> None:
        if key == "zmax":
            self.zmax = parse_number(value)
        elif key in ("a", "z", "arg", "alpha", "p"):
            setattr(self, key, _parse_list(value))
        elif key in self._INT_KEYS:
            setattr(self, key, _parse_list(value, integer=True))
        else:
            raise ConfigError(f"unknown config key {key!r}")


# ---------------------------------------------------------------------------
# suites


def reversion_coefficient(n: int) -> RationalPolynomial:
    """``c_n`` by raising the truncated ``z^-1 Phi`` series to the power ``2n+1``.

    In ``u = z^-2`` the series is ``1 + sum_m (-1)^m t_{m-1} u^m / (2m-1)``;
    ``c_n`` is ``(-1)^(n+1)`` times the ``u^(n+1)`` coefficient of the power.
    Plain repeated multiplication, independent of the d_{n,k} recurrence.
    """
    L = n + 2
    zero_poly = RationalPolynomial.constant(0)
    base = [RationalPolynomial.constant(1)]
    base += [t_poly(m - 1) * Fraction((-1) ** m, 2 * m - 1) for m in range(1, L)]
    power = [RationalPolynomial.constant(1)] + [zero_poly] * (L - 1)
    for _ in range(2 * n + 1):
        nxt = [zero_poly] * L
        for i, p in enumerate(power):
            for j in range(L - i):
                nxt[i + j] = nxt[i + j] + p * base[j]
        power = nxt
    return power[n + 1] * (-1) ** (n + 1)


def _suite_tables(cfg: GridConfig, rep: VerifyReport):
    for table, poly in ((TABLE_T, t_poly), (TABLE_C, c_poly)):
        for n, coeffs in table.items():
            expected = [Fraction(0)] + [Fraction(c) for c in coeffs]
            got = list(poly(n).coefficients)
            rep.record(got == expected, note=f"{poly.__name__}({n}) differs from the table")
    for n in range(11):
        ok = reversion_coefficient(n).coefficients == c_poly(n).coefficients
        rep.record(ok, note=f"c_poly({n}) differs from the brute-force reversion")


def _points(cfg: GridConfig):
    for r in cfg.z:
        yield mp.mpf(r)
        for th in cfg.arg:
            yield mp.mpc(mp.cos(th), mp.sin(th)) * r


def _oracle_x(a, w):
    seed = x_expand(a, w).value
    return oracle.invert_phase(a, w, seed=seed)


def _series_checks(a, z, N):
    """(name, CertifiedValue, oracle value) for every series at one point."""
    f, g = oracle.f_g_quadrature(a, z)
    out = [("f", f_expand(a, z, N), f), ("g", g_expand(a, z, N), g),
           ("m2", m2_expand(a, z, N), f * f + g * g)]
    if a < 1:
        out.append(("phi", phi_expand(a, z, N), oracle.phase(a, z)))
    return out


def _suite_bounds(cfg: GridConfig, rep: VerifyReport):
    with mp.workdps(working_dps()):
        for a in cfg.a:
            for z in _points(cfg):
                for N in cfg.N:
                    checks = _series_checks(a, z, N)
                    if a < 1:
                        checks.append(("x", x_expand(a, z, N), _oracle_x(a, z)))
                    for name, cv, ref in checks:
                        if cv.error_bound is None:
                            continue
                        err = abs(cv.value - ref)
                        ok = err <= cv.error_bound
                        margin = 1.0 if cv.error_bound == 0 else 1 - float(err) / cv.error_bound
                        rep.record(ok, margin, f"{name} a={a} z={mp.nstr(z, 8)} N={N}")


def _suite_envelope(cfg: GridConfig, rep: VerifyReport):
    with mp.workdps(working_dps()):
        for a in cfg.a:
            for r in cfg.z:
                z = mp.mpf(r)
                for N in cfg.N:
                    checks = _series_checks(a, z, N)
                    if a < 1:
                        checks.append(("x", x_expand(a, z, N), _oracle_x(a, z)))
                    for name, cv, ref in checks:
                        if cv.sign_certificate is None:
                            continue
                        rem = ref - cv.value
                        first = cv.first_neglected
                        ok = (rem > 0) == (first > 0) and abs(rem) < abs(first)
                        rep.record(ok, 1 - float(abs(rem) / abs(first)),
                                   f"{name} a={a} z={r} N={N}")


def _suite_zeros(cfg: GridConfig, rep: VerifyReport):
    with mp.workdps(working_dps()):
        for a in cfg.a:
            if not a < 1:
                continue
            for alpha in cfg.alpha:
                for k in cfg.k:
                    r = zero(a, alpha, k)
                    note = f"a={a} alpha={alpha} k={k}"
                    if r.seed_bound is not None:
                        dist = abs(r.refined - r.seed)
                        margin = 1.0 if r.seed_bound == 0 else 1 - float(dist) / r.seed_bound
                        rep.record(bool(r.certified), margin, "seed radius " + note)
                    phi = oracle.phase_modulus(a, r.refined).phi
                    rep.record(abs(phi - mp.pi * (k + mp.mpf(alpha) + 0.5)) < 1e-10,
                               note="phase " + note)
                    if alpha in (0.0, 0.5) and k + alpha > 0:
                        lo, hi = literature_bracket(a, alpha, k)
                        rep.record(lo < r.refined < hi, note="bracket " + note)
                n_zeros = len(zeros_below(a, alpha, cfg.zmax))
                n_scan = count_sign_changes(a, alpha, cfg.zmax)
                rep.record(n_zeros == n_scan, note=f"count a={a} alpha={alpha}: {n_zeros} vs {n_scan}")


def _suite_identities(cfg: GridConfig, rep: VerifyReport):
    h = mp.mpf("1e-5")
    with mp.workdps(working_dps()):
        for a in cfg.a:
            if not a < 1:
                continue
            for r in cfg.z:
                z = mp.mpf(r)
                f, g = oracle.f_g_quadrature(a, z)
                m2 = oracle.m2(a, z)
                rep.record(abs(m2 - (f * f + g * g)) <= 1e-12 * abs(m2), note=f"M2 a={a} z={r}")
                fp, gp = oracle.f_g_quadrature(a, z + h)
                fm, gm = oracle.f_g_quadrature(a, z - h)
                lead = z ** (a - 1)
                pairs = [
                    ((fp - fm) / (2 * h), -g, "f'"),
                    ((gp - gm) / (2 * h), f - lead, "g'"),
                    (((fp ** 2 + gp ** 2) - (fm ** 2 + gm ** 2)) / (2 * h), -2 * lead * g, "M2'"),
                    ((oracle.phase(a, z + h) - oracle.phase(a, z - h)) / (2 * h),
                     lead * f / (f * f + g * g), "phi'"),
                ]
                for fd, exact, name in pairs:
                    rep.record(abs(fd - exact) <= 1e-6 * abs(exact), note=f"{name} a={a} z={r}")
                w = oracle.phase(a, z) - mp.pi / 2
                back = oracle.invert_phase(a, w, seed=z * (1 + mp.mpf("1e-3")))
                rep.record(abs(back - z) < 1e-10, note=f"round trip a={a} z={r}")


def _suite_terminant(cfg: GridConfig, rep: VerifyReport):
    args = sorted(set([0.0] + [s * t for t in cfg.arg for s in (1, -1)]
                      + [s * x * math.pi for x in (0.5, 0.625, 0.75) for s in (1, -1)]))
    for p in cfg.p:
        for r in cfg.z:
            v = terminant_eval(p, r)
            rep.record(0 < v.real < 1 and v.imag == 0, note=f"0<Pi<1 p={p} z={r}")
            for th in args:
                z = complex(r * math.cos(th), r * math.sin(th))
                v = abs(terminant_eval(p, z))
                b = best_bound(p, z).bound
                rep.record(v <= b * (1 + 1e-10), 1 - v / b, f"|Pi| p={p} z={r} arg={th:.4f}")
        for th in [x for x in args if math.pi / 4 < abs(x) < math.pi]:
            tb = bound_b3(p, complex(math.cos(th), math.sin(th)))
            lo, hi = b3_bracket(th)
            res = abs(b3_residual(p, th, tb.theta))
            samples = [lo + (hi - lo) * (j + 0.5) / 64 for j in range(64)]
            minimal = all(tb.bound <= b3_objective(p, th, s) * (1 + 1e-12) for s in samples)
            rep.record(res < 1e-12 and minimal, note=f"B3 p={p} arg={th:.4f}")


SUITES = {
    "tables": _suite_tables,
    "envelope": _suite_envelope,
    "bounds": _suite_bounds,
    "zeros": _suite_zeros,
    "identities": _suite_identities,
    "terminant": _suite_terminant,
}


def run_verify(suite: str, config: GridConfig | None = None) -> VerifyReport:
    """Run one suite; deterministic for a given configuration."""
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    cfg = config or GridConfig()
    rep = VerifyReport(suite)
    start = time.perf_counter()
    SUITES[suite](cfg, rep)
    rep.elapsed = time.perf_counter() - start
    return rep
