"""Depth, height and minimum-depth constants of a scaled attachment tree.

``alpha_max`` and ``alpha_min`` are the two solutions of ``Psi(c) = 1`` on
either side of ``1/mu``; they are located by bracketing and bisection, using
that ``Psi`` decreases below ``1/mu`` and increases above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distributions import INF, MaxOrder, MinOrder, MomentSummary, as_law
from .rate_function import RateEvaluator, psi

C_TOL = 1e-9
MAX_BISECTIONS = 200
PROBE_FLOOR = 1e-8
PROBE_COUNT = 64
C_CEILING = 1e6


class BracketFailure(ArithmeticError):
    pass


@dataclass
class DepthConstants:
    one_over_mu: float
    alpha_max: float
    alpha_min: float
    clt_scale: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)


def depth_coefficients(ms: MomentSummary) -> tuple[float, Optional[float]]:
    """``(1/mu, sigma / sqrt(mu**3))``; the second only when ``0 < sigma2 < inf``."""
    if not math.isfinite(ms.mu):
        return 0.0, None
    one_over_mu = 1.0 / ms.mu
    if 0.0 < ms.sigma2 < INF:
        return one_over_mu, math.sqrt(ms.sigma2) / math.sqrt(ms.mu**3)
    return one_over_mu, None


def _bisect(f, lo, hi, diag, tol=C_TOL):
    """Root of ``f`` with ``f(lo) <= 0 < f(hi)`` or ``f(lo) > 0 >= f(hi)``."""
    flo_pos = f(lo) > 0.0
    it = 0
    while hi - lo > tol and it < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == flo_pos:
            lo = mid
        else:
            hi = mid
        it += 1
    diag["iterations"] = it
    return 0.5 * (lo + hi)


def _point_mass_value(ev: RateEvaluator) -> Optional[float]:
    if ev.law.is_point_mass and math.isfinite(ev.moments.mu):
        return 1.0 / ev.moments.mu
    return None


def solve_alpha_max(ev: RateEvaluator, diagnostics: Optional[dict] = None) -> float:
    """``inf{c > 1/mu : Psi(c) > 1}``."""
    diag = {} if diagnostics is None else diagnostics
    pm = _point_mass_value(ev)
    if pm is not None:
        diag["point_mass"] = True
        return pm
    one_over_mu = depth_coefficients(ev.moments)[0]

    def f(c):
        return psi(ev, c) - 1.0

    lo = max(one_over_mu, 1e-3)
    c = 2.0 * lo
    doublings = 0
    while not f(c) > 0.0:
        lo = c
        c *= 2.0
        doublings += 1
        if c > C_CEILING:
            raise BracketFailure(f"Psi stays <= 1 up to c = {C_CEILING:g} for {ev.law!r}")
    diag["bracket"] = (lo, c)
    diag["doublings"] = doublings
    return _bisect(f, lo, c, diag)


def solve_alpha_min(ev: RateEvaluator, diagnostics: Optional[dict] = None) -> float:
    """``sup{0 <= c < 1/mu : Psi(c) > 1}``, or 0 when that set is empty.

    Values below ``PROBE_FLOOR`` are reported as 0.
    """
    diag = {} if diagnostics is None else diagnostics
    pm = _point_mass_value(ev)
    if pm is not None:
        diag["point_mass"] = True
        return pm
    mu = ev.moments.mu
    if not math.isfinite(mu):
        diag["reason"] = "mu infinite"
        return 0.0
    if ev.law.lambda_domain[0] >= 0.0:
        diag["reason"] = "cumulant infinite for all negative lambda"
        return 0.0
    one_over_mu = 1.0 / mu
    probes = np.geomspace(PROBE_FLOOR, one_over_mu, PROBE_COUNT + 1)[:-1]
    # Psi decreases on (0, 1/mu): scan down from 1/mu, stop at the first hit
    upper = one_over_mu
    evaluated = []
    for c in probes[::-1]:
        c = float(c)
        val = psi(ev, c)
        evaluated.append((c, val))
        if val > 1.0:
            diag["probes"] = evaluated
            diag["bracket"] = (c, upper)
            return _bisect(lambda x: psi(ev, x) - 1.0, c, upper, diag)
        upper = c
    diag["probes"] = evaluated
    diag["reason"] = "Psi <= 1 on every probe"
    return 0.0


def solve_constants(law) -> DepthConstants:
    ev = law if isinstance(law, RateEvaluator) else RateEvaluator(as_law(law))
    one_over_mu, clt = depth_coefficients(ev.moments)
    dmax, dmin = {}, {}
    amax = solve_alpha_max(ev, dmax)
    amin = solve_alpha_min(ev, dmin)
    return DepthConstants(one_over_mu, amax, amin, clt, {"alpha_max": dmax, "alpha_min": dmin})


TABLE1_COLUMNS = ("k", "rho_plus_min", "rho_plus", "rho_plus_max",
                  "rho_minus_min", "rho_minus", "rho_minus_max")


def table1(kmax: int = 5) -> list[tuple]:
    """Rows ``(k, rho+_min, rho+, rho+_max, rho-_min, rho-, rho-_max)`` for k = 1..kmax,
    from the max (``+``) and min (``-``) of k uniforms."""
    rows = []
    for k in range(1, kmax + 1):
        hi = RateEvaluator(MaxOrder(k))
        lo = RateEvaluator(MinOrder(k))
        rows.append((
            k,
            solve_alpha_min(hi), depth_coefficients(hi.moments)[0], solve_alpha_max(hi),
            solve_alpha_min(lo), depth_coefficients(lo.moments)[0], solve_alpha_max(lo),
        ))
    return rows


def format_table1(rows) -> str:
    lines = ["k  rho+_min  rho+  rho+_max  rho-_min  rho-  rho-_max"]
    for k, *vals in rows:
        lines.append(f"{k}  " + "  ".join(_fmt4(v) for v in vals))
    return "\n".join(lines)


def _fmt4(v: float) -> str:
    if v == 0.0:
        return "0"
    if abs(v - round(v)) < 5e-10:
        return str(int(round(v)))
    return f"{v:.4f}"
