"""Legendre dual of the cumulant of ``log X`` and the height functional Psi.

The dual ``sup_lam {lam*z - Lambda(lam)}`` maximizes a concave function of one
variable, so it is found by bracketing (geometric expansion away from 0) and
golden-section search.  Which half-line is searched depends on which side of
the mean ``-mu`` the point ``z`` lies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .distributions import INF, AttachmentLaw, MomentSummary, as_law

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NoRootInBracket(ArithmeticError):
    pass


@dataclass(frozen=True)
class DualResult:
    """Value of the dual at one point, with search bookkeeping.

    ``status`` is ``"ok"``, ``"edge"`` (maximum at the end of the cumulant's
    domain), ``"unbounded"`` (value reported as ``inf``) or ``"cap"`` (the
    objective was still creeping up at ``lambda_cap``; ``value`` is a lower
    estimate).
    """

    value: float
    argmax: float
    evaluations: int
    status: str = "ok"


@dataclass
class RateEvaluator:
    """Evaluates ``Lambda``, ``Lambda*`` and ``Psi`` for one attachment law."""

    law: AttachmentLaw
    sup_tolerance: float = 1e-10
    lambda_cap: float = 1e8
    moments: MomentSummary = field(init=False)

    def __post_init__(self):
        self.law = as_law(self.law)
        self.moments = self.law.moments()

    @property
    def lambda_domain(self) -> tuple[float, bool]:
        return self.law.lambda_domain

    def cumulant(self, lam: float) -> float:
        return self.law.cumulant(lam)

    def dual(self, z: float) -> DualResult:
        return _maximize(self, float(z))

    def legendre_dual(self, z: float) -> float:
        return self.dual(z).value

    def psi(self, c: float) -> float:
        return psi(self, c)


def _maximize(ev: RateEvaluator, z: float) -> DualResult:
    law = ev.law
    tol = ev.sup_tolerance
    evals = 0

    def g(lam):
        nonlocal evals
        evals += 1
        L = law.cumulant(lam)
        if L == INF:
            return -INF
        return lam * z - L

    mu = ev.moments.mu
    side = -1.0 if (math.isfinite(mu) and z < -mu) else 1.0
    edge, closed = law.lambda_domain
    if side < 0 and edge >= 0.0:
        return DualResult(g(0.0), 0.0, evals, "edge")

    g0 = g(0.0)
    if g0 == INF:
        return DualResult(INF, 0.0, evals, "unbounded")
    prev2, prev, gprev = 0.0, 0.0, g0
    x = side
    gains = []
    while True:
        at_edge = side < 0 and x <= edge
        if at_edge:
            # an open end of the domain is a pole of the cumulant for every
            # law here, so the objective tends to -inf there
            x = edge
            gx = g(x) if closed else -INF
        else:
            gx = g(x)
        if gx == INF:
            return DualResult(INF, x, evals, "unbounded")
        if not gx > gprev:
            break
        gains.append(gx - gprev)
        if at_edge:
            return DualResult(gx, x, evals, "edge")
        if abs(x) >= ev.lambda_cap:
            if len(gains) >= 3 and all(d > tol for d in gains[-3:]):
                return DualResult(INF, x, evals, "unbounded")
            return DualResult(gx, x, evals, "cap")
        prev2, prev, gprev = prev, x, gx
        x *= 2.0

    a, b = (prev2, x) if prev2 < x else (x, prev2)
    best_x, best = prev, gprev
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(400):
        if b - a <= max(tol, 4e-16 * max(abs(a), abs(b))):
            break
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
    for xx, gg in ((c, gc), (d, gd), (0.0, g0)):
        if gg > best:
            best_x, best = xx, gg
    return DualResult(best, best_x, evals, "ok")


def legendre_dual(ev: RateEvaluator, z: float) -> float:
    """``Lambda*(z)`` for ``z < 0``; ``inf`` where the supremum is unbounded."""
    return ev.legendre_dual(z)


def psi(ev: RateEvaluator, c: float) -> float:
    """``Psi(c) = c * Lambda*(-1/c)`` for ``c > 0``."""
    if not c > 0.0:
        raise ValueError(f"psi needs c > 0, got {c!r}")
    v = ev.legendre_dual(-1.0 / c)
    return INF if v == INF else c * v


def rate_gap(ev: RateEvaluator, truncated: RateEvaluator, z: float) -> float:
    """``Lambda*_trunc(z) - Lambda*(z)`` for a law and its density-capped version.

    Nonnegative (up to ``sup_tolerance``) for ``z >= -mu`` of the original law.
    """
    a = truncated.legendre_dual(z)
    b = ev.legendre_dual(z)
    if a == INF:
        return INF
    return a - b


def rate_gap_bound(atom_mass: float, dual_value: float) -> float:
    """Upper bound ``-log(1 - sqrt(p * exp(Lambda*(z))))`` on the truncation gap
    (``inf`` when the square root reaches 1)."""
    r = math.sqrt(atom_mass * math.exp(dual_value))
    return INF if r >= 1.0 else -math.log1p(-r)


# ---------------------------------------------------------------------------
# closed forms for max/min of k uniforms, used as oracles


def lambda_star_k_root(k: int, z: float, lambda_cap: float = 1e8, tol: float = 1e-12) -> float:
    """Stationary point of ``lam*z - Lambda_min_k(lam)`` for ``lam > -1``.

    Solves ``z + sum_{i<=k} 1/(i + lam) = 0`` by bisection; the left side is
    strictly decreasing in ``lam``.
    """
    if not z < 0.0:
        raise ValueError(f"z must be negative, got {z!r}")

    def f(lam):
        return z + sum(1.0 / (i + lam) for i in range(1, k + 1))

    lo, hi = -1.0, float(lambda_cap)
    if f(hi) > 0.0:
        raise NoRootInBracket(f"no root of the k={k} equation in (-1, {hi:g}) for z={z!r}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= tol:
            break
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def max_order_dual(k: int, z: float) -> float:
    return -1.0 - k * z - math.log(-k * z)


def max_order_psi(k: int, c: float) -> float:
    return -c + k - c * math.log(k / c)


def min_order_dual(k: int, z: float) -> float:
    lam = lambda_star_k_root(k, z)
    return lam * z + sum(math.log1p(lam / i) for i in range(1, k + 1))


def min_order_psi(k: int, c: float) -> float:
    return c * min_order_dual(k, -1.0 / c)
