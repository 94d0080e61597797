"""Attachment laws on [0, 1): samplers, log-moments and cumulants.

Every law maps a block of ``width`` uniforms to one draw of ``X``.  Draws for
node ``i`` read stream addresses ``i * width + j`` for ``j < width`` so that a
full tree build, a lazily traced path and a k-DAG built from the same stream
all see the same randomness.

Extended reals are plain floats: ``math.inf`` is a valid return value of
:func:`cumulant` and of the moment summaries.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import integrate

from .streams import RandomStream

ONE_MINUS = float(np.nextafter(1.0, 0.0))
INF = math.inf


class InvalidLaw(ValueError):
    pass


class InvalidTruncation(ValueError):
    pass


class QuadratureNonConvergence(ArithmeticError):
    pass


class LawSpecError(ValueError):
    pass


@dataclass(frozen=True)
class MomentSummary:
    """``mu = E[-log X]`` and ``sigma2 = Var(-log X)``, each possibly ``inf``."""

    mu: float
    sigma2: float
    h: Optional[float] = None
    h2: Optional[float] = None

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def _power_integral(q: float, x0: float, x1: float) -> float:
    """Integral of ``x**q`` over ``[x0, x1]`` with ``0 <= x0 <= x1``."""
    if x1 <= x0:
        return 0.0
    e = q + 1.0
    if x0 == 0.0:
        if e <= 0.0:
            return INF
        return math.exp(e * math.log(x1)) / e
    l0, l1 = math.log(x0), math.log(x1)
    if abs(e) < 1e-300:
        return l1 - l0
    if abs(e * l0) < 1e-3:
        return (math.expm1(e * l1) - math.expm1(e * l0)) / e
    try:
        return (math.exp(e * l1) - math.exp(e * l0)) / e
    except OverflowError:
        return INF


def _log_or_inf(v: float) -> float:
    if v == INF:
        return INF
    if v <= 0.0:
        return -INF
    return math.log(v)


class AttachmentLaw:
    """Base class.  Subclasses are immutable value objects."""

    kind: str = ""
    width: int = 1
    is_point_mass = False
    has_density = True

    # --- sampling -------------------------------------------------------
    def transform(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms of shape ``(m, width)`` to ``m`` draws of X."""
        raise NotImplementedError

    def sample_labels(self, stream: RandomStream, labels) -> np.ndarray:
        """Draws ``X_i`` for the given node labels under label addressing."""
        labels = np.asarray(labels, dtype=np.int64)
        w = self.width
        idx = (labels[:, None] * w + np.arange(w)[None, :]).ravel()
        u = stream.uniforms_at(idx).reshape(labels.shape[0], w)
        return self.transform(u)

    # --- analytic summaries --------------------------------------------
    def moments(self) -> MomentSummary:
        raise NotImplementedError

    def cumulant(self, lam: float) -> float:
        raise NotImplementedError

    @property
    def lambda_domain(self) -> tuple[float, bool]:
        """Left end of the interval where the cumulant is finite, and
        whether that end point itself belongs to it."""
        raise NotImplementedError

    def density(self, x: np.ndarray) -> np.ndarray:
        raise InvalidTruncation(f"{self.kind} law has no density")

    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.kind} {self.spec()}>"

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return self.spec()


class _Analytic(AttachmentLaw):
    """Laws with a monotone density and closed-form CDF/quantile."""

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def partial_moment(self, lam: float, lo: float, hi: float) -> float:
        """``E[X**lam; lo <= X <= hi]``."""
        raise NotImplementedError

    def kept_interval(self, b: float) -> tuple[float, float]:
        """Interval of x where the density is at most ``b``."""
        raise NotImplementedError

    def transform(self, u):
        return np.minimum(self.quantile(u[:, 0]), ONE_MINUS)

    def cumulant(self, lam):
        if lam <= self.lambda_domain[0]:
            return INF
        return _log_or_inf(self.partial_moment(lam, 0.0, 1.0))


class Uniform(_Analytic):
    kind = "Uniform"

    def transform(self, u):
        return np.minimum(u[:, 0], ONE_MINUS)

    def cdf(self, x):
        return np.asarray(x, dtype=float)

    def quantile(self, u):
        return np.asarray(u, dtype=float)

    def density(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    def moments(self):
        return MomentSummary(1.0, 1.0)

    def cumulant(self, lam):
        return -math.log1p(lam) if lam > -1.0 else INF

    @property
    def lambda_domain(self):
        return (-1.0, False)

    def partial_moment(self, lam, lo, hi):
        return _power_integral(lam, lo, hi)

    def kept_interval(self, b):
        return (0.0, 1.0) if b >= 1.0 else (1.0, 1.0)

    def spec(self):
        return "uniform"


class MaxOrder(_Analytic):
    """``max(U_1, ..., U_k)``; consumes k uniforms."""

    kind = "MaxOrder"

    def __init__(self, k: int):
        if int(k) != k or k < 1:
            raise InvalidLaw(f"MaxOrder needs a positive integer k, got {k!r}")
        self.k = int(k)
        self.width = self.k

    def transform(self, u):
        return np.minimum(functools.reduce(np.maximum, u.T), ONE_MINUS)

    def cdf(self, x):
        return np.asarray(x, dtype=float) ** self.k

    def quantile(self, u):
        return np.asarray(u, dtype=float) ** (1.0 / self.k)

    def density(self, x):
        return self.k * np.asarray(x, dtype=float) ** (self.k - 1)

    def moments(self):
        return MomentSummary(1.0 / self.k, 1.0 / self.k**2)

    def cumulant(self, lam):
        return -math.log1p(lam / self.k) if lam > -self.k else INF

    @property
    def lambda_domain(self):
        return (-float(self.k), False)

    def partial_moment(self, lam, lo, hi):
        return self.k * _power_integral(lam + self.k - 1, lo, hi)

    def kept_interval(self, b):
        if self.k == 1:
            return Uniform().kept_interval(b)
        return (0.0, min(1.0, (b / self.k) ** (1.0 / (self.k - 1))))

    def spec(self):
        return f"max:{self.k}"


class MinOrder(_Analytic):
    """``min(U_1, ..., U_k)``; consumes k uniforms."""

    kind = "MinOrder"

    def __init__(self, k: int):
        if int(k) != k or k < 1:
            raise InvalidLaw(f"MinOrder needs a positive integer k, got {k!r}")
        self.k = int(k)
        self.width = self.k

    def transform(self, u):
        return np.minimum(functools.reduce(np.minimum, u.T), ONE_MINUS)

    def cdf(self, x):
        return 1.0 - (1.0 - np.asarray(x, dtype=float)) ** self.k

    def quantile(self, u):
        return 1.0 - (1.0 - np.asarray(u, dtype=float)) ** (1.0 / self.k)

    def density(self, x):
        return self.k * (1.0 - np.asarray(x, dtype=float)) ** (self.k - 1)

    def moments(self):
        i = np.arange(1, self.k + 1, dtype=float)
        h = float(np.sum(1.0 / i))
        h2 = float(np.sum(1.0 / i**2))
        return MomentSummary(h, h2, h=h, h2=h2)

    def cumulant(self, lam):
        if lam <= -1.0:
            return INF
        return -sum(math.log1p(lam / i) for i in range(1, self.k + 1))

    @property
    def lambda_domain(self):
        return (-1.0, False)

    def partial_moment(self, lam, lo, hi):
        if lo <= 0.0 and hi >= 1.0:
            return math.exp(self.cumulant(lam)) if lam > -1.0 else INF
        # k * x^lam * (1 - x)^(k - 1), expanded binomially
        total = 0.0
        for j in range(self.k):
            total += math.comb(self.k - 1, j) * (-1) ** j * _power_integral(lam + j, lo, hi)
        return self.k * total

    def kept_interval(self, b):
        if self.k == 1:
            return Uniform().kept_interval(b)
        return (max(0.0, 1.0 - (b / self.k) ** (1.0 / (self.k - 1))), 1.0)

    def spec(self):
        return f"min:{self.k}"


class Power(_Analytic):
    """``U ** beta``."""

    kind = "Power"

    def __init__(self, beta: float):
        if not (beta > 0.0 and math.isfinite(beta)):
            raise InvalidLaw(f"Power needs beta > 0, got {beta!r}")
        self.beta = float(beta)

    def cdf(self, x):
        return np.asarray(x, dtype=float) ** (1.0 / self.beta)

    def quantile(self, u):
        return np.asarray(u, dtype=float) ** self.beta

    def density(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return x ** (1.0 / self.beta - 1.0) / self.beta

    def moments(self):
        return MomentSummary(self.beta, self.beta**2)

    def cumulant(self, lam):
        return -math.log1p(self.beta * lam) if self.beta * lam > -1.0 else INF

    @property
    def lambda_domain(self):
        return (-1.0 / self.beta, False)

    def partial_moment(self, lam, lo, hi):
        ulo, uhi = lo ** (1.0 / self.beta), hi ** (1.0 / self.beta)
        return _power_integral(self.beta * lam, ulo, uhi)

    def kept_interval(self, b):
        if self.beta == 1.0:
            return Uniform().kept_interval(b)
        if math.isinf(b):
            return (0.0, 1.0)
        if self.beta > 1.0:
            # decreasing density, unbounded at 0
            return (min(1.0, (b * self.beta) ** (-self.beta / (self.beta - 1.0))), 1.0)
        return (0.0, min(1.0, (b * self.beta) ** (self.beta / (1.0 - self.beta))))

    def spec(self):
        return f"pow:{self.beta!r}"


class Constant(AttachmentLaw):
    kind = "Constant"
    is_point_mass = True
    has_density = False

    def __init__(self, theta: float):
        if not 0.0 < theta < 1.0:
            raise InvalidLaw(f"Constant needs theta in (0,1), got {theta!r}")
        self.theta = float(theta)

    def transform(self, u):
        return np.full(u.shape[0], self.theta)

    def moments(self):
        return MomentSummary(-math.log(self.theta), 0.0)

    def cumulant(self, lam):
        return lam * math.log(self.theta)

    @property
    def lambda_domain(self):
        return (-INF, False)

    def spec(self):
        return f"const:{self.theta!r}"


class Tabulated(AttachmentLaw):
    """Piecewise-linear density given on segments ``[x0, x1]`` with end values
    ``f0, f1``.  Segments may leave gaps (the density is zero there)."""

    kind = "Tabulated"

    def __init__(self, x0, x1, f0, f1, source: Optional[str] = None):
        x0, x1, f0, f1 = (np.asarray(a, dtype=float).copy() for a in (x0, x1, f0, f1))
        if not (x0.shape == x1.shape == f0.shape == f1.shape) or x0.ndim != 1 or x0.size == 0:
            raise InvalidLaw("segment arrays must be nonempty and of equal length")
        if np.any(x1 <= x0) or np.any(x0[1:] < x1[:-1]):
            raise InvalidLaw("segments must be increasing and non-overlapping")
        if x0[0] < 0.0 or x1[-1] > 1.0:
            raise InvalidLaw("support must lie in [0, 1]")
        if np.any(f0 < 0) or np.any(f1 < 0):
            raise InvalidLaw("density values must be nonnegative")
        mass = 0.5 * (f0 + f1) * (x1 - x0)
        total = float(mass.sum())
        if not total > 0.0:
            raise InvalidLaw("density has zero mass")
        f0 /= total
        f1 /= total
        self.x0, self.x1, self.f0, self.f1 = x0, x1, f0, f1
        self._cum = np.cumsum(mass / total)
        self._cum[-1] = 1.0
        self.source = source
        for a in (self.x0, self.x1, self.f0, self.f1, self._cum):
            a.setflags(write=False)

    @classmethod
    def from_grid(cls, x, density, source: Optional[str] = None) -> "Tabulated":
        """Breakpoints ``x`` (strictly increasing, in [0, 1]) and density values."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(density, dtype=float)
        if x.ndim != 1 or x.shape != d.shape or x.size < 2:
            raise InvalidLaw("grid needs at least two breakpoints with one density value each")
        if np.any(np.diff(x) <= 0):
            raise InvalidLaw("grid breakpoints must be strictly increasing")
        return cls(x[:-1], x[1:], d[:-1], d[1:], source=source)

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        path = Path(path)
        with path.open() as fh:
            header = [h.strip() for h in fh.readline().strip().split(",")]
            if header != ["x", "density"]:
                raise LawSpecError(f"{path}: expected header 'x,density', got {','.join(header)!r}")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        return cls.from_grid(data[:, 0], data[:, 1], source=str(path))

    @property
    def slopes(self):
        return (self.f1 - self.f0) / (self.x1 - self.x0)

    def transform(self, u):
        u = u[:, 0]
        j = np.minimum(np.searchsorted(self._cum, u, side="right"), self._cum.size - 1)
        prev = np.where(j > 0, self._cum[j - 1], 0.0)
        r = np.maximum(u - prev, 0.0)
        f0 = self.f0[j]
        s = self.slopes[j]
        denom = f0 + np.sqrt(np.maximum(f0 * f0 + 2.0 * s * r, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom > 0, 2.0 * r / denom, 0.0)
        x = np.clip(self.x0[j] + t, self.x0[j], self.x1[j])
        return np.minimum(x, ONE_MINUS)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        j = np.clip(np.searchsorted(self.x0, x, side="right") - 1, 0, self.x0.size - 1)
        inside = (x >= self.x0[j]) & (x <= self.x1[j])
        val = self.f0[j] + self.slopes[j] * (x - self.x0[j])
        return np.where(inside, val, 0.0)

    def moments(self):
        # E[log X] and E[log^2 X] by exact antiderivatives on every segment
        def seg(p, x, k):
            if x == 0.0:
                return 0.0
            e = p + 1.0
            lx = math.log(x)
            xe = x**e
            if k == 1:
                return xe * (lx / e - 1.0 / e**2)
            return xe * (lx * lx / e - 2.0 * lx / e**2 + 2.0 / e**3)

        m1 = m2 = 0.0
        for x0, x1, f0, s in zip(*(map(float, a) for a in (self.x0, self.x1, self.f0, self.slopes))):
            a = f0 - s * x0
            for k in (1, 2):
                v = a * (seg(0, x1, k) - seg(0, x0, k)) + s * (seg(1, x1, k) - seg(1, x0, k))
                if k == 1:
                    m1 += v
                else:
                    m2 += v
        mu = -m1
        return MomentSummary(mu, max(m2 - mu * mu, 0.0))

    @property
    def lambda_domain(self):
        first = int(np.argmax(self._cum > 0))
        if self.x0[first] > 0.0:
            return (-INF, False)
        return (-1.0, False) if self.f0[first] > 0.0 else (-2.0, False)

    def partial_moment(self, lam, lo=0.0, hi=1.0):
        total = 0.0
        for x0, x1, f0, s in zip(*(map(float, a) for a in (self.x0, self.x1, self.f0, self.slopes))):
            a, b = max(x0, lo), min(x1, hi)
            if b <= a:
                continue
            fa = f0 + s * (a - x0)
            if fa == 0.0 and s == 0.0:
                continue
            coef0 = fa - s * a
            t0 = _power_integral(lam, a, b) if coef0 != 0.0 else 0.0
            t1 = _power_integral(lam + 1.0, a, b) if s != 0.0 else 0.0
            if math.isinf(t0) or math.isinf(t1):
                return INF
            total += coef0 * t0 + s * t1
        return total

    def cumulant(self, lam):
        lo, _ = self.lambda_domain
        if lam <= lo:
            return INF
        return _log_or_inf(self.partial_moment(lam))

    def restricted(self, b: float) -> tuple[float, "Tabulated"]:
        """Split into ``{f <= b}`` (renormalized) and the mass of ``{f > b}``."""
        segs = []
        for x0, x1, f0, f1 in zip(self.x0, self.x1, self.f0, self.f1):
            if f0 <= b and f1 <= b:
                segs.append((x0, x1, f0, f1))
            elif f0 > b and f1 > b:
                continue
            else:
                xc = x0 + (b - f0) * (x1 - x0) / (f1 - f0)
                if f0 <= b and xc > x0:
                    segs.append((x0, xc, f0, b))
                elif f1 <= b and x1 > xc:
                    segs.append((xc, x1, b, f1))
        if not segs:
            raise InvalidTruncation("density exceeds the cap everywhere")
        a = np.array(segs)
        kept = float(np.sum(0.5 * (a[:, 2] + a[:, 3]) * (a[:, 1] - a[:, 0])))
        p = max(0.0, 1.0 - kept)
        return p, Tabulated(a[:, 0], a[:, 1], a[:, 2], a[:, 3])

    def spec(self):
        if self.source is not None:
            return f"table:{self.source}"
        return f"table:<{self.x0.size} segments>"

    def _key(self):
        return (self.x0.tobytes(), self.x1.tobytes(), self.f0.tobytes(), self.f1.tobytes())


class Restricted(_Analytic):
    """An analytic law conditioned on ``lo <= X <= hi``; the base part of a
    density-capped law."""

    kind = "Restricted"

    def __init__(self, source: _Analytic, lo: float, hi: float):
        self.source, self.lo, self.hi = source, float(lo), float(hi)
        self.mass = float(source.cdf(self.hi) - source.cdf(self.lo))
        if not self.mass > 0.0:
            raise InvalidTruncation("restriction has zero mass")
        self._flo = float(source.cdf(self.lo))

    def quantile(self, u):
        return self.source.quantile(self._flo + np.asarray(u, dtype=float) * self.mass)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        return (self.source.cdf(x) - self._flo) / self.mass

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, self.source.density(x) / self.mass, 0.0)

    @property
    def lambda_domain(self):
        if self.lo > 0.0:
            return (-INF, False)
        return self.source.lambda_domain

    def partial_moment(self, lam, lo, hi):
        a, b = max(lo, self.lo), min(hi, self.hi)
        return self.source.partial_moment(lam, a, b) / self.mass if b > a else 0.0

    def moments(self):
        def integrand(k):
            return lambda x: (-math.log(x)) ** k * float(self.source.density(x))

        vals = []
        for k in (1, 2):
            val, err = integrate.quad(integrand(k), self.lo, self.hi, epsabs=1e-10, limit=200)
            if not (err <= 1e-10 * max(1.0, abs(val)) * 100):
                raise QuadratureNonConvergence(f"-log moment {k} of {self!r}: error {err:g}")
            vals.append(val / self.mass)
        return MomentSummary(vals[0], max(vals[1] - vals[0] ** 2, 0.0))

    def kept_interval(self, b):
        raise InvalidTruncation("a restricted law cannot be truncated again")

    def spec(self):
        return f"{self.source.spec()}|[{self.lo!r},{self.hi!r}]"


class AtomMixture(AttachmentLaw):
    """``0`` with probability ``atom_mass``, otherwise a draw of ``base``.

    When built by :func:`truncate_bounded` the mixture carries the law it was
    cut from and samples it pathwise: ``X_cap = X`` unless ``f(X) > cap``, in
    which case ``X_cap = 0``.  That sampler consumes the same uniforms as the
    original law, so coupled draws satisfy ``X_cap <= X``.
    """

    kind = "AtomMixture"

    def __init__(self, atom_mass: float, base: AttachmentLaw,
                 coupled_source: Optional[AttachmentLaw] = None,
                 density_cap: Optional[float] = None):
        if not 0.0 <= atom_mass <= 1.0:
            raise InvalidLaw(f"atom mass must lie in [0,1], got {atom_mass!r}")
        if isinstance(base, AtomMixture):
            raise InvalidLaw("AtomMixture base cannot itself be an AtomMixture")
        self.atom_mass = float(atom_mass)
        self.base = base
        self.coupled_source = coupled_source
        self.density_cap = density_cap
        self.width = coupled_source.width if coupled_source is not None else 1 + base.width

    @property
    def is_point_mass(self):
        return self.atom_mass == 1.0 or (self.atom_mass == 0.0 and self.base.is_point_mass)

    @property
    def has_density(self):
        return self.atom_mass == 0.0 and self.base.has_density

    def transform(self, u):
        if self.coupled_source is not None:
            x = self.coupled_source.transform(u)
            if self.atom_mass > 0.0:
                with np.errstate(divide="ignore", invalid="ignore"):
                    x = np.where(self.coupled_source.density(x) > self.density_cap, 0.0, x)
            return x
        x = self.base.transform(u[:, 1:])
        return np.where(u[:, 0] < self.atom_mass, 0.0, x)

    def moments(self):
        if self.atom_mass > 0.0:
            return MomentSummary(INF, INF)
        return self.base.moments()

    def cumulant(self, lam):
        p = self.atom_mass
        if p == 0.0:
            return self.base.cumulant(lam)
        if lam < 0.0:
            return INF
        if p == 1.0:
            return -INF
        if lam == 0.0:
            return math.log1p(-p)
        return math.log1p(-p) + self.base.cumulant(lam)

    @property
    def lambda_domain(self):
        if self.atom_mass == 0.0:
            return self.base.lambda_domain
        return (0.0, True)

    def density(self, x):
        if self.atom_mass > 0.0:
            raise InvalidTruncation("law with an atom has no density")
        return self.base.density(x)

    def spec(self):
        return f"atom:{self.atom_mass!r}+{self.base.spec()}"

    def _key(self):
        src = self.coupled_source._key() if self.coupled_source is not None else None
        return (self.atom_mass, self.base._key(), src, self.density_cap)


# ---------------------------------------------------------------------------
# module-level operations


def sample(law: AttachmentLaw, stream: RandomStream) -> float:
    """One draw of X, consuming ``law.width`` uniforms from the stream cursor."""
    u = stream.next_uniforms(law.width).reshape(1, law.width)
    return float(law.transform(u)[0])


def neg_log_moments(law: AttachmentLaw) -> MomentSummary:
    return law.moments()


def cumulant(law: AttachmentLaw, lam: float) -> float:
    """``log E[X**lam]``; ``inf`` off the domain, never an exception."""
    return law.cumulant(float(lam))


def truncate_bounded(law: AttachmentLaw, density_cap: float) -> AtomMixture:
    """Send X to 0 wherever its density exceeds ``density_cap``.

    Returns an :class:`AtomMixture` with atom mass ``P{f(X) > cap}`` whose base
    is the law of X on ``{f <= cap}``.
    """
    b = float(density_cap)
    if not b > 0.0:
        raise InvalidTruncation(f"density cap must be positive, got {b!r}")
    if not law.has_density or isinstance(law, (AtomMixture, Restricted)):
        raise InvalidTruncation(f"{law.kind} law has no explicit density to cap")
    if math.isinf(b):
        return AtomMixture(0.0, law, coupled_source=law, density_cap=b)
    if isinstance(law, Tabulated):
        p, base = law.restricted(b)
        if p >= 1.0:
            raise InvalidTruncation("capped event has probability 1")
        if p <= 1e-15:
            return AtomMixture(0.0, law, coupled_source=law, density_cap=b)
        return AtomMixture(p, base, coupled_source=law, density_cap=b)
    lo, hi = law.kept_interval(b)
    kept = float(law.cdf(hi) - law.cdf(lo)) if hi > lo else 0.0
    p = max(0.0, 1.0 - kept)
    if p >= 1.0:
        raise InvalidTruncation(f"density of {law!r} exceeds {b} almost everywhere")
    if lo <= 0.0 and hi >= 1.0:
        return AtomMixture(0.0, law, coupled_source=law, density_cap=b)
    return AtomMixture(p, Restricted(law, lo, hi), coupled_source=law, density_cap=b)


# ---------------------------------------------------------------------------
# law specification strings

LAW_GRAMMAR = """\
law     := 'uniform'
         | 'max:' INT          max of INT uniforms       (INT >= 1)
         | 'min:' INT          min of INT uniforms       (INT >= 1)
         | 'pow:' REAL         U ** REAL                 (REAL > 0)
         | 'const:' REAL       point mass                (0 < REAL < 1)
         | 'atom:' REAL '+' law   atom of mass REAL at 0, base law (not itself atom:)
         | 'table:' PATH       CSV with header 'x,density', piecewise-linear density
"""


def parse_law(text: str) -> AttachmentLaw:
    """Parse a law specification string; see :data:`LAW_GRAMMAR`."""
    s = text.strip()
    if s == "uniform":
        return Uniform()
    head, sep, rest = s.partition(":")
    if not sep:
        raise LawSpecError(f"unknown law {s!r}\n{LAW_GRAMMAR}")
    try:
        if head in ("max", "min"):
            if not rest.isdigit():
                raise LawSpecError(f"bad order {rest!r} in {s!r}: expected a positive integer")
            return (MaxOrder if head == "max" else MinOrder)(int(rest))
        if head in ("pow", "const"):
            try:
                v = float(rest)
            except ValueError:
                raise LawSpecError(f"bad number {rest!r} in {s!r}") from None
            return Power(v) if head == "pow" else Constant(v)
        if head == "atom":
            ptxt, plus, btxt = rest.partition("+")
            if not plus:
                raise LawSpecError(f"missing '+<base>' after {ptxt!r} in {s!r}")
            try:
                p = float(ptxt)
            except ValueError:
                raise LawSpecError(f"bad atom mass {ptxt!r} in {s!r}") from None
            if btxt.strip().startswith("atom:"):
                raise LawSpecError(f"nested atom {btxt!r}: one atom level only")
            return AtomMixture(p, parse_law(btxt))
        if head == "table":
            if not rest:
                raise LawSpecError(f"missing path in {s!r}")
            return Tabulated.from_csv(rest)
    except InvalidLaw as exc:
        raise LawSpecError(f"{s!r}: {exc}") from None
    raise LawSpecError(f"unknown law {head!r} in {s!r}\n{LAW_GRAMMAR}")


def as_law(law) -> AttachmentLaw:
    return parse_law(law) if isinstance(law, str) else law


__all__ = [
    "AttachmentLaw", "AtomMixture", "Constant", "InvalidLaw", "InvalidTruncation",
    "LAW_GRAMMAR", "LawSpecError", "MaxOrder", "MinOrder", "MomentSummary", "Power",
    "QuadratureNonConvergence", "Restricted", "Tabulated", "Uniform", "as_law",
    "cumulant", "neg_log_moments", "parse_law", "sample", "truncate_bounded",
]
