"""Weight kernels, sampled regression weights and kernel moments.

A kernel is a non-increasing profile ``phi: [0, 1] -> [0, 1]`` with
``phi(0) = 1``.  The regression window is ``omega(x) = phi(|x|)`` on
``[-1, 1]`` (zero outside) and the weight of the sample at integer offset
``l`` for bandwidth ``lam`` is ``omega(l / lam)``.

Kernel spec strings (CLI and config files)::

    rect | tria | epan | bisq | tcub | trwt | exp:<xi> | pq:<p>:<q>
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional

import numpy as np
from scipy import special

from .errors import BandwidthTooSmall, DomainError, IntegerBandwidth, ValidationError
from .quadrature import DEFAULT_TOL, integrate_interval

#: (p, q) of the named members of the ``(1 - x**p)**q`` family.
POWER_ALIASES = {
    "tria": (1, 1),
    "epan": (2, 1),
    "bisq": (2, 2),
    "tcub": (3, 3),
    "trwt": (2, 3),
}

INTEGER_MARGIN = 1e-9
_NUMERIC_STEP = 1e-6


@dataclass(frozen=True)
class WeightKernel:
    """A weight profile ``phi`` on ``[0, 1]``.

    Use the named constructors (:meth:`rect`, :meth:`power`, :meth:`exp`,
    ...) or :func:`parse_kernel` rather than building instances by hand.
    """

    family: str
    p: Optional[float] = None
    q: Optional[float] = None
    xi: Optional[float] = None
    func: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family in POWER_ALIASES or self.family == "pq":
            if self.p is None or self.q is None:
                raise ValidationError(f"{self.family} kernel needs p and q")
            if not self.p >= 1:
                raise ValidationError(f"power kernel needs p >= 1, got {self.p}")
            if not self.q > 0:
                raise ValidationError(f"power kernel needs q > 0, got {self.q}")
        elif self.family == "exp":
            if self.xi is None or not self.xi > 0:
                raise ValidationError(f"exp kernel needs xi > 0, got {self.xi}")
        elif self.family == "custom":
            if self.func is None:
                raise ValidationError("custom kernel needs a callable")
        elif self.family != "rect":
            raise ValidationError(f"unknown kernel family {self.family!r}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def rect(cls):
        return cls("rect")

    @classmethod
    def named(cls, name):
        if name == "rect":
            return cls.rect()
        p, q = POWER_ALIASES[name]
        return cls(name, p=float(p), q=float(q))

    @classmethod
    def power(cls, p, q):
        """``phi(x) = (1 - x**p)**q``; named aliases are returned for their (p, q) pairs."""
        for name, pq in POWER_ALIASES.items():
            if (float(p), float(q)) == (float(pq[0]), float(pq[1])):
                return cls.named(name)
        return cls("pq", p=float(p), q=float(q))

    @classmethod
    def exp(cls, xi):
        return cls("exp", xi=float(xi))

    @classmethod
    def custom(cls, func, name="custom"):
        """Wrap an arbitrary vectorised profile; ``phi'`` is taken numerically."""
        kernel = cls("custom", func=func)
        object.__setattr__(kernel, "_label", name)
        return kernel

    # -- identity -----------------------------------------------------------
    @property
    def is_power(self):
        return self.family == "pq" or self.family in POWER_ALIASES

    @property
    def is_rational(self):
        """True when ``phi`` maps rationals to rationals (exact mask path)."""
        if self.family == "rect":
            return True
        if self.is_power:
            return float(self.p).is_integer() and float(self.q).is_integer()
        return False

    def __str__(self):
        if self.family == "rect" or self.family in POWER_ALIASES:
            return self.family
        if self.family == "pq":
            return f"pq:{_fmt(self.p)}:{_fmt(self.q)}"
        if self.family == "exp":
            return f"exp:{_fmt(self.xi)}"
        return getattr(self, "_label", "custom")

    # -- evaluation ---------------------------------------------------------
    def phi(self, x):
        """Vectorised ``phi``; no domain check (see :func:`eval_phi`)."""
        x = np.asarray(x, dtype=float)
        if self.family == "rect":
            return np.ones_like(x)
        if self.is_power:
            return np.power(np.clip(1.0 - np.power(x, self.p), 0.0, None), self.q)
        if self.family == "exp":
            return np.exp(-self.xi * x)
        return np.asarray(self.func(x), dtype=float)

    def dphi(self, x):
        """Derivative of ``phi`` on ``(0, 1)``."""
        x = np.asarray(x, dtype=float)
        if self.family == "rect":
            return np.zeros_like(x)
        if self.is_power:
            p, q = self.p, self.q
            base = np.clip(1.0 - np.power(x, p), 0.0, None)
            with np.errstate(divide="ignore", invalid="ignore"):
                return -p * q * np.power(x, p - 1.0) * np.power(base, q - 1.0)
        if self.family == "exp":
            return -self.xi * np.exp(-self.xi * x)
        h = _NUMERIC_STEP
        lo = np.clip(x - h, 0.0, 1.0)
        hi = np.clip(x + h, 0.0, 1.0)
        return (self.phi(hi) - self.phi(lo)) / (hi - lo)

    def omega(self, x):
        """Even window ``phi(|x|)`` on ``[-1, 1]``, zero outside."""
        x = np.abs(np.asarray(x, dtype=float))
        inside = x <= 1.0
        return np.where(inside, self.phi(np.minimum(x, 1.0)), 0.0)

    def domega(self, x):
        """Derivative of :meth:`omega` on ``(-1, 0) U (0, 1)``."""
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.dphi(np.minimum(np.abs(x), 1.0))

    def phi_exact(self, x: Fraction) -> Fraction:
        if not self.is_rational:
            raise ValidationError(f"kernel {self} has no exact rational evaluation")
        if self.family == "rect":
            return Fraction(1)
        return (1 - x ** int(self.p)) ** int(self.q)

    def closed_moment(self, k):
        """Closed form of ``int_0^1 phi(x) x**k dx`` or None if unknown."""
        if self.family == "rect":
            return 1.0 / (k + 1)
        if self.is_power:
            return float(special.beta((k + 1) / self.p, self.q + 1.0) / self.p)
        if self.family == "exp":
            xi = self.xi
            return float(math.gamma(k + 1) * special.gammainc(k + 1, xi) / xi ** (k + 1))
        return None

    def is_strictly_decreasing(self, samples=2001):
        """Fine-grid check; rect (constant) and flat custom kernels return False."""
        vals = self.phi(np.linspace(0.0, 1.0, samples))
        return bool(np.all(np.diff(vals) < 0))


def _fmt(value):
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def parse_kernel(text) -> WeightKernel:
    """Parse a kernel spec string such as ``"epan"``, ``"exp:10"`` or ``"pq:4:5"``."""
    if isinstance(text, WeightKernel):
        return text
    s = str(text).strip().lower()
    head, _, rest = s.partition(":")
    try:
        if head == "rect" and not rest:
            return WeightKernel.rect()
        if head in POWER_ALIASES and not rest:
            return WeightKernel.named(head)
        if head == "exp":
            return WeightKernel.exp(float(rest))
        if head == "pq":
            p, q = rest.split(":")
            return WeightKernel.power(float(p), float(q))
        if head.startswith("p") and "q" in head and not rest:
            # shorthand like p4q5
            p, q = head[1:].split("q")
            return WeightKernel.power(float(p), float(q))
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse kernel spec {text!r}") from None
    raise ValidationError(f"cannot parse kernel spec {text!r}")


def eval_phi(kernel: WeightKernel, x) -> float:
    """``phi(x)`` with the ``[0, 1]`` domain enforced."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"phi is defined on [0, 1], got x={x}")
    return float(kernel.phi(x))


# -- bandwidth -------------------------------------------------------------

def as_fraction(lam) -> Fraction:
    """Exact decimal reading of a bandwidth (``3.7 -> 37/10``)."""
    if isinstance(lam, Fraction):
        return lam
    if isinstance(lam, (int, np.integer)):
        return Fraction(int(lam))
    if isinstance(lam, str):
        return Fraction(lam.strip())
    return Fraction(repr(float(lam)))


def check_bandwidth(lam) -> float:
    lam_f = float(lam)
    if not math.isfinite(lam_f):
        raise BandwidthTooSmall(f"bandwidth must be finite, got {lam}")
    if abs(lam_f - round(lam_f)) < INTEGER_MARGIN:
        raise IntegerBandwidth(f"bandwidth must not be an integer, got {lam}")
    if lam_f <= 1.0:
        raise BandwidthTooSmall(f"bandwidth must exceed 1, got {lam}")
    return lam_f


@dataclass(frozen=True)
class SampledWeights:
    """``w_l = phi(|l| / lam)`` for every integer ``|l| < lam``."""

    lam: float
    values: Dict[int, float]

    @property
    def radius(self):
        return max(self.values)

    def __getitem__(self, l):
        return self.values[l]


def sample_weights(kernel: WeightKernel, lam, exact=False) -> SampledWeights:
    lam_f = check_bandwidth(lam)
    radius = int(math.floor(lam_f))
    if exact:
        lam_q = as_fraction(lam)
        one_side = {l: kernel.phi_exact(Fraction(l) / lam_q) for l in range(radius + 1)}
    else:
        ls = np.arange(radius + 1)
        vals = kernel.phi(ls / lam_f)
        one_side = {int(l): float(v) for l, v in zip(ls, vals)}
        one_side[0] = 1.0
    values = {}
    for l in range(-radius, radius + 1):
        values[l] = one_side[abs(l)]
    return SampledWeights(lam_f, values)


# -- moments ---------------------------------------------------------------

def moment_integral(kernel: WeightKernel, k: int, tol: float = DEFAULT_TOL,
                    derivative: bool = False) -> float:
    """``I_k = int_0^1 phi(x) x**k dx`` by adaptive quadrature.

    With ``derivative=True`` the integrand uses ``phi'`` instead (needed by
    the large-``n`` limit of the degree-2/3 difference masks).
    """
    if k < 0 or int(k) != k:
        raise ValidationError(f"moment order must be a nonnegative integer, got {k}")
    k = int(k)
    f = kernel.dphi if derivative else kernel.phi
    if derivative and kernel.family == "rect":
        return 0.0
    return integrate_interval(lambda x: float(f(x)) * x ** k, 0.0, 1.0, tol=tol)


def squared_moment(kernel: WeightKernel, k: int, tol: float = DEFAULT_TOL,
                   closed: bool = False) -> float:
    """``int_0^1 phi(x)**2 x**k dx``; ``closed=True`` uses the Beta form when possible."""
    if closed:
        if kernel.family == "rect":
            return 1.0 / (k + 1)
        if kernel.is_power:
            return WeightKernel("pq", p=kernel.p, q=2 * kernel.q).closed_moment(k)
        if kernel.family == "exp":
            return WeightKernel.exp(2 * kernel.xi).closed_moment(k)
    return integrate_interval(lambda x: float(kernel.phi(x)) ** 2 * x ** k, 0.0, 1.0, tol=tol)
