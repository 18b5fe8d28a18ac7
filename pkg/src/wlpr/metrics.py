"""Approximation and noise-reduction measures of WLPR schemes.

The degree pairs ``(0, 1)`` and ``(2, 3)`` give identical schemes, so all
asymptotic quantities are computed at the even representative ``d'``.  For
large ``n`` the sub-masks behave like ``n^{-1} H(l / n)``; ``H`` decides both
the leading approximation error ``2 |I_{d'+2}(H)|`` and the variance factor
``||H||_2^2 / n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .kernels import WeightKernel, moment_integral, parse_kernel, squared_moment
from .masks import Mask
from .quadrature import DEFAULT_TOL, integrate_interval


def even_degree(d: int) -> int:
    if d not in (0, 1, 2, 3):
        raise ValidationError(f"asymptotic profiles are available for d <= 3, got {d}")
    return 0 if d <= 1 else 2


def error_exponent(d: int) -> int:
    """Power of ``t`` in the leading error term (``d' + 2``)."""
    return even_degree(d) + 2


# -- finite-n measures ---------------------------------------------------------

def eta_components(mask: Mask, d: int):
    """``(sum a0_l l^{d+1}, sum a1_l (l - 1/2)^{d+1})`` in natural labelling."""
    k = d + 1
    if mask.is_exact:
        half = Fraction(1, 2)
        s0 = sum(c * Fraction(mask.even_first + i) ** k for i, c in enumerate(mask.exact_even))
        s1 = sum(c * (Fraction(mask.odd_first + i) - half) ** k
                 for i, c in enumerate(mask.exact_odd))
        return s0, s1
    l0 = mask.even_first + np.arange(len(mask.even), dtype=float)
    l1 = mask.odd_first + np.arange(len(mask.odd), dtype=float) - 0.5
    return math.fsum(mask.even * l0 ** k), math.fsum(mask.odd * l1 ** k)


def eta_constant(mask: Mask, d: int):
    """Finite-``n`` approximation constant ``max(|eta_0|, |eta_1|)``."""
    s0, s1 = eta_components(mask, d)
    return max(abs(s0), abs(s1))


def denoise_factor(mask: Mask):
    """Variance reduction ``max(||a^0||_2^2, ||a^1||_2^2)`` on white noise."""
    if mask.is_exact:
        return max(sum(c * c for c in mask.exact_even), sum(c * c for c in mask.exact_odd))
    return max(float(mask.even @ mask.even), float(mask.odd @ mask.odd))


# -- asymptotic profiles -------------------------------------------------------

def h_profile(kernel, d: int, tol=DEFAULT_TOL) -> Callable:
    """Limit shape ``H(t) = lim n a_{tn}`` on ``[-1, 1]`` (even in ``t``)."""
    kernel = parse_kernel(kernel)
    dp = even_degree(d)
    i0 = moment_integral(kernel, 0, tol)
    if dp == 0:
        def H(t):
            return kernel.omega(t) / (2 * i0)
        return H
    i2 = moment_integral(kernel, 2, tol)
    i4 = moment_integral(kernel, 4, tol)
    den = i0 * i4 - i2 ** 2

    def H(t):
        t = np.asarray(t, float)
        return kernel.omega(t) * 0.5 * (i4 - t ** 2 * i2) / den
    return H


def approx_denoise_scores(kernel, d: int, tol=DEFAULT_TOL):
    """``(2 |I_{d'+2}(H)|, ||H||_2^2)`` by adaptive quadrature of ``H``."""
    H = h_profile(kernel, d, tol)
    k = error_exponent(d)
    approx = 2 * abs(integrate_interval(lambda t: float(H(t)) * t ** k, 0.0, 1.0, tol=tol))
    l2sq = 2 * integrate_interval(lambda t: float(H(t)) ** 2, 0.0, 1.0, tol=tol)
    return approx, l2sq


def moment_scores(kernel, d: int, tol=DEFAULT_TOL, closed=True):
    """Same pair as :func:`approx_denoise_scores` from kernel moments alone.

    ``closed=True`` uses Beta / incomplete-Gamma closed forms when the
    kernel family has them (fast path for the Pareto grid).
    """
    kernel = parse_kernel(kernel)
    dp = even_degree(d)

    def I(k):
        value = kernel.closed_moment(k) if closed else None
        return moment_integral(kernel, k, tol) if value is None else value

    def J(k):
        return squared_moment(kernel, k, tol, closed=closed)

    i0, i2 = I(0), I(2)
    if dp == 0:
        return i2 / i0, J(0) / (2 * i0 ** 2)
    i4, i6 = I(4), I(6)
    den = i0 * i4 - i2 ** 2
    approx = abs(i2 * i6 - i4 ** 2) / den
    l2sq = (i4 ** 2 * J(0) - 2 * i4 * i2 * J(2) + i2 ** 2 * J(4)) / (2 * den ** 2)
    return approx, l2sq


@dataclass
class CapabilityScores:
    eta: float
    approx_const: float
    denoise_factor: float
    h_l2sq: float

    def to_dict(self):
        return {"eta": self.eta, "approx_const": self.approx_const,
                "denoise_factor": self.denoise_factor, "h_l2sq": self.h_l2sq}


def capability_scores(mask: Mask, kernel=None, d=None, tol=DEFAULT_TOL) -> CapabilityScores:
    spec = mask.spec
    kernel = parse_kernel(kernel if kernel is not None else spec.kernel)
    d = d if d is not None else spec.degree
    approx, l2sq = approx_denoise_scores(kernel, d, tol)
    return CapabilityScores(float(eta_constant(mask, error_exponent(d) - 1)), approx,
                            float(denoise_factor(mask)), l2sq)


def predicted_approx_error(kernel, d: int, h: float, n: float, deriv_bound: float,
                           tol=DEFAULT_TOL) -> float:
    """Leading error term ``2 (h n)^k |I_k(H)| |F^(k)| / k!`` with ``k = d' + 2``."""
    if not h > 0:
        raise ValidationError("h must be positive")
    if n < 2:
        raise ValidationError("n must be at least 2")
    k = error_exponent(d)
    approx, _ = approx_denoise_scores(kernel, d, tol)
    return (h * n) ** k * approx * abs(deriv_bound) / math.factorial(k)


# -- Pareto front --------------------------------------------------------------

@dataclass
class ParetoPoint:
    p: float
    q: float
    approx: float
    l2sq: float
    dominated: bool = False
    label: str = ""

    @property
    def objectives(self):
        return self.approx, self.l2sq


def dominates(a, b) -> bool:
    """``a`` is no worse than ``b`` in both objectives and strictly better in one."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def mark_dominated(points: Sequence[ParetoPoint]) -> List[ParetoPoint]:
    """Set ``dominated`` on every point; O(N log N) sweep on the first objective."""
    order = sorted(range(len(points)), key=lambda i: points[i].objectives)
    best_l2 = math.inf
    best_pair = None
    for idx in order:
        pt = points[idx]
        a, b = pt.objectives
        # every point before idx has approx <= a
        if best_pair is not None and dominates(best_pair, (a, b)):
            pt.dominated = True
        elif best_l2 < b:
            pt.dominated = True
        else:
            pt.dominated = False
        if b < best_l2 or (b == best_l2 and (best_pair is None or a < best_pair[0])):
            best_l2 = b
            best_pair = (a, b)
    return list(points)


def pareto_grid(d=2, p_range=(1.0, 20.0), q_range=(0.5, 20.0), grid_steps=60):
    """PowerPQ points: linear in ``p``, log-spaced in ``q``."""
    ps = np.linspace(p_range[0], p_range[1], grid_steps)
    qs = np.geomspace(q_range[0], q_range[1], grid_steps)
    pts = []
    for p in ps:
        for q in qs:
            a, b = moment_scores(WeightKernel.power(float(p), float(q)), d)
            pts.append(ParetoPoint(float(p), float(q), a, b))
    return pts


def pareto_front(d=2, p_range=(1.0, 20.0), q_range=(0.5, 20.0), grid_steps=60,
                 extra: Optional[Sequence] = None) -> List[ParetoPoint]:
    """Grid plus rect (the ``q -> 0`` limit) and any ``extra`` ``(p, q)`` pairs."""
    pts = pareto_grid(d, p_range, q_range, grid_steps)
    a, b = moment_scores(WeightKernel.rect(), d)
    pts.append(ParetoPoint(math.nan, 0.0, a, b, label="rect"))
    for item in extra or ():
        p, q = item[:2]
        kernel = WeightKernel.power(p, q)
        a, b = moment_scores(kernel, d)
        pts.append(ParetoPoint(float(p), float(q), a, b, label=str(kernel)))
    return mark_dominated(pts)


def is_dominated_by_any(candidate, points: Sequence[ParetoPoint]) -> bool:
    obj = candidate.objectives if isinstance(candidate, ParetoPoint) else candidate
    return any(dominates(pt.objectives, obj) for pt in points)


def exp_points(d=2, xis=None) -> List[ParetoPoint]:
    xis = np.arange(0.5, 10.0 + 1e-9, 0.5) if xis is None else xis
    out = []
    for xi in xis:
        a, b = moment_scores(WeightKernel.exp(float(xi)), d)
        out.append(ParetoPoint(math.nan, math.nan, a, b, label=f"exp:{float(xi):g}"))
    return out


def relative_to_rect(kernel, d=2):
    """``(approx ratio, noise ratio)`` of a kernel against rect at the same degree."""
    a, b = moment_scores(kernel, d)
    ra, rb = moment_scores(WeightKernel.rect(), d)
    return a / ra, b / rb
