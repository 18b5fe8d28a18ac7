"""Difference schemes, direct-inspection certification and the asymptotic tool.

A scheme converges uniformly when its difference scheme ``q`` (defined by
``a(z) = (1 + z) q(z)``) is contractive, i.e. ``max(|q^0|_1, |q^1|_1) < 1``.
For a family of schemes indexed by ``n`` that bound is checked mask by mask
for small ``n``; for large ``n`` the limit profile ``r(t)`` of
``(a^{n,0}_{tn} - a^{n,1}_{tn}) n^2`` and its antiderivative ``R`` bound the
norms by ``||R||_1 + O(1/n)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import (NotPi0Reproducing, OutOfScope, ValidationError)
from .kernels import WeightKernel, moment_integral, parse_kernel
from .masks import (Mask, SchemeSpec, Situation, build_mask, build_mask_closed_form,
                    rect_d23_coefficients)
from .quadrature import DEFAULT_TOL, integrate_interval

SUM_TOL = 1e-12
FLOAT_SLACK = 1e-9
PROFILE_CELLS = 1024


# -- difference schemes ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DifferenceMask:
    """Sub-masks ``q^0``, ``q^1`` on ``1-n .. L_n`` (normalized labelling)."""

    q_even: np.ndarray
    q_odd: np.ndarray
    first: int
    exact_even: Optional[Tuple[Fraction, ...]] = None
    exact_odd: Optional[Tuple[Fraction, ...]] = None

    @property
    def is_exact(self):
        return self.exact_even is not None

    @property
    def L_n(self):
        return self.first + len(self.q_even) - 1

    @property
    def norms(self) -> Tuple[float, float]:
        if self.is_exact:
            return tuple(float(v) for v in self.exact_norms)
        return float(np.sum(np.abs(self.q_even))), float(np.sum(np.abs(self.q_odd)))

    @property
    def exact_norms(self) -> Tuple[Fraction, Fraction]:
        if not self.is_exact:
            raise ValidationError("difference mask has no exact representation")
        return sum(abs(v) for v in self.exact_even), sum(abs(v) for v in self.exact_odd)

    @property
    def max_norm(self):
        if self.is_exact:
            return max(self.exact_norms)
        return max(self.norms)

    def full(self, exact=False):
        """``q_m`` with ``a_m = q_m + q_{m+1}``: ``q_{2j} = q^1_j``, ``q_{2j+1} = q^0_j``."""
        even = self.exact_even if exact else self.q_even
        odd = self.exact_odd if exact else self.q_odd
        out = []
        for e, o in zip(even, odd):
            out.extend([o, e])
        return (out if exact else np.array(out)), 2 * self.first

    def is_positive(self):
        if self.is_exact:
            return all(v > 0 for v in self.exact_even + self.exact_odd)
        return bool(np.all(self.q_even > 0) and np.all(self.q_odd > 0))

    def symmetry_defect(self):
        """``max_j |q^0_j - q^1_{L_n + 1 - n - j}|`` (reversal of the index range)."""
        return float(np.max(np.abs(self.q_even - self.q_odd[::-1])))


def _check_pi0(a0, a1, exact):
    s0, s1 = sum(a0), sum(a1)
    if exact:
        ok = s0 == 1 and s1 == 1
    else:
        ok = abs(s0 - 1) <= SUM_TOL and abs(s1 - 1) <= SUM_TOL
    if not ok:
        raise NotPi0Reproducing(f"sub-mask sums are {float(s0)!r} and {float(s1)!r}, not 1")


def difference_mask(mask: Mask, exact=None) -> DifferenceMask:
    """``q^0_j = sum_{l<=j} (a^0_l - a^1_l)``, ``q^1_j = sum_{l>=j} (a^0_l - a^1_{l+1})``."""
    if exact is None:
        exact = mask.is_exact
    a0, a1, L = mask.normalized(exact=exact)
    a0, a1 = list(a0), list(a1)
    _check_pi0(a0, a1, exact)
    size = len(a0)  # indices 1-n .. L_n
    zero = Fraction(0) if exact else 0.0
    q0, acc = [], zero
    for i in range(size):
        acc += a0[i] - a1[i]
        q0.append(acc)
    q1, acc = [zero] * size, zero
    for i in range(size - 1, -1, -1):
        acc += a0[i] - a1[i + 1]
        q1[i] = acc
    first = 1 - mask.n
    if exact:
        return DifferenceMask(np.array([float(v) for v in q0]), np.array([float(v) for v in q1]),
                              first, tuple(q0), tuple(q1))
    return DifferenceMask(np.array(q0), np.array(q1), first)


def normalized_full(mask: Mask, exact=False):
    """Full mask in normalized labelling: ``a_{2l} = a^0_l``, ``a_{2l-1} = a^1_l``."""
    a0, a1, L = mask.normalized(exact=exact)
    first = 1 - mask.n
    out = []
    for k in range(len(a1)):
        out.append(a1[k])
        if k < len(a0):
            out.append(a0[k])
    return (out if exact else np.array(out)), 2 * first - 1


def divide_by_one_plus_z(coeffs, first, tol=SUM_TOL):
    """Solve ``a_m = q_m + q_{m+1}`` for ``q``; returns ``(q, first_q)``.

    Raises :class:`NotPi0Reproducing` when ``1 + z`` does not divide the symbol.
    """
    coeffs = list(coeffs)
    exact = all(isinstance(c, (int, Fraction)) for c in coeffs)
    q = [None] * (len(coeffs) - 1)
    nxt = Fraction(0) if exact else 0.0
    for i in range(len(coeffs) - 1, 0, -1):
        nxt = coeffs[i] - nxt
        q[i - 1] = nxt
    remainder = coeffs[0] - q[0]
    if (remainder != 0) if exact else (abs(remainder) > tol):
        raise NotPi0Reproducing(f"(1+z) does not divide the symbol, remainder {float(remainder)!r}")
    return (q if exact else np.array(q, float)), first + 1


def multiply_by_one_plus_z(coeffs, first):
    """Coefficients of ``(1 + z) q(z)`` in the ``a_m = q_m + q_{m+1}`` convention."""
    coeffs = list(coeffs)
    zero = coeffs[0] * 0
    padded = [zero] + coeffs + [zero]
    out = [padded[i] + padded[i + 1] for i in range(len(padded) - 1)]
    return out, first - 1


# -- verdicts ----------------------------------------------------------------

class Verdict(str, enum.Enum):
    POSITIVE_MASK = "ConvergentPositiveMask"
    DIRECT_INSPECTION = "ConvergentDirectInspection"
    ASYMPTOTIC = "ConvergentAsymptotic"
    INCONCLUSIVE = "Inconclusive"


def positive_mask_verdict(mask: Mask) -> bool:
    """Strictly positive mask with at least 4 contiguous entries and unit sub-mask sums."""
    exact = mask.is_exact
    coeffs, _ = mask.full(exact=exact)
    if len(coeffs) < 4:
        return False
    if not all(c > 0 for c in coeffs):
        return False
    a0, a1, _ = mask.normalized(exact=exact)
    try:
        _check_pi0(list(a0), list(a1), exact)
    except NotPi0Reproducing:
        return False
    return True


def flip_equivalence_check(mask: Mask, tol=SUM_TOL) -> bool:
    """``||q^0||_1`` of the mask equals ``||q^1||_1`` of its index-flipped version."""
    q = difference_mask(mask)
    q_flip = difference_mask(mask.flipped())
    if q.is_exact:
        return q.exact_norms[0] == q_flip.exact_norms[1]
    return abs(q.norms[0] - q_flip.norms[1]) <= tol


@dataclass
class C1Report:
    kernel: str
    lam: float
    verdict: bool
    in_scope: bool
    p0_nonincreasing: bool
    two_q_positive: Optional[bool]
    p0_values: List[float]

    def __bool__(self):
        return self.verdict

    def to_dict(self):
        return {"kernel": self.kernel, "lambda": self.lam, "verdict": self.verdict,
                "in_scope": self.in_scope, "p0_nonincreasing": self.p0_nonincreasing,
                "two_q_positive": self.two_q_positive,
                "p0_values": self.p0_values}


def _p0_values(kernel: WeightKernel, lam: float, n: int):
    ls = np.arange(n)
    num = kernel.phi((2 * ls + 1) / lam)
    den = kernel.phi(2 * ls / lam)
    return list(num / den)


def c1_criterion_d01(kernel, lam, degree=0) -> C1Report:
    """C^1 check for the ``d = 0, 1`` schemes with ``2n-1 < lam < 2n``.

    The claim covers rect and the ``(1 - x^p)^q`` family.  Both numerical
    ingredients are verified: ``p0(l) = phi((2l+1)/lam) / phi(2l/lam)`` is
    non-increasing and ``2q`` is a positive mask with unit sub-mask sums, so
    the divided difference scheme ``S_{2q}`` converges.
    Other kernels raise :class:`OutOfScope` carrying the numerical report.
    """
    kernel = parse_kernel(kernel)
    if degree not in (0, 1):
        raise ValidationError("the C^1 criterion covers d = 0, 1 only")
    spec = SchemeSpec(kernel, lam, degree)
    if spec.situation is not Situation.ODD_LONGER or spec.n < 2:
        raise ValidationError("the C^1 criterion needs 2n-1 < lambda < 2n with n >= 2")
    p0 = _p0_values(kernel, spec.lam, spec.n)
    p0_ok = bool(np.all(np.diff(p0) <= 1e-15))
    in_scope = kernel.family == "rect" or kernel.is_power
    mask = build_mask(spec, exact=kernel.is_rational)
    q = difference_mask(mask)
    coeffs, _ = q.full(exact=q.is_exact)
    # S_{2q} converges when 2q is a positive mask with unit sub-mask sums
    two_q = [2 * c for c in coeffs]
    sums = (2 * sum(q.exact_even), 2 * sum(q.exact_odd)) if q.is_exact else \
        (2 * float(np.sum(q.q_even)), 2 * float(np.sum(q.q_odd)))
    unit = all(abs(float(v) - 1) <= SUM_TOL for v in sums)
    dd_positive = len(two_q) >= 4 and unit and all(c > 0 for c in two_q)
    report = C1Report(str(kernel), spec.lam, in_scope and p0_ok and dd_positive, in_scope,
                      p0_ok, dd_positive, [float(v) for v in p0])
    if not in_scope:
        report.verdict = False
        raise OutOfScope(f"C^1 criterion is not established for kernel {kernel}", report)
    return report


# -- asymptotic tool -----------------------------------------------------------

@dataclass
class AsymptoticProfile:
    """Limit profile ``r``, its antiderivative ``R`` (``R(-1) = 0``) and the n0 bound."""

    r: Callable
    R: Callable
    R_l1: float
    r_inf: float
    rprime_inf: float
    mu: Optional[Callable] = None
    alpha: float = 3.0
    label: str = ""
    R_roots: Tuple[float, ...] = ()

    def n0(self, mu_value, L_n_is_n=False):
        return n0_formula(self.R_l1, self.r_inf, self.rprime_inf, mu_value, L_n_is_n)

    def n0_for(self, n1, L_n_is_n=False):
        if self.mu is None:
            raise ValidationError("this profile has no error constant mu")
        return self.n0(self.mu(n1), L_n_is_n)

    def optimal_n1(self, n_min=3, n_max=100_000, L_n_is_n=False):
        """Largest ``n1`` with ``n0(n1) >= n1`` (smallest admissible n0)."""
        best = None
        for n1 in range(n_min, n_max):
            if self.n0_for(n1, L_n_is_n) >= n1:
                best = n1
            else:
                break
        if best is None:
            raise ValidationError("no admissible n1 in range")
        return best, self.n0_for(best, L_n_is_n)

    def norm_bound(self, n, mu_value, L_n_is_n=False):
        """Right side of the large-``n`` bound on ``||q^{n,0}||_1`` for ``alpha = 3``."""
        L = n if L_n_is_n else n - 1
        return (self.R_l1 + self.r_inf / n + (L + n) * self.rprime_inf / n ** 2
                + 0.5 * (L + n) * (L + n + 1) * mu_value / n ** self.alpha)


def n0_formula(R_l1, r_inf, rprime_inf, mu, L_n_is_n=False):
    """Threshold beyond which the large-``n`` bound drops below 1 (``alpha = 3``)."""
    if not R_l1 < 1:
        raise ValidationError(f"||R||_1 = {R_l1} is not below 1, no threshold exists")
    b = r_inf + 2 * (mu + rprime_inf)
    if L_n_is_n:
        disc = b ** 2 + 4 * (1 - R_l1) * mu
    else:
        disc = b ** 2 + 4 * (R_l1 - 1) * (mu + rprime_inf)
    return (math.sqrt(disc) + b) / (2 * (1 - R_l1))


def rect_d3_mu(n1):
    return 21 * n1 ** 6 / (n1 - 2) ** 6


def asymptotic_profile_rect_d3() -> AsymptoticProfile:
    """Closed profile of the rect ``d = 3`` family (odd rule longer)."""
    def r(t):
        t = np.asarray(t, float)
        return -45 * t ** 2 / 16 - 15 * t / 8 + 9 / 16

    def R(t):
        t = np.asarray(t, float)
        return (-15 * t ** 3 - 15 * t ** 2 + 9 * t + 9) / 16

    # R = -(15/16)(t + 1)(t^2 - 3/5): roots -1 and +-sqrt(3/5)
    root = math.sqrt(3 / 5)
    return AsymptoticProfile(r, R, (3 * math.sqrt(15) - 5) / 10, 33 / 8, 15 / 2,
                             mu=rect_d3_mu, alpha=3.0, label="rect d=3",
                             R_roots=(-1.0, -root, root))


def _general_r(kernel: WeightKernel, tol=DEFAULT_TOL):
    i = {k: moment_integral(kernel, k, tol) for k in range(5)}
    di = {k: moment_integral(kernel, k, tol, derivative=True) for k in (2, 4)}
    phi1 = float(kernel.phi(1.0))
    den = i[0] * i[4] - i[2] ** 2
    if not den > 0:
        raise ValidationError(f"I0*I4 - I2^2 = {den} is not positive for kernel {kernel}")
    c_lin = di[4] + 4 * i[3]
    c_sq = di[2] + 2 * i[1]
    c_big = -phi1 * i[4] - i[0] * c_lin + 2 * i[2] * c_sq

    def r(t):
        t = np.asarray(t, float)
        shape = i[4] - t ** 2 * i[2]
        w = kernel.omega(t)
        dw = kernel.domega(t)
        return (0.25 * dw * shape / den
                - 0.25 * w * (c_lin + 2 * t * i[2] - t ** 2 * c_sq) / den
                - 0.25 * w * shape * c_big / den ** 2)

    return r


def _integrate(func, a, b, tol):
    if b <= a:
        return 0.0
    points = [0.0] if a < 0.0 < b else None
    return integrate_interval(lambda s: float(func(s)), a, b, tol=tol, points=points)


def profile_from_r(r: Callable, tol=DEFAULT_TOL, cells=PROFILE_CELLS, label="") -> AsymptoticProfile:
    """Build ``R`` and ``||R||_1`` from ``r`` by quadrature.

    Sign changes of ``R`` are bracketed on a ``cells``-cell grid (with a node
    at 0, where ``r`` may jump) and refined by Brent's method before ``|R|``
    is integrated piecewise.
    """
    half = cells // 2
    nodes = np.concatenate([np.linspace(-1, 0, half + 1), np.linspace(0, 1, half + 1)[1:]])
    cell_tol = tol / cells
    increments = [_integrate(r, a, b, cell_tol) for a, b in zip(nodes[:-1], nodes[1:])]
    R_nodes = np.concatenate([[0.0], np.cumsum(increments)])

    def R_scalar(t):
        t = float(t)
        k = int(np.clip(np.searchsorted(nodes, t, side="right") - 1, 0, len(nodes) - 2))
        return float(R_nodes[k] + _integrate(r, nodes[k], t, cell_tol))

    def R(t):
        t_arr = np.asarray(t, float)
        if t_arr.ndim == 0:
            return R_scalar(t_arr)
        return np.array([R_scalar(v) for v in t_arr.ravel()]).reshape(t_arr.shape)

    scale = max(1.0, float(np.max(np.abs(R_nodes))))
    zero_tol = 1e-10 * scale
    roots = [-1.0]
    for k in range(1, len(nodes) - 1):
        a, b = R_nodes[k], R_nodes[k + 1]
        if abs(a) <= zero_tol:
            if k > 0 and roots[-1] != nodes[k]:
                left, right = R_nodes[k - 1], R_nodes[k + 1]
                if left * right < 0:
                    roots.append(float(nodes[k]))
            continue
        if a * b < 0 and abs(b) > zero_tol:
            roots.append(brentq(R_scalar, nodes[k], nodes[k + 1], xtol=1e-13))
    if roots[-1] < 1.0:
        roots.append(1.0)

    total = 0.0
    for u, v in zip(roots[:-1], roots[1:]):
        if v <= u:
            continue
        # int_u^v R = R(u)(v - u) + int_u^v (v - s) r(s) ds
        piece = R_scalar(u) * (v - u) + _integrate(lambda s: (v - s) * r(s), u, v, tol)
        total += abs(piece)

    grid = np.linspace(-1, 1, 20001)
    r_vals = np.asarray(r(grid), float)
    r_inf = float(np.max(np.abs(r_vals)))
    deriv = np.diff(r_vals) / np.diff(grid)
    rprime_inf = float(np.max(np.abs(deriv[np.abs(grid[:-1]) > 1e-3])))
    return AsymptoticProfile(r, R, total, r_inf, rprime_inf, label=label,
                             R_roots=tuple(roots[:-1]))


def general_profile(kernel, tol=DEFAULT_TOL) -> AsymptoticProfile:
    """Profile of the ``d = 2, 3`` family for a kernel with ``phi`` in ``C^1(0, 1)``."""
    kernel = parse_kernel(kernel)
    return profile_from_r(_general_r(kernel, tol), tol=tol, label=f"{kernel} d=3")


def r_l1_norm(kernel_or_profile, tol=DEFAULT_TOL) -> float:
    if isinstance(kernel_or_profile, AsymptoticProfile):
        return kernel_or_profile.R_l1
    return general_profile(kernel_or_profile, tol).R_l1


# -- families over n ---------------------------------------------------------

@dataclass(frozen=True)
class SchemeFamily:
    """Schemes ``(kernel, lam_n = 2n - 1 + offset, degree)`` for ``n = 2, 3, ...``.

    ``0 < offset < 1`` keeps the odd rule longer (``L_n = n - 1``) and
    ``1 < offset < 2`` the even rule (``L_n = n``).
    """

    kernel: WeightKernel
    degree: int
    offset: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kernel", parse_kernel(self.kernel))
        if not (0 < self.offset < 2) or self.offset == 1:
            raise ValidationError("offset must lie in (0, 1) or (1, 2)")

    @property
    def L_n_is_n(self):
        return self.offset > 1

    def lam(self, n):
        # keep the decimal reading exact for the rational path
        return float(Fraction(2 * n - 1) + Fraction(repr(float(self.offset))))

    def spec(self, n):
        return SchemeSpec(self.kernel, self.lam(n), self.degree)

    def mask(self, n, exact=None):
        spec = self.spec(n)
        if exact is None:
            exact = self.kernel.is_rational
        if spec.degree <= 3:
            return build_mask_closed_form(spec, exact=exact)
        return build_mask(spec, exact=exact)

    def coefficient_functions(self, n):
        """``(a0(j), a1(j))`` valid at real ``j`` (``d <= 3``, odd rule longer)."""
        if self.degree > 3 or self.L_n_is_n:
            raise ValidationError("real-index coefficients need d <= 3 and the odd rule longer")
        lam = self.lam(n)
        kernel = self.kernel
        if self.degree <= 1:
            w0 = 1 + 2 * sum(float(kernel.phi(2 * l / lam)) for l in range(1, n))
            w1 = 2 * sum(float(kernel.phi((2 * l - 1) / lam)) for l in range(1, n + 1))

            def a0(j):
                return kernel.omega(2 * np.asarray(j, float) / lam) / w0

            def a1(j):
                return kernel.omega((2 * np.asarray(j, float) - 1) / lam) / w1
            return a0, a1
        if kernel.family == "rect":
            def a0(j):
                return rect_d23_coefficients(float(n), [np.asarray(j, float)], [])[0][0]

            def a1(j):
                return rect_d23_coefficients(float(n), [], [np.asarray(j, float)])[1][0]
            return a0, a1
        ls = np.arange(1, n + 1, dtype=float)

        def sigma(x, k):
            return float(np.sum(kernel.phi((ls - x) / (lam / 2)) * (ls - x) ** k))

        w0 = 1 + 2 * sum(float(kernel.phi(2 * l / lam)) for l in range(1, n))
        w1 = 2 * sum(float(kernel.phi((2 * l - 1) / lam)) for l in range(1, n + 1))
        s = {(x, k): sigma(x, k) for x in (0.5, 1.0) for k in (2, 4)}

        def make(x, norm):
            num4, num2 = s[(x, 4)], s[(x, 2)]
            den = norm * num4 - 2 * num2 ** 2

            def a(j):
                y = np.asarray(j, float) + x - 1
                return kernel.omega(y / (lam / 2)) * (num4 - y ** 2 * num2) / den
            return a
        return make(1.0, w0), make(0.5, w1)

    def label(self):
        return f"{self.kernel} d={self.degree} lambda=2n-1+{self.offset:g}"


def estimate_r_numeric(family: SchemeFamily, t, n_probe) -> float:
    """``(a^{n,0}_{tn} - a^{n,1}_{tn}) n^2`` at ``n = n_probe``."""
    if abs(t) > 1:
        raise ValidationError("t must lie in [-1, 1]")
    a0, a1 = family.coefficient_functions(int(n_probe))
    j = t * n_probe
    return float((a0(j) - a1(j)) * n_probe ** 2)


# -- certification -------------------------------------------------------------

@dataclass
class ConvergenceReport:
    verdict: Verdict
    family: str
    n_range: Tuple[int, int]
    norms: Dict[int, float] = field(default_factory=dict)
    max_norm: Optional[float] = None
    max_norm_exact: Optional[str] = None
    argmax: List[int] = field(default_factory=list)
    failing: List[int] = field(default_factory=list)
    R_l1: Optional[float] = None
    n0: Optional[float] = None
    n1: Optional[int] = None
    exact: bool = False
    slack: float = 0.0
    route: str = ""
    notes: List[str] = field(default_factory=list)

    def to_dict(self, include_norms=True):
        out = {
            "verdict": self.verdict.value, "family": self.family,
            "n_range": list(self.n_range), "max_norm": self.max_norm,
            "max_norm_exact": self.max_norm_exact, "argmax": self.argmax,
            "failing": self.failing, "R_l1": self.R_l1, "n0": self.n0, "n1": self.n1,
            "exact": self.exact, "slack": self.slack, "route": self.route, "notes": self.notes,
        }
        if include_norms:
            out["norms"] = {str(k): v for k, v in sorted(self.norms.items())}
        return out

    def summary(self):
        lines = [f"family: {self.family}", f"verdict: {self.verdict.value}",
                 f"route: {self.route}",
                 f"direct inspection: n = {self.n_range[0]}..{self.n_range[1]}"]
        if self.max_norm is not None:
            exact = f" ({self.max_norm_exact})" if self.max_norm_exact else ""
            lines.append(f"max norm: {self.max_norm:.6f}{exact} at n = "
                         + ", ".join(map(str, self.argmax)))
        if self.R_l1 is not None:
            lines.append(f"||R||_1: {self.R_l1:.6f}")
        if self.n0 is not None:
            lines.append(f"n0: {self.n0:.3f} (n1 = {self.n1})")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def certify_family(family: SchemeFamily, n_max: int, n_min: int = 2, mu=None,
                   exact=None) -> ConvergenceReport:
    """Combine per-``n`` direct inspection with the asymptotic threshold.

    ``mu`` may be a number or a callable of ``n1``; for rect with ``d = 2, 3``
    and the odd rule longer the known error constant is used automatically.
    An ``Inconclusive`` verdict only means the sufficient condition failed.
    """
    if n_max < n_min:
        raise ValidationError("n_max must be at least n_min")
    kernel = family.kernel
    if exact is None:
        exact = kernel.is_rational
    slack = 0.0 if exact else FLOAT_SLACK
    report = ConvergenceReport(Verdict.INCONCLUSIVE, family.label(), (n_min, n_max),
                               exact=bool(exact), slack=slack)
    if kernel.family == "custom" and not kernel.is_strictly_decreasing():
        report.notes.append("kernel is not strictly decreasing")

    all_positive = True
    best = None
    for n in range(n_min, n_max + 1):
        mask = family.mask(n, exact=exact)
        all_positive = all_positive and positive_mask_verdict(mask)
        q = difference_mask(mask)
        norm = q.max_norm
        report.norms[n] = float(norm)
        if best is None or norm > best:
            best, report.argmax = norm, [n]
        elif norm == best:
            report.argmax.append(n)
        if not float(norm) < 1 - slack:
            report.failing.append(n)
    report.max_norm = float(best)
    if exact:
        report.max_norm_exact = str(best)

    if family.degree <= 1 and all_positive:
        report.verdict = Verdict.POSITIVE_MASK
        report.route = "positive mask with unit sub-mask sums (every lambda > 2)"
        return report

    profile = None
    if family.degree in (2, 3):
        if kernel.family == "rect" and not family.L_n_is_n:
            profile = asymptotic_profile_rect_d3()
            if mu is None:
                mu = profile.mu
        elif family.kernel.family != "custom" or kernel.is_strictly_decreasing():
            profile = general_profile(kernel)
        if profile is not None:
            report.R_l1 = profile.R_l1
            if family.L_n_is_n:
                report.notes.append("||R||_1 is the limit profile of the odd-rule-longer family")
    if profile is not None and mu is not None and profile.R_l1 < 1:
        if callable(mu):
            profile.mu = mu
            n1, n0 = profile.optimal_n1(L_n_is_n=family.L_n_is_n)
            report.n1 = n1
        else:
            n0 = profile.n0(float(mu), family.L_n_is_n)
        report.n0 = float(n0)

    if report.failing:
        report.verdict = Verdict.INCONCLUSIVE
        report.route = "difference-scheme norm not below 1 for some n"
        return report
    if report.n0 is not None and math.floor(report.n0) <= n_max and n_min <= 2:
        report.verdict = Verdict.ASYMPTOTIC
        report.route = ("direct inspection up to n0 and large-n bound beyond")
    else:
        report.verdict = Verdict.DIRECT_INSPECTION
        report.route = "direct inspection of the difference scheme on the range"
        if report.R_l1 is not None and report.n0 is None:
            report.notes.append("no error constant supplied, n0 not computed")
    return report
