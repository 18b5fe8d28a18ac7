"""WLPR subdivision masks.

For bandwidth ``lam`` the even rule fits a degree-``d`` polynomial to the
coarse samples at fine-grid offsets ``2l`` (``|2l| < lam``) and the odd rule
to those at offsets ``2l - 1`` (``|2l - 1| < lam``); both are evaluated at 0.
The coefficients of the two rules are the sub-masks.

Masks are stored in their *natural* labelling: ``even[k]`` multiplies
``f[j + even_first + k]`` to produce the refined value ``2j`` and ``odd[k]``
multiplies ``f[j + odd_first + k]`` to produce ``2j + 1``.  With
``n = floor((lam + 1) / 2)`` the odd rule always spans ``1-n .. n``; the even
rule spans ``1-n .. n-1`` when ``2n-1 < lam < 2n`` (odd rule longer) and
``-n .. n`` when ``2n < lam < 2n+1`` (even rule longer).  The
:meth:`Mask.normalized` view relabels the second situation so that the
second sub-mask is always the longer one, which is the form the difference
scheme formulas expect.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeTooHigh, SingularNormalEquations, ValidationError
from .kernels import WeightKernel, as_fraction, check_bandwidth, parse_kernel

COEFF_TOL = 1e-12


class Situation(str, enum.Enum):
    ODD_LONGER = "odd_longer"    # 2n-1 < lam < 2n
    EVEN_LONGER = "even_longer"  # 2n < lam < 2n+1


@dataclass(frozen=True)
class SchemeSpec:
    """Kernel, bandwidth and polynomial degree: the full identity of a scheme."""

    kernel: WeightKernel
    lam: float
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "kernel", parse_kernel(self.kernel))
        object.__setattr__(self, "lam", check_bandwidth(self.lam))
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValidationError(f"degree must be a nonnegative integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        if self.degree > self.max_degree:
            raise DegreeTooHigh(
                f"degree {self.degree} exceeds {self.max_degree}, the largest degree "
                f"for which the odd rule with lambda={self.lam} is well defined")

    @property
    def n(self) -> int:
        return int(math.floor((self.lam + 1) / 2))

    @property
    def even_radius(self) -> int:
        """Largest ``l`` with ``|2l| < lam``."""
        return int(math.floor(self.lam / 2))

    @property
    def situation(self) -> Situation:
        return Situation.ODD_LONGER if self.lam < 2 * self.n else Situation.EVEN_LONGER

    @property
    def max_degree(self) -> int:
        return 2 * self.n - 1

    @property
    def is_deslauriers_dubuc(self) -> bool:
        return self.degree == self.max_degree

    @property
    def even_is_interpolatory(self) -> bool:
        return self.degree >= 2 * self.even_radius

    @property
    def lam_exact(self) -> Fraction:
        return as_fraction(self.lam)

    def with_degree(self, degree):
        return SchemeSpec(self.kernel, self.lam, degree)

    def label(self):
        return f"{self.kernel} lambda={self.lam:g} d={self.degree}"


@dataclass(frozen=True, eq=False)
class Mask:
    """Even and odd sub-masks in natural labelling (see module docstring)."""

    even: np.ndarray
    odd: np.ndarray
    even_first: int
    odd_first: int
    spec: Optional[SchemeSpec] = None
    exact_even: Optional[Tuple[Fraction, ...]] = None
    exact_odd: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "even", np.asarray(self.even, dtype=float))
        object.__setattr__(self, "odd", np.asarray(self.odd, dtype=float))

    # -- construction -------------------------------------------------------
    @classmethod
    def from_exact(cls, even, odd, even_first, odd_first, spec=None):
        even = tuple(Fraction(v) for v in even)
        odd = tuple(Fraction(v) for v in odd)
        return cls(np.array([float(v) for v in even]), np.array([float(v) for v in odd]),
                   even_first, odd_first, spec, even, odd)

    @classmethod
    def from_full(cls, coeffs: Sequence, first: int, spec=None):
        """Split a full mask ``a_m``, ``m = first, first+1, ...`` into sub-masks.

        ``a_{2l}`` belongs to the even rule and ``a_{2l-1}`` to the odd rule.
        """
        coeffs = list(coeffs)
        idx = range(first, first + len(coeffs))
        even = [(m // 2, c) for m, c in zip(idx, coeffs) if m % 2 == 0]
        odd = [((m + 1) // 2, c) for m, c in zip(idx, coeffs) if m % 2 != 0]
        exact = all(isinstance(c, (int, Fraction)) for c in coeffs)
        ev = [c for _, c in even]
        od = [c for _, c in odd]
        if exact:
            return cls.from_exact(ev, od, even[0][0], odd[0][0], spec)
        return cls(np.array(ev, float), np.array(od, float), even[0][0], odd[0][0], spec)

    # -- shape --------------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.exact_even is not None

    @property
    def n(self) -> int:
        return 1 - self.odd_first

    @property
    def situation(self) -> Situation:
        if -self.even_first == self.n:
            return Situation.EVEN_LONGER
        return Situation.ODD_LONGER

    @property
    def L_n(self) -> int:
        return self.n - 1 if self.situation is Situation.ODD_LONGER else self.n

    @property
    def support_radius(self) -> int:
        """Half-width of the full mask support (basic limit function support)."""
        lo, hi = self.full_range()
        return max(-lo, hi)

    def full_range(self):
        lo = min(2 * self.even_first, 2 * self.odd_first - 1)
        hi = max(2 * (self.even_first + len(self.even) - 1),
                 2 * (self.odd_first + len(self.odd) - 1) - 1)
        return lo, hi

    def full(self, exact=False):
        """Full mask ``a_m`` as ``(coefficients, first_index)``."""
        lo, hi = self.full_range()
        zero = Fraction(0) if exact else 0.0
        out = [zero] * (hi - lo + 1)
        even = self.exact_even if exact else self.even
        odd = self.exact_odd if exact else self.odd
        for k, c in enumerate(even):
            out[2 * (self.even_first + k) - lo] = c
        for k, c in enumerate(odd):
            out[2 * (self.odd_first + k) - 1 - lo] = c
        return (out if exact else np.array(out)), lo

    def normalized(self, exact=False):
        """Sub-masks relabelled so both start at ``1 - n`` and the second is longer.

        Returns ``(a0, a1, L_n)`` with ``a0`` on ``1-n .. L_n`` and ``a1`` on
        ``1-n .. L_n + 1``.
        """
        even = self.exact_even if exact else self.even
        odd = self.exact_odd if exact else self.odd
        if exact and even is None:
            raise ValidationError("mask has no exact representation")
        if self.situation is Situation.ODD_LONGER:
            return even, odd, self.L_n
        return odd, even, self.L_n

    def coefficients(self):
        return np.concatenate([self.even, self.odd])

    def is_positive(self) -> bool:
        return bool(np.all(self.even > 0) and np.all(self.odd > 0))

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.even >= 0) and np.all(self.odd >= 0))

    def flipped(self) -> "Mask":
        """Index-reversed sub-masks (in the normalized labelling)."""
        if self.is_exact:
            return Mask.from_exact(self.exact_even[::-1], self.exact_odd[::-1],
                                   self.even_first, self.odd_first, self.spec)
        return Mask(self.even[::-1].copy(), self.odd[::-1].copy(),
                    self.even_first, self.odd_first, self.spec)

    def allclose(self, other: "Mask", atol=COEFF_TOL) -> bool:
        return (self.even_first == other.even_first and self.odd_first == other.odd_first
                and self.even.shape == other.even.shape and self.odd.shape == other.odd.shape
                and np.allclose(self.even, other.even, rtol=0, atol=atol)
                and np.allclose(self.odd, other.odd, rtol=0, atol=atol))

    def __repr__(self):
        full, lo = self.full()
        return f"Mask(first={lo}, full={np.array2string(full, precision=6)})"


# -- rule layout -------------------------------------------------------------

def rule_offsets(spec: SchemeSpec, rule: int):
    """``(first, count)`` of the natural sub-mask index range of ``rule`` (0 or 1)."""
    if rule == 0:
        m0 = spec.even_radius
        return -m0, 2 * m0 + 1
    n = spec.n
    return 1 - n, 2 * n


def rule_positions(spec: SchemeSpec, rule: int):
    """Fine-grid offsets ``2l - rule`` of the samples entering ``rule``."""
    first, count = rule_offsets(spec, rule)
    return [2 * l - rule for l in range(first, first + count)]


def _rule_weights(spec: SchemeSpec, positions, exact):
    kernel = spec.kernel
    if exact:
        lam = spec.lam_exact
        return [kernel.phi_exact(Fraction(abs(x)) / lam) for x in positions]
    return [float(w) for w in kernel.phi(np.abs(np.asarray(positions, float)) / spec.lam)]


def _delta(positions, exact):
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [one if x == 0 else zero for x in positions]


def _can_be_exact(spec):
    return spec.kernel.is_rational


def _resolve_exact(spec, exact):
    if exact is None:
        return False
    if exact and not _can_be_exact(spec):
        raise ValidationError(f"kernel {spec.kernel} has no exact rational path")
    return bool(exact)


# -- general solve -----------------------------------------------------------

def _solve_exact(matrix, rhs):
    """Gaussian elimination over the rationals."""
    size = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularNormalEquations("normal equations are singular")
        a[col], a[pivot] = a[pivot], a[col]
        piv = a[col][col]
        for r in range(col + 1, size):
            factor = a[r][col] / piv
            if factor:
                for c in range(col, size + 1):
                    a[r][c] -= factor * a[col][c]
    x = [Fraction(0)] * size
    for r in range(size - 1, -1, -1):
        acc = a[r][size] - sum(a[r][c] * x[c] for c in range(r + 1, size))
        x[r] = acc / a[r][r]
    return x


def regression_coefficients(spec: SchemeSpec, rule: int, exact=False):
    """Coefficient vector ``alpha`` with ``a_l = w_l * sum_t alpha_t (x_l / s)**t``.

    ``s`` is ``lam`` in the floating path (conditioning) and 1 in the exact
    path.  Returns ``(alpha, positions, weights)``.
    """
    exact = _resolve_exact(spec, exact)
    positions = rule_positions(spec, rule)
    weights = _rule_weights(spec, positions, exact)
    d = spec.degree
    if d + 1 > len(positions):
        raise DegreeTooHigh(f"degree {d} needs at least {d + 1} samples, rule {rule} has "
                            f"{len(positions)}")
    if exact:
        xs = [Fraction(x) for x in positions]
        moments = [sum(w * x ** t for w, x in zip(weights, xs)) for t in range(2 * d + 1)]
        gram = [[moments[s + t] for t in range(d + 1)] for s in range(d + 1)]
        rhs = [Fraction(1)] + [Fraction(0)] * d
        return _solve_exact(gram, rhs), positions, weights
    xs = np.asarray(positions, float) / spec.lam
    # rescaling the weights leaves the solution unchanged and keeps equal
    # weights exactly representable
    w = np.asarray(weights) / max(weights)
    weights = list(w)
    vander = np.vander(xs, d + 1, increasing=True)
    gram = vander.T @ (w[:, None] * vander)
    rhs = np.zeros(d + 1)
    rhs[0] = 1.0
    try:
        alpha = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        raise SingularNormalEquations("normal equations are singular") from None
    if not np.all(np.isfinite(alpha)):
        raise SingularNormalEquations("normal equations produced non-finite coefficients")
    return alpha, positions, weights


def _rule_by_solve(spec: SchemeSpec, rule: int, exact: bool):
    positions = rule_positions(spec, rule)
    if rule == 0 and spec.degree + 1 >= len(positions):
        # interpolation through every sample: evaluation at 0 returns f_j
        return _delta(positions, exact)
    alpha, positions, weights = regression_coefficients(spec, rule, exact)
    if exact:
        return [w * sum(a * Fraction(x) ** t for t, a in enumerate(alpha))
                for w, x in zip(weights, positions)]
    xs = np.asarray(positions, float) / spec.lam
    vander = np.vander(xs, spec.degree + 1, increasing=True)
    return list(np.asarray(weights) * (vander @ alpha))


def _assemble(spec, even, odd, exact):
    ef, _ = rule_offsets(spec, 0)
    of, _ = rule_offsets(spec, 1)
    if exact:
        return Mask.from_exact(even, odd, ef, of, spec)
    return Mask(np.array(even, float), np.array(odd, float), ef, of, spec)


def build_mask(spec: SchemeSpec, exact=False) -> Mask:
    """Sub-masks ``W X (X^T W X)^{-1} e_1`` from the weighted normal equations.

    ``exact=True`` runs the whole computation over the rationals (rational
    kernels only; the bandwidth is read as an exact decimal).
    """
    exact = _resolve_exact(spec, exact)
    even = _rule_by_solve(spec, 0, exact)
    odd = _rule_by_solve(spec, 1, exact)
    return _assemble(spec, even, odd, exact)


# -- closed forms ------------------------------------------------------------

def _normalized_weights(weights):
    total = sum(weights)
    return [w / total for w in weights]


def _even_poly_rule(positions, weights, exact):
    """Degree-2/3 rule: ``a_j = w_j (S4 - y_j^2 S2) / (N S4 - 2 S2^2)``, ``y = x/2``.

    ``S_k`` sums ``w y^k`` over the positive half of the symmetric stencil and
    ``N`` is the total weight.
    """
    half = Fraction(1, 2) if exact else 0.5
    ys = [x * half for x in positions]
    pos = [(w, y) for w, y in zip(weights, ys) if y > 0]
    s2 = sum(w * y ** 2 for w, y in pos)
    s4 = sum(w * y ** 4 for w, y in pos)
    total = sum(weights)
    den = total * s4 - 2 * s2 ** 2
    if den == 0:
        return _delta(positions, exact)
    return [w * (s4 - y ** 2 * s2) / den for w, y in zip(weights, ys)]


def rect_d23_coefficients(n, j_even, j_odd):
    """Closed rational rect masks for ``d = 2, 3`` and ``2n-1 < lam < 2n``.

    Accepts integer, Fraction or real ``j``.
    """
    den0 = 8 * n ** 3 - 12 * n ** 2 - 2 * n + 3
    den1 = 8 * n - 8 * n ** 3
    if isinstance(n, int):
        den0, den1 = Fraction(den0), Fraction(den1)
    a0 = [-3 * (5 * j ** 2 - 3 * n ** 2 + 3 * n + 1) / den0 for j in j_even]
    a1 = [(15 * (j - 1) * j - 9 * n ** 2 + 9) / den1 for j in j_odd]
    return a0, a1


def build_mask_closed_form(spec: SchemeSpec, exact=None) -> Mask:
    """Explicit-formula masks for ``d <= 3``.

    ``d = 0, 1``: normalised weights.  ``d = 2, 3``: the weighted even
    quadratic formula, and for rect with the odd rule longer the rational
    closed form in ``n``.  ``exact=None`` picks the rational path whenever the
    kernel allows it.
    """
    if spec.degree > 3:
        raise ValidationError("closed forms exist only for degree <= 3")
    if exact is None:
        exact = _can_be_exact(spec)
    exact = _resolve_exact(spec, exact)
    n = spec.n
    if (spec.degree >= 2 and spec.kernel.family == "rect"
            and spec.situation is Situation.ODD_LONGER and n >= 2):
        j_even = range(1 - n, n)
        j_odd = range(1 - n, n + 1)
        if not exact:
            j_even = [float(j) for j in j_even]
            j_odd = [float(j) for j in j_odd]
        a0, a1 = rect_d23_coefficients(n if exact else float(n), j_even, j_odd)
        return _assemble(spec, a0, a1, exact)
    rules = []
    for rule in (0, 1):
        positions = rule_positions(spec, rule)
        weights = _rule_weights(spec, positions, exact)
        if spec.degree <= 1:
            coeffs = _normalized_weights(weights)
        elif rule == 0 and spec.degree + 1 >= len(positions):
            coeffs = _delta(positions, exact)
        else:
            coeffs = _even_poly_rule(positions, weights, exact)
        rules.append(coeffs)
    return _assemble(spec, rules[0], rules[1], exact)


# -- checks ------------------------------------------------------------------

@dataclass(frozen=True)
class ReproductionCheck:
    passed: bool
    residual: float
    residuals: Tuple[float, ...]


def reproduction_residuals(mask: Mask, degree: int, exact=False):
    """``sum_l a0_l (2l)^t - delta_t`` and ``sum_l a1_l (2l-1)^t - delta_t``, t = 0..degree."""
    exact = exact and mask.is_exact
    even = mask.exact_even if exact else mask.even
    odd = mask.exact_odd if exact else mask.odd
    out = []
    for t in range(degree + 1):
        target = 1 if t == 0 else 0
        s0 = sum(c * (2 * (mask.even_first + k)) ** t for k, c in enumerate(even))
        s1 = sum(c * (2 * (mask.odd_first + k) - 1) ** t for k, c in enumerate(odd))
        out.append((s0 - target, s1 - target))
    return out


def verify_reproduction(mask: Mask, degree: int, tol=1e-10) -> ReproductionCheck:
    """Check the polynomial reproduction moment conditions up to ``degree``.

    Residuals are relative to the moment scale ``sum |a_l| |x_l|^t`` so that
    wide stencils are judged fairly; the exact path uses plain residuals.
    """
    if mask.is_exact:
        res = [abs(float(v)) for pair in reproduction_residuals(mask, degree, True) for v in pair]
        return ReproductionCheck(max(res) == 0, max(res), tuple(res))
    res = []
    for t in range(degree + 1):
        x0 = 2.0 * (mask.even_first + np.arange(len(mask.even)))
        x1 = 2.0 * (mask.odd_first + np.arange(len(mask.odd))) - 1
        target = 1.0 if t == 0 else 0.0
        for coeffs, xs in ((mask.even, x0), (mask.odd, x1)):
            terms = coeffs * xs ** t
            scale = max(1.0, float(np.sum(np.abs(terms))))
            res.append(abs(math.fsum(terms) - target) / scale)
    worst = max(res)
    return ReproductionCheck(worst <= tol, worst, tuple(res))


def odd_symmetry_defect(mask: Mask) -> float:
    """Largest ``|a_l - a_{mirror(l)}|`` over both sub-masks (natural labelling)."""
    return max(float(np.max(np.abs(mask.even - mask.even[::-1]))),
               float(np.max(np.abs(mask.odd - mask.odd[::-1]))))


def equivalent_even_odd_degree(spec: SchemeSpec, atol=COEFF_TOL) -> bool:
    """Whether the degree ``d`` (even) and ``d + 1`` schemes coincide."""
    if spec.degree % 2:
        raise ValidationError("degree must be even")
    if spec.degree + 1 > spec.max_degree:
        raise DegreeTooHigh(f"degree {spec.degree + 1} is not admissible for lambda={spec.lam}")
    return build_mask(spec).allclose(build_mask(spec.with_degree(spec.degree + 1)), atol)


def deslauriers_dubuc_mask(n: int) -> Mask:
    """Interpolatory ``2n``-point scheme (Lagrange odd rule, identity even rule)."""
    nodes = [Fraction(2 * l - 1) for l in range(1 - n, n + 1)]
    odd = []
    for i, xi in enumerate(nodes):
        c = Fraction(1)
        for k, xk in enumerate(nodes):
            if k != i:
                c *= (0 - xk) / (xi - xk)
        odd.append(c)
    even = [Fraction(int(l == 0)) for l in range(1 - n, n)]
    return Mask.from_exact(even, odd, 1 - n, 1 - n)
