"""Refinement of scalar and vector sequences with a subdivision mask.

Samples are stored along axis 0 of ``values``; trailing axes (curve
coordinates, Monte-Carlo trials) are refined independently.  The refined
sample ``j`` at level ``k`` sits at ``x0 + j * h / 2**k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import fftconvolve

from .errors import DataTooShort, LevelBudgetExceeded, MaskNotPositive, ValidationError
from .masks import Mask

DEFAULT_SAMPLE_CAP = 2 ** 22
_FFT_THRESHOLD = 48


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    CONSTANT = "constant"
    REFLECT = "reflect"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {"periodic": cls.PERIODIC, "constant": cls.CONSTANT,
                   "constantextend": cls.CONSTANT, "reflect": cls.REFLECT,
                   "reflectextend": cls.REFLECT}
        if text not in aliases:
            raise ValidationError(f"unknown boundary policy {value!r}")
        return aliases[text]


@dataclass(frozen=True, eq=False)
class RefinableData:
    values: np.ndarray
    boundary: Boundary = Boundary.CONSTANT
    level: int = 0
    h: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 0:
            raise ValidationError("data must be a sequence")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "boundary", Boundary.parse(self.boundary))

    def __len__(self):
        return self.values.shape[0]

    @property
    def spacing(self):
        return self.h / 2 ** self.level

    def abscissae(self):
        return self.x0 + np.arange(len(self)) * self.spacing


def _as_data(data, boundary=None):
    if isinstance(data, RefinableData):
        return data
    return RefinableData(np.asarray(data, float), boundary or Boundary.CONSTANT)


def _correlate(padded, coeffs, start, count):
    """``out[j] = sum_k coeffs[k] * padded[start + j + k]`` for ``j < count``."""
    m = len(coeffs)
    segment = padded[start:start + count + m - 1]
    if m > _FFT_THRESHOLD and count > _FFT_THRESHOLD:
        kernel = np.asarray(coeffs[::-1]).reshape((m,) + (1,) * (segment.ndim - 1))
        return fftconvolve(segment, kernel, mode="valid", axes=0)
    out = np.zeros((count,) + segment.shape[1:])
    for k, c in enumerate(coeffs):
        if c != 0:
            out += c * segment[k:k + count]
    return out


def refine_once(data, mask: Mask, boundary=None) -> RefinableData:
    """One subdivision step ``out[2j+i] = sum_l a^i_l in[j+l]``.

    Periodic data of length ``N`` gives ``2N`` samples; the extension
    policies give ``2N - 1`` samples (no point past the last input).
    """
    data = _as_data(data, boundary)
    f = data.values
    size = f.shape[0]
    ef, of = mask.even_first, mask.odd_first
    left = max(0, -ef, -of)
    right = max(0, ef + len(mask.even) - 1, of + len(mask.odd) - 1)
    pad = [(left, right)] + [(0, 0)] * (f.ndim - 1)
    if data.boundary is Boundary.PERIODIC:
        longest = max(len(mask.even), len(mask.odd))
        if size < longest:
            raise DataTooShort(f"periodic data needs at least {longest} samples, got {size}")
        padded = np.pad(f, pad, mode="wrap")
        n_even, n_odd = size, size
    else:
        if size < 2:
            raise DataTooShort("at least 2 samples are needed")
        mode = "edge" if data.boundary is Boundary.CONSTANT else "reflect"
        padded = np.pad(f, pad, mode=mode)
        n_even, n_odd = size, size - 1
    out = np.empty((n_even + n_odd,) + f.shape[1:])
    out[0::2] = _correlate(padded, mask.even, left + ef, n_even)
    out[1::2] = _correlate(padded, mask.odd, left + of, n_odd)
    return replace(data, values=out, level=data.level + 1)


def refine_k(data, mask: Mask, k: int, boundary=None, max_samples=DEFAULT_SAMPLE_CAP,
             keep_levels=False):
    """``k`` refinement steps; ``keep_levels=True`` returns every level."""
    if int(k) != k or k < 0:
        raise ValidationError(f"levels must be a nonnegative integer, got {k}")
    data = _as_data(data, boundary)
    width = int(np.prod(data.values.shape[1:], dtype=int)) or 1
    final = len(data) * 2 ** int(k)
    if final * width > max_samples:
        raise LevelBudgetExceeded(
            f"{k} levels on {len(data)} samples would produce {final * width} values "
            f"(cap {max_samples})")
    levels = [data]
    for _ in range(int(k)):
        data = refine_once(data, mask)
        levels.append(data)
    return levels if keep_levels else data


def basic_limit_samples(mask: Mask, k: int, max_samples=DEFAULT_SAMPLE_CAP):
    """Refine ``delta_0`` ``k`` times; returns ``(x, values)`` on the ``2**-k`` grid."""
    if k < 1:
        raise ValidationError("basic limit sampling needs k >= 1")
    radius = mask.support_radius + 2
    delta = np.zeros(2 * radius + 1)
    delta[radius] = 1.0
    data = RefinableData(delta, Boundary.CONSTANT, x0=-float(radius))
    out = refine_k(data, mask, k, max_samples=max_samples)
    return out.abscissae(), out.values


def _slack(values):
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 1.0)
    return 4 * np.finfo(float).eps * scale * 16


def overshoot(data, mask: Mask, k: int, boundary=None):
    """Largest excursion of the refined values outside ``[min(data), max(data)]``."""
    data = _as_data(data, boundary)
    out = refine_k(data, mask, k).values
    lo, hi = float(np.min(data.values)), float(np.max(data.values))
    return max(0.0, lo - float(np.min(out)), float(np.max(out)) - hi)


def check_no_overshoot(data, mask: Mask, k: int, boundary=None) -> bool:
    """True if ``k`` levels stay inside the data range (nonnegative masks only).

    A rounding slack of a few ulps of the data scale is allowed.
    """
    if not mask.is_nonnegative():
        raise MaskNotPositive("overshoot verdict is only defined for nonnegative masks")
    data = _as_data(data, boundary)
    return overshoot(data, mask, k) <= _slack(data.values)


def is_nondecreasing(values, slack=0.0) -> bool:
    return bool(np.all(np.diff(np.asarray(values, float), axis=0) >= -slack))


def check_monotone_preserved(data, mask: Mask, k: int, boundary=None) -> bool:
    """True if every level of ``k`` refinements of non-decreasing data is non-decreasing."""
    data = _as_data(data, boundary)
    if not is_nondecreasing(data.values):
        raise ValidationError("input data must be non-decreasing")
    span = float(np.ptp(data.values)) or 1.0
    slack = 1e-12 * span
    return all(is_nondecreasing(level.values, slack)
               for level in refine_k(data, mask, k, keep_levels=True))


def transition_width(x, values, lo_frac=0.1, hi_frac=0.9):
    """Length of the abscissa interval where a step rises from 10% to 90% of its jump."""
    values = np.asarray(values, float)
    lo, hi = values.min(), values.max()
    a = lo + lo_frac * (hi - lo)
    b = lo + hi_frac * (hi - lo)
    inside = np.nonzero((values > a) & (values < b))[0]
    if inside.size == 0:
        return 0.0
    return float(x[inside[-1]] - x[inside[0]])


def variance_ratio(mask: Mask, trials=10_000, length=64, seed=0, sigma=1.0):
    """Monte-Carlo variance reduction of one refinement on white noise.

    Returns ``(ratio, standard_error)`` for each rule as dicts keyed ``even``
    and ``odd``; the ratio estimates ``||a^i||_2^2``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.normal(0.0, sigma, size=(length, trials))
    out = refine_once(RefinableData(noise, Boundary.PERIODIC), mask).values
    result = {}
    for name, rows in (("even", out[0::2]), ("odd", out[1::2])):
        sample = rows[length // 2]  # one position, independent across trials
        var = float(np.var(sample, ddof=1))
        ratio = var / sigma ** 2
        # standard error of a normal sample variance
        se = ratio * np.sqrt(2.0 / (trials - 1))
        result[name] = (ratio, float(se))
    return result
