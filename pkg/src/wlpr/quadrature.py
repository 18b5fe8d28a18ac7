"""Thin wrapper around QUADPACK with a hard absolute-error contract."""
import warnings

from scipy import integrate

from .errors import QuadratureFailure

DEFAULT_TOL = 1e-12


def integrate_interval(func, a, b, tol=DEFAULT_TOL, points=None, limit=400):
    """Integrate ``func`` over ``[a, b]`` with absolute error at most ``tol``.

    Raises :class:`QuadratureFailure` when QUADPACK reports an error estimate
    above ``tol`` or gives up (subdivision limit, roundoff detection).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(func, a, b, epsabs=tol, epsrel=0.0,
                                        limit=limit, points=points)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"quadrature on [{a}, {b}] failed: {exc}") from None
    if not err <= tol:
        raise QuadratureFailure(
            f"quadrature on [{a}, {b}] reached error estimate {err:.3g} > {tol:.3g}")
    return value
