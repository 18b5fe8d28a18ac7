import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate

from wlpr.errors import ValidationError
from wlpr.kernels import WeightKernel, parse_kernel
from wlpr.masks import SchemeSpec, build_mask, deslauriers_dubuc_mask
from wlpr.metrics import (ParetoPoint, approx_denoise_scores, capability_scores, denoise_factor,
                          dominates, error_exponent, eta_components, eta_constant, exp_points,
                          h_profile, is_dominated_by_any, mark_dominated, moment_scores,
                          pareto_front, predicted_approx_error, relative_to_rect)

CAPABILITY = [
    ("rect", 0, 1 / 3, 1 / 2),
    ("rect", 2, 3 / 35, 9 / 8),
    ("trwt", 2, 3 / 143, 3780 / 2431),
    ("epan", 0, 1 / 5, 3 / 5),
]


@pytest.mark.parametrize("kernel,d,approx,l2sq", CAPABILITY)
def test_capability_values(kernel, d, approx, l2sq):
    a, b = approx_denoise_scores(kernel, d)
    assert a == pytest.approx(approx, abs=1e-9)
    assert b == pytest.approx(l2sq, abs=1e-9)
    a2, b2 = moment_scores(kernel, d)
    assert a2 == pytest.approx(approx, abs=1e-12) and b2 == pytest.approx(l2sq, abs=1e-12)


def test_odd_degree_uses_even_representative():
    assert approx_denoise_scores("tria", 1) == approx_denoise_scores("tria", 0)
    assert error_exponent(3) == 4 and error_exponent(1) == 2
    with pytest.raises(ValidationError):
        error_exponent(4)


def test_h_profile_is_normalized():
    for kernel in ["rect", "epan", "exp:4", "pq:4:5"]:
        for d in (0, 2):
            H = h_profile(kernel, d)
            total = integrate.quad(lambda t: float(H(t)), -1, 1)[0]
            assert total == pytest.approx(1.0, abs=1e-10)
            if d == 2:
                second = integrate.quad(lambda t: float(H(t)) * t * t, -1, 1)[0]
                assert abs(second) < 1e-10


def test_finite_n_approaches_asymptotic():
    # n * ||a^i||_2^2 -> ||H||_2^2
    kernel = "trwt"
    _, l2sq = approx_denoise_scores(kernel, 2)
    mask = build_mask(SchemeSpec(kernel, 2 * 400 - 0.5, 2))
    assert 400 * float(mask.odd @ mask.odd) == pytest.approx(l2sq, rel=1e-2)


def test_eta_and_denoise_exact():
    # DD2: even delta, odd [1/2, 1/2]
    s0, s1 = eta_components(deslauriers_dubuc_mask(1), 1)
    assert s0 == 0 and s1 == F(1, 4)
    assert eta_constant(deslauriers_dubuc_mask(1), 1) == F(1, 4)
    assert eta_constant(deslauriers_dubuc_mask(1), 0) == 0
    mask = build_mask(SchemeSpec("rect", 3.7, 0), exact=True)
    assert eta_components(mask, 1) == (F(2, 3), F(5, 4))
    assert denoise_factor(mask) == F(1, 3)
    assert denoise_factor(build_mask(SchemeSpec("rect", 3.7, 3), exact=True)) == 1
    assert denoise_factor(build_mask(SchemeSpec("rect", 9.5, 3), exact=True)) == F(59, 231)


def test_capability_scores_bundle():
    mask = build_mask(SchemeSpec("epan", 5.8, 0))
    sc = capability_scores(mask)
    assert sc.approx_const == pytest.approx(0.2)
    assert set(sc.to_dict()) == {"eta", "approx_const", "denoise_factor", "h_l2sq"}


def test_predicted_error():
    val = predicted_approx_error("rect", 3, 1e-2, 13, math.pi ** 4)
    assert val == pytest.approx((0.13) ** 4 * (3 / 35) * math.pi ** 4 / 24)
    with pytest.raises(ValidationError):
        predicted_approx_error("rect", 3, 0.0, 13, 1.0)


def test_relative_to_rect():
    ra, rb = relative_to_rect("epan", 2)
    assert ra == pytest.approx(5 / 9, abs=1e-12)  # -44.44 %
    assert rb == pytest.approx(10 / 9, abs=1e-12)  # +11.11 %


def test_dominates():
    assert dominates((1, 1), (1, 2))
    assert not dominates((1, 1), (1, 1))
    assert not dominates((0, 3), (1, 2))


def test_mark_dominated_against_brute_force():
    rng = np.random.default_rng(5)
    pts = [ParetoPoint(0, 0, float(a), float(b)) for a, b in rng.integers(0, 15, (300, 2))]
    mark_dominated(pts)
    for p in pts:
        brute = any(dominates(o.objectives, p.objectives) for o in pts)
        assert p.dominated == brute


def test_pareto_front_small():
    pts = pareto_front(d=2, grid_steps=12, extra=[(2, 1), (4, 5)])
    labels = {p.label: p for p in pts if p.label}
    assert not labels["epan"].dominated and not labels["pq:4:5"].dominated
    assert not labels["rect"].dominated
    assert any(p.dominated for p in pts)
    exps = exp_points(2, [5.0])
    assert is_dominated_by_any(exps[0], pts)


def test_closed_and_quadrature_scores_agree():
    for kernel in [WeightKernel.power(3.3, 1.7), WeightKernel.exp(2.0), parse_kernel("tcub")]:
        for d in (0, 2):
            assert np.allclose(moment_scores(kernel, d, closed=True),
                               moment_scores(kernel, d, closed=False), rtol=1e-9)
