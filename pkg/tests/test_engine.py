import numpy as np
import pytest

from wlpr import datasets
from wlpr.engine import (Boundary, RefinableData, basic_limit_samples, check_monotone_preserved,
                         check_no_overshoot, is_nondecreasing, overshoot, refine_k, refine_once,
                         variance_ratio)
from wlpr.errors import DataTooShort, LevelBudgetExceeded, MaskNotPositive, ValidationError
from wlpr.masks import SchemeSpec, build_mask, deslauriers_dubuc_mask
from wlpr.metrics import denoise_factor


def mask_of(kernel, lam, d):
    return build_mask(SchemeSpec(kernel, lam, d))


def test_dd2_gives_linear_interpolation():
    # the DD2 basic limit is the hat function max(0, 1 - |x|)
    x, v = basic_limit_samples(deslauriers_dubuc_mask(1), 6)
    assert np.allclose(v, np.maximum(0, 1 - np.abs(x)), atol=1e-15)


def test_refine_once_by_hand():
    mask = mask_of("tria", 2.5, 0)  # even [1,5,1]/7, odd [1,1]/2
    f = np.array([0.0, 7.0, 14.0, 0.0])
    out = refine_once(RefinableData(f, Boundary.PERIODIC), mask).values
    assert len(out) == 8
    assert out[2] == pytest.approx((0 + 35 + 14) / 7)
    assert out[3] == pytest.approx(10.5)
    assert out[0] == pytest.approx((0 + 0 + 7) / 7)  # wraps to f[-1] = 0


def test_lengths():
    mask = mask_of("rect", 3.7, 2)
    f = np.arange(10.0)
    assert len(refine_once(RefinableData(f, Boundary.PERIODIC), mask)) == 20
    assert len(refine_once(RefinableData(f, Boundary.CONSTANT), mask)) == 19
    assert len(refine_once(RefinableData(f, Boundary.REFLECT), mask)) == 19
    out = refine_k(RefinableData(f, Boundary.PERIODIC), mask, 3)
    assert len(out) == 80 and out.level == 3


def test_linearity():
    rng = np.random.default_rng(1)
    mask = mask_of("trwt", 5.8, 3)
    a, b = rng.normal(size=40), rng.normal(size=40)
    ra = refine_k(RefinableData(a, "periodic"), mask, 3).values
    rb = refine_k(RefinableData(b, "periodic"), mask, 3).values
    rab = refine_k(RefinableData(2 * a - 3 * b, "periodic"), mask, 3).values
    assert np.allclose(rab, 2 * ra - 3 * rb, atol=1e-12)


def test_vector_data_componentwise():
    mask = mask_of("epan", 4.5, 1)
    f = datasets.star_samples()
    both = refine_once(RefinableData(f, "periodic"), mask).values
    x = refine_once(RefinableData(f[:, 0], "periodic"), mask).values
    assert np.array_equal(both[:, 0], x)


def test_sup_norm_bound():
    # ||S f||_inf <= max(||a0||_1, ||a1||_1) ||f||_inf
    rng = np.random.default_rng(2)
    for kernel, lam, d in [("rect", 9.5, 3), ("tcub", 6.5, 2), ("bisq", 3.7, 0)]:
        mask = mask_of(kernel, lam, d)
        f = rng.uniform(-1, 1, 64)
        out = refine_once(RefinableData(f, "periodic"), mask).values
        bound = max(np.abs(mask.even).sum(), np.abs(mask.odd).sum()) * np.abs(f).max()
        assert np.abs(out).max() <= bound + 1e-14


def test_polynomial_reproduction_in_refinement():
    # cubic samples stay on the cubic for d=3 (interior, constant extension)
    mask = mask_of("trwt", 5.8, 3)
    j = np.arange(-30, 31, dtype=float)
    f = 0.01 * j ** 3 - j ** 2 + 2
    out = refine_k(RefinableData(f, "constant", h=1.0, x0=-30.0), mask, 2)
    x = out.abscissae()
    inner = np.abs(x) < 20
    assert np.allclose(out.values[inner], (0.01 * x ** 3 - x ** 2 + 2)[inner], rtol=1e-10)


def test_constant_data():
    for boundary in Boundary:
        out = refine_k(RefinableData(np.full(12, 3.25), boundary), mask_of("rect", 5.8, 3), 4)
        assert np.allclose(out.values, 3.25, atol=1e-12)


def test_errors():
    mask = mask_of("rect", 9.5, 0)
    with pytest.raises(DataTooShort):
        refine_once(RefinableData(np.ones(5), "periodic"), mask)
    with pytest.raises(DataTooShort):
        refine_once(RefinableData(np.ones(1), "constant"), mask)
    with pytest.raises(LevelBudgetExceeded):
        refine_k(RefinableData(np.ones(50), "periodic"), mask, 20)
    with pytest.raises(ValidationError):
        refine_k(RefinableData(np.ones(50), "periodic"), mask, -1)
    with pytest.raises(ValidationError):
        Boundary.parse("mirror")


def test_overshoot_requires_nonnegative():
    x, f = datasets.sine_step_samples()
    data = RefinableData(f, "constant", h=x[1])
    with pytest.raises(MaskNotPositive):
        check_no_overshoot(data, mask_of("rect", 5.8, 3), 3)
    assert overshoot(data, mask_of("rect", 5.8, 3), 5) > 0.01


def test_monotone_input_check():
    with pytest.raises(ValidationError):
        check_monotone_preserved(RefinableData([1.0, 0.0, 2.0]), mask_of("rect", 2.5, 0), 1)
    assert is_nondecreasing([1, 1, 2])


@pytest.mark.parametrize("kernel,lam,d", [("rect", 4.5, 0), ("trwt", 3.7, 1), ("epan", 9.5, 0)])
def test_variance_ratio_within_three_se(kernel, lam, d):
    mask = mask_of(kernel, lam, d)
    res = variance_ratio(mask, trials=10_000, seed=11)
    for rule, coeffs in (("even", mask.even), ("odd", mask.odd)):
        ratio, se = res[rule]
        assert abs(ratio - float(coeffs @ coeffs)) < 3 * se
    assert max(res["even"][0], res["odd"][0]) == pytest.approx(float(denoise_factor(mask)),
                                                               rel=0.05)


def test_abscissae():
    data = RefinableData(np.zeros(5), "constant", level=2, h=0.5, x0=1.0)
    assert np.allclose(data.abscissae(), 1.0 + np.arange(5) * 0.125)
