import json

import numpy as np
import pytest

from wlpr import io as wio
from wlpr.engine import RefinableData, refine_k
from wlpr.errors import ConfigError, ValidationError
from wlpr.convergence import SchemeFamily, certify_family
from wlpr.masks import SchemeSpec, build_mask


@pytest.mark.parametrize("kernel,lam,d,exact", [("tria", 2.5, 0, True), ("rect", 9.5, 3, True),
                                                ("trwt", 4.5, 2, True), ("exp:3", 5.8, 1, False),
                                                ("pq:1.5:0.7", 7.2, 3, False)])
def test_mask_roundtrip(kernel, lam, d, exact):
    mask = build_mask(SchemeSpec(kernel, lam, d), exact=exact)
    back = wio.mask_from_json(wio.mask_to_json(mask))
    assert back.is_exact == exact
    if exact:
        assert back.exact_even == mask.exact_even and back.exact_odd == mask.exact_odd
    assert np.array_equal(back.even, mask.even) and np.array_equal(back.odd, mask.odd)
    assert (back.even_first, back.odd_first) == (mask.even_first, mask.odd_first)
    assert back.spec == mask.spec and back.situation is mask.situation


def test_mask_json_layout():
    doc = json.loads(wio.mask_to_json(build_mask(SchemeSpec("tria", 2.5, 0), exact=True)))
    assert doc["spec"] == {"kernel": "tria", "lambda": 2.5, "degree": 0}
    assert doc["situation"] == "even_longer"
    assert doc["first_index"] == {"even": -1, "odd": 0}
    assert doc["exact"]["even"] == [[1, 7], [5, 7], [1, 7]]


def test_mask_json_errors():
    with pytest.raises(ConfigError):
        wio.mask_from_json("{")
    doc = json.loads(wio.mask_to_json(build_mask(SchemeSpec("tria", 2.5, 0))))
    doc["situation"] = "odd_longer"
    with pytest.raises(ConfigError):
        wio.mask_from_dict(doc)
    del doc["first_index"]
    with pytest.raises(ConfigError):
        wio.mask_from_dict(doc)


def test_csv_parse_variants():
    values, meta = wio.parse_csv("x,y\n1,2\n3,4\n")
    assert values.shape == (2, 2)
    values, meta = wio.parse_csv("# level: 2\n1.5\n2.5\n")
    assert values.tolist() == [1.5, 2.5] and meta["level"] == "2"
    with pytest.raises(ValidationError):
        wio.parse_csv("1,2,3\n")
    with pytest.raises(ValidationError):
        wio.parse_csv("x\n")
    with pytest.raises(ValidationError):
        wio.parse_csv("1\nabc\n")


def test_refined_csv_roundtrip(tmp_path):
    data = RefinableData(np.arange(12.0) ** 2, "constant", h=0.25, x0=-1.0)
    out = refine_k(data, build_mask(SchemeSpec("epan", 5.8, 2)), 3)
    path = tmp_path / "r.csv"
    wio.write_data(out, path, {"rng": "none"}, timestamp=False)
    back = wio.read_data(path)
    assert np.array_equal(back.values, out.values)
    assert back.level == 3 and back.h == 0.25 and back.x0 == -1.0
    assert np.array_equal(back.abscissae(), out.abscissae())
    text = path.read_text()
    assert "# rng: none" in text and "abscissa,x" in text
    # only the created line differs between runs
    a = wio.format_csv(out).splitlines()[1:]
    b = wio.format_csv(out).splitlines()[1:]
    assert a == b


def test_report_json(tmp_path):
    report = certify_family(SchemeFamily("rect", 3), 6)
    path = tmp_path / "rep.json"
    wio.write_report(report, path)
    doc = json.loads(path.read_text())
    assert doc["max_norm_exact"] == "29/42"
    assert doc["norms"]["4"] == pytest.approx(29 / 42)
    assert json.loads(wio.report_to_json({"x": float("nan")})) == {"x": None}
