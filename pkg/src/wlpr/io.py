"""Mask JSON, data CSV and report JSON serialization.

Masks are written in natural labelling with the situation flag, so a reader
can rebuild either view.  Exact masks carry ``[numerator, denominator]``
pairs next to the float values; floats are written with ``repr`` precision,
so both paths round-trip bit for bit.
"""
from __future__ import annotations

import csv
import datetime as _dt
import io as _io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from .engine import Boundary, RefinableData
from .errors import ConfigError, ValidationError
from .kernels import parse_kernel
from .masks import Mask, SchemeSpec, Situation

MASK_FORMAT = "wlpr-mask/1"


# -- masks ---------------------------------------------------------------------

def _pair(value: Fraction):
    return [value.numerator, value.denominator]


def _unpair(item) -> Fraction:
    if not (isinstance(item, (list, tuple)) and len(item) == 2):
        raise ValidationError(f"exact coefficient must be [num, den], got {item!r}")
    num, den = item
    if not (isinstance(num, int) and isinstance(den, int)) or den == 0:
        raise ValidationError(f"bad exact coefficient {item!r}")
    return Fraction(num, den)


def spec_to_dict(spec: Optional[SchemeSpec]):
    if spec is None:
        return None
    if spec.kernel.family == "custom":
        raise ValidationError("custom kernels cannot be serialized")
    return {"kernel": str(spec.kernel), "lambda": spec.lam, "degree": spec.degree}


def spec_from_dict(data) -> Optional[SchemeSpec]:
    if data is None:
        return None
    try:
        return SchemeSpec(parse_kernel(data["kernel"]), float(data["lambda"]), int(data["degree"]))
    except KeyError as exc:
        raise ConfigError(f"scheme spec is missing {exc.args[0]!r}") from None


def mask_to_dict(mask: Mask) -> Dict:
    out = {
        "format": MASK_FORMAT,
        "spec": spec_to_dict(mask.spec),
        "situation": mask.situation.value,
        "first_index": {"even": mask.even_first, "odd": mask.odd_first},
        "even": [float(v) for v in mask.even],
        "odd": [float(v) for v in mask.odd],
    }
    if mask.is_exact:
        out["exact"] = {"even": [_pair(v) for v in mask.exact_even],
                        "odd": [_pair(v) for v in mask.exact_odd]}
    return out


def mask_from_dict(data: Dict) -> Mask:
    try:
        first = data["first_index"]
        spec = spec_from_dict(data.get("spec"))
        exact = data.get("exact")
        if exact is not None:
            mask = Mask.from_exact([_unpair(v) for v in exact["even"]],
                                   [_unpair(v) for v in exact["odd"]],
                                   int(first["even"]), int(first["odd"]), spec)
        else:
            mask = Mask(np.array(data["even"], float), np.array(data["odd"], float),
                        int(first["even"]), int(first["odd"]), spec)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed mask document: {exc}") from None
    stated = data.get("situation")
    if stated is not None and Situation(stated) is not mask.situation:
        raise ConfigError("situation flag does not match the sub-mask index ranges")
    return mask


def mask_to_json(mask: Mask) -> str:
    return json.dumps(mask_to_dict(mask), indent=2)


def mask_from_json(text: str) -> Mask:
    try:
        return mask_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid mask JSON: {exc}") from None


def save_mask(mask: Mask, path) -> None:
    Path(path).write_text(mask_to_json(mask) + "\n")


def load_mask(path) -> Mask:
    return mask_from_json(Path(path).read_text())


# -- reports -------------------------------------------------------------------

def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value"):  # enums
        return obj.value
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _clean(obj):
    # JSON has no NaN or infinity
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def report_to_json(report) -> str:
    if hasattr(report, "to_dict"):
        report = report.to_dict()
    return json.dumps(_clean(json.loads(json.dumps(report, default=_default))),
                      indent=2, sort_keys=True)


def write_report(report, path) -> None:
    Path(path).write_text(report_to_json(report) + "\n")


# -- data CSV ------------------------------------------------------------------

def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def parse_csv(text: str):
    """Parse sample rows; returns ``(values, metadata)``.

    ``#`` lines are metadata (``# key: value``).  An optional header row is
    detected by non-numeric fields.  A leading ``abscissa`` column, as
    written by :func:`format_csv`, is dropped.
    """
    meta, rows, header = {}, [], None
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, sep, value = stripped[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if header is None and not rows and not all(_is_number(f) for f in fields):
            header = [f.lower() for f in fields]
            continue
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise ValidationError(f"non-numeric data row: {line!r}") from None
    if not rows:
        raise ValidationError("no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("rows have different numbers of columns")
    values = np.array(rows)
    if header is not None and header and header[0] == "abscissa":
        values = values[:, 1:]
        width -= 1
    if width not in (1, 2):
        raise ValidationError(f"expected 1 or 2 data columns, got {width}")
    return (values[:, 0] if width == 1 else values), meta


def read_csv(path):
    return parse_csv(Path(path).read_text())


def read_data(path, boundary=None, h=None, x0=None) -> RefinableData:
    """Load a CSV file as :class:`RefinableData`; metadata fills unset fields."""
    values, meta = read_csv(path)
    return RefinableData(values, boundary or meta.get("boundary", Boundary.CONSTANT),
                         int(meta.get("level", 0)),
                         float(h if h is not None else meta.get("h", 1.0)),
                         float(x0 if x0 is not None else meta.get("x0", 0.0)))


def format_csv(data: RefinableData, extra: Optional[Dict] = None, timestamp=True) -> str:
    """CSV with ``#`` metadata lines and an ``abscissa`` column.

    Apart from the optional ``created`` line the output is a pure function of
    the data and ``extra``.
    """
    buf = _io.StringIO()
    if timestamp:
        buf.write(f"# created: {_dt.datetime.now(_dt.timezone.utc).isoformat()}\n")
    meta = {"level": data.level, "h": repr(float(data.h)), "x0": repr(float(data.x0)),
            "spacing": repr(float(data.spacing)), "boundary": data.boundary.value,
            "samples": len(data)}
    meta.update(extra or {})
    for key, value in meta.items():
        buf.write(f"# {key}: {value}\n")
    values = data.values.reshape(len(data), -1)
    cols = ["x"] if values.shape[1] == 1 else ["x", "y"][:values.shape[1]]
    if values.shape[1] > 2:
        cols = [f"c{i}" for i in range(values.shape[1])]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["abscissa"] + cols)
    for x, row in zip(data.abscissae(), values):
        writer.writerow([repr(float(x))] + [repr(float(v)) for v in row])
    return buf.getvalue()


def write_data(data: RefinableData, path, extra=None, timestamp=True) -> None:
    Path(path).write_text(format_csv(data, extra, timestamp))


def write_table(rows: Sequence[Dict], columns: Iterable[str], path) -> None:
    """Plain CSV of dict rows, e.g. Pareto points."""
    columns = list(columns)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


# -- configs ---------------------------------------------------------------------

def load_config(path) -> Dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid config JSON {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data
