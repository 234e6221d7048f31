"""CSV and JSON readers/writers for every file format the tools exchange.

Formats (UTF-8, '.' decimal point, LF line endings on output):

* macro CSV (wide): header ``id,<var>_min,<var>_max,...`` with one
  min/max column pair per variable;
* micro CSV: header ``id,<var1>,...,<varp>``, numeric body;
* weight CSV: same header as micro, empty cells mark missing values;
* population params JSON: keys mu_c, sigma_cc, mu_r, sigma_rr and an
  optional cross_cr;
* matrix JSON: ``{"kind": k, "variables": [...], "matrix": [[...]]}``;
* matrix CSV: variable names as both header row and leading column;
* QQ band CSV: ``order,lo,hi,observed``.

Readers reject headers that do not match these shapes, reporting the
offending line. All writers are deterministic: identical inputs produce
identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from typing import IO

import numpy as np

from .errors import FormatError
from .intervals import IntervalDataset, MicroTable
from .microdata import WeightTable
from .model_select import FitReport, QqEnvelope
from .population import PopulationParams


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise FormatError(f"line {line_no}: cannot parse {what} value {token!r}")
    if not math.isfinite(v):
        raise FormatError(f"line {line_no}: non-finite {what} value {token!r}")
    return v


def _read_rows(f: IO[str]) -> list[list[str]]:
    rows = [row for row in csv.reader(f)]
    if not rows:
        raise FormatError("line 1: empty file")
    return rows


# -- macro (interval) CSV ---------------------------------------------------


def _parse_macro_header(header: list[str], allow_labels: bool):
    if not header or header[0] != "id":
        raise FormatError("line 1: macro header must start with 'id'")
    names: list[str] = []
    i = 1
    while i < len(header) and header[i].endswith("_min"):
        stem = header[i][: -len("_min")]
        if not stem:
            raise FormatError(f"line 1: empty variable name in column {i + 1}")
        if i + 1 >= len(header) or header[i + 1] != stem + "_max":
            raise FormatError(
                f"line 1: column {header[i]!r} is not followed by {stem + '_max'!r}"
            )
        names.append(stem)
        i += 2
    label_names = header[i:]
    for tok in label_names:
        if tok.endswith("_min") or tok.endswith("_max"):
            raise FormatError(f"line 1: dangling interval column {tok!r}")
    if label_names and not allow_labels:
        raise FormatError(
            f"line 1: unexpected column {label_names[0]!r}; expected <var>_min,<var>_max pairs"
        )
    if not names:
        raise FormatError("line 1: macro file declares no <var>_min,<var>_max pairs")
    return names, label_names


def _read_macro(f: IO[str], allow_labels: bool):
    rows = _read_rows(f)
    names, label_names = _parse_macro_header(rows[0], allow_labels=allow_labels)
    width = 1 + 2 * len(names) + len(label_names)
    ids: list[str] = []
    lower = np.empty((len(rows) - 1, len(names)))
    upper = np.empty((len(rows) - 1, len(names)))
    labels: dict[str, list[str]] = {name: [] for name in label_names}
    if len(rows) == 1:
        raise FormatError("line 2: macro file has a header but no rows")
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise FormatError(f"line {r}: expected {width} fields, found {len(row)}")
        ids.append(row[0])
        for j in range(len(names)):
            a = _parse_float(row[1 + 2 * j], r, f"{names[j]}_min")
            b = _parse_float(row[2 + 2 * j], r, f"{names[j]}_max")
            if a > b:
                raise FormatError(
                    f"line {r}: {names[j]}_min {a} exceeds {names[j]}_max {b}"
                )
            lower[r - 2, j] = a
            upper[r - 2, j] = b
        for li, name in enumerate(label_names):
            labels[name].append(row[1 + 2 * len(names) + li])
    try:
        dataset = IntervalDataset.from_limits(ids, names, lower, upper)
    except ValueError as e:
        raise FormatError(str(e))
    return dataset, labels


def read_macro_csv(f: IO[str]) -> IntervalDataset:
    """Read a strict macro CSV (no extra columns tolerated)."""
    return _read_macro(f, allow_labels=False)[0]


def read_macro_csv_with_labels(f: IO[str]):
    """Read a macro CSV allowing trailing categorical label columns.

    Returns (IntervalDataset, labels) where labels maps each extra column
    name to its per-object values.
    """
    return _read_macro(f, allow_labels=True)


def _quote_row(row: list[str]) -> list[str]:
    out = []
    for tok in row:
        if "," in tok or '"' in tok or "\n" in tok:
            out.append('"' + tok.replace('"', '""') + '"')
        else:
            out.append(tok)
    return out


def write_macro_csv(d: IntervalDataset, f: IO[str]) -> None:
    header = ["id"]
    for name in d.variable_names:
        header += [f"{name}_min", f"{name}_max"]
    f.write(",".join(header) + "\n")
    lower, upper = d.limits()
    for i, oid in enumerate(d.object_ids):
        fields = [oid]
        for j in range(d.p):
            fields += [_fmt(lower[i, j]), _fmt(upper[i, j])]
        f.write(",".join(_quote_row(fields)) + "\n")


# -- micro CSV ---------------------------------------------------------------


def _parse_plain_header(header: list[str], kind: str) -> list[str]:
    if not header or header[0] != "id":
        raise FormatError(f"line 1: {kind} header must start with 'id'")
    names = header[1:]
    if not names:
        raise FormatError(f"line 1: {kind} file declares no variables")
    for tok in names:
        if not tok:
            raise FormatError(f"line 1: empty variable name in {kind} header")
    return names


def read_micro_csv(f: IO[str]) -> MicroTable:
    rows = _read_rows(f)
    names = _parse_plain_header(rows[0], "micro")
    if len(rows) == 1:
        raise FormatError("line 2: micro file has a header but no rows")
    ids: list[str] = []
    values = np.empty((len(rows) - 1, len(names)))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 1 + len(names):
            raise FormatError(f"line {r}: expected {1 + len(names)} fields, found {len(row)}")
        ids.append(row[0])
        for j, tok in enumerate(row[1:]):
            values[r - 2, j] = _parse_float(tok, r, names[j])
    try:
        return MicroTable(ids, names, values)
    except ValueError as e:
        raise FormatError(str(e))


def write_micro_csv(m: MicroTable, f: IO[str]) -> None:
    f.write(",".join(["id", *m.variable_names]) + "\n")
    for i, gid in enumerate(m.group_ids):
        fields = [gid, *(_fmt(v) for v in m.values[i])]
        f.write(",".join(_quote_row(fields)) + "\n")


def write_weight_csv(w: WeightTable, f: IO[str]) -> None:
    """Weight table CSV; missing cells are written empty."""
    f.write(",".join(["id", *w.variable_names]) + "\n")
    for i, gid in enumerate(w.group_ids):
        fields = [gid]
        for v in w.values[i]:
            fields.append("" if math.isnan(v) else _fmt(v))
        f.write(",".join(_quote_row(fields)) + "\n")


# -- population params JSON --------------------------------------------------

_PARAM_KEYS = {"mu_c", "sigma_cc", "mu_r", "sigma_rr", "cross_cr"}


def read_params_json(f: IO[str]) -> PopulationParams:
    try:
        doc = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}")
    if not isinstance(doc, dict):
        raise FormatError("params JSON must be an object")
    unknown = set(doc) - _PARAM_KEYS
    if unknown:
        raise FormatError(f"unknown params keys: {sorted(unknown)}")
    missing = {"mu_c", "sigma_cc", "mu_r", "sigma_rr"} - set(doc)
    if missing:
        raise FormatError(f"missing params keys: {sorted(missing)}")
    try:
        return PopulationParams(
            mu_c=doc["mu_c"],
            sigma_cc=doc["sigma_cc"],
            mu_r=doc["mu_r"],
            sigma_rr=doc["sigma_rr"],
            cross_cr=doc.get("cross_cr"),
        )
    except ValueError as e:
        raise FormatError(str(e))


def write_params_json(params: PopulationParams, f: IO[str]) -> None:
    doc = {
        "mu_c": params.mu_c.tolist(),
        "sigma_cc": params.sigma_cc.tolist(),
        "mu_r": params.mu_r.tolist(),
        "sigma_rr": params.sigma_rr.tolist(),
    }
    if params.cross_cr is not None:
        doc["cross_cr"] = params.cross_cr.tolist()
    json.dump(doc, f, indent=2)
    f.write("\n")


# -- matrices ----------------------------------------------------------------


def matrix_json_dict(kind: int, variables, matrix: np.ndarray) -> dict:
    return {
        "kind": int(kind),
        "variables": list(variables),
        "matrix": np.asarray(matrix).tolist(),
    }


def write_matrix_csv(variables, matrix: np.ndarray, f: IO[str]) -> None:
    matrix = np.asarray(matrix)
    f.write(",".join(["", *variables]) + "\n")
    for name, row in zip(variables, matrix):
        f.write(",".join([name, *(_fmt(v) for v in row)]) + "\n")


def write_qq_band_csv(env: QqEnvelope, f: IO[str]) -> None:
    f.write("order,lo,hi,observed\n")
    for i in range(env.observed.size):
        f.write(
            f"{i + 1},{_fmt(env.lower[i])},{_fmt(env.upper[i])},{_fmt(env.observed[i])}\n"
        )


# -- fit report JSON ----------------------------------------------------------


def fit_report_json_dict(report: FitReport) -> dict:
    def opt(x):
        return None if x is None else float(x)

    cands = []
    for c in report.candidates:
        cands.append(
            {
                "model": str(c.model.family),
                "ad": opt(c.ad_statistic),
                "p": opt(c.p_value),
                "exceedance": {k: float(v) for k, v in c.exceedance.items()},
            }
        )
    corr = [
        [None if math.isnan(v) else float(v) for v in row]
        for row in report.scenario_correlations
    ]
    return {
        "candidates": cands,
        "scenario_correlations": corr,
        "recommended": str(report.recommended.family),
        "recommended_kind": report.recommended_kind,
        "scenario2_evidence": report.scenario2_evidence,
        "variables": list(report.variable_names),
    }


def write_fit_report_json(report: FitReport, f: IO[str]) -> None:
    json.dump(fit_report_json_dict(report), f, indent=2)
    f.write("\n")
