"""File formats: density specs, delimited tables, forecasts and reports.

Density specs are small JSON documents; tabular inputs are delimited text
(tab, comma or whitespace) with a header row.  All floating-point output is
rendered with 12 significant digits so identical runs produce identical
bytes.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .densities import ClassConditionalModel, GaussianDensity, GridDensity
from .engine import ForecastRecordSet
from .errors import InputError


def format_float(x: float) -> str:
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return "%.12g" % x


def _dump(value, pieces: list, indent: int):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            pieces.append(f'{pad}  "{key}": ')
            _dump(item, pieces, indent + 1)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, item in enumerate(value):
            pieces.append(pad + "  ")
            _dump(item, pieces, indent + 1)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(pad + "]")
    elif isinstance(value, bool):
        pieces.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        pieces.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        pieces.append(format_float(float(value)))
    elif value is None:
        pieces.append("null")
    else:
        pieces.append(json.dumps(str(value)))


def dumps_record(record: dict) -> str:
    """Serialize a report as JSON with 12-significant-digit floats."""
    pieces: list = []
    _dump(record, pieces, 0)
    pieces.append("\n")
    return "".join(pieces)


def table_text(header, rows) -> str:
    """Render a tab-separated table with formatted floats."""
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(
            format_float(c) if isinstance(c, (float, np.floating)) else str(c)
            for c in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- density specs ----------------------------------------------------------

def density_from_spec(spec: dict):
    try:
        kind = spec["kind"]
        if kind == "gaussian":
            return GaussianDensity(mu=float(spec["mu"]), sigma=float(spec["sigma"]))
        if kind == "histogram":
            return GridDensity(lo=float(spec["lo"]), hi=float(spec["hi"]),
                               mass=np.asarray(spec["mass"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed density spec: {exc}") from exc
    raise InputError(f"unknown density kind {spec.get('kind')!r}")


def load_model(path) -> ClassConditionalModel:
    """Read a class-conditional model spec: {"pos": .., "neg": .., "prior": ..}."""
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse model spec {path}: {exc}") from exc
    if not isinstance(spec, dict) or "pos" not in spec or "neg" not in spec:
        raise InputError("model spec needs 'pos' and 'neg' density entries")
    return ClassConditionalModel(d_pos=density_from_spec(spec["pos"]),
                                 d_neg=density_from_spec(spec["neg"]),
                                 prior=float(spec.get("prior", 0.5)))


# --- delimited tables -------------------------------------------------------

def _split_line(line: str, delimiter):
    if delimiter is None:
        return line.split()
    return line.split(delimiter)


def read_delimited(path):
    """Read a delimited text table, sniffing tab/comma/whitespace."""
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputError(f"{path}: empty table")
    delimiter = "\t" if "\t" in lines[0] else ("," if "," in lines[0] else None)
    header = [c.strip() for c in _split_line(lines[0], delimiter)]
    rows = [[c.strip() for c in _split_line(ln, delimiter)] for ln in lines[1:]]
    for row in rows:
        if len(row) != len(header):
            raise InputError(f"{path}: ragged row {row!r}")
    return header, rows


def read_forecasts(path) -> ForecastRecordSet:
    """Read forecast records from columns named eta_hat and outcome."""
    header, rows = read_delimited(path)
    try:
        i_eta, i_out = header.index("eta_hat"), header.index("outcome")
    except ValueError:
        raise InputError(
            f"{path}: needs 'eta_hat' and 'outcome' columns, got {header}") from None
    if not rows:
        raise InputError(f"{path}: no forecast records")
    try:
        pairs = [(float(r[i_eta]), float(r[i_out])) for r in rows]
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric forecast value: {exc}") from exc
    return ForecastRecordSet.from_pairs(pairs)


def read_dataset(path, label_col: str):
    """Read a feature table plus a declared label column.

    Returns (feature_names, X, y) with y mapped to -1/+1.
    """
    header, rows = read_delimited(path)
    if label_col in header:
        label_idx = header.index(label_col)
    elif label_col.lstrip("-").isdigit() and int(label_col) < len(header):
        label_idx = int(label_col)
    else:
        raise InputError(f"{path}: no label column {label_col!r} in {header}")
    if not rows:
        raise InputError(f"{path}: no data rows")
    try:
        data = np.array([[float(c) for c in row] for row in rows])
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric cell: {exc}") from exc
    raw = data[:, label_idx]
    values = set(np.unique(raw).tolist())
    if values <= {0.0, 1.0}:
        y = np.where(raw == 0.0, -1, 1)
    elif values <= {-1.0, 1.0}:
        y = raw.astype(int)
    else:
        raise InputError(f"{path}: labels must be -1/+1 or 0/1")
    keep = [i for i in range(len(header)) if i != label_idx]
    names = [header[i] for i in keep]
    return names, data[:, keep], y
