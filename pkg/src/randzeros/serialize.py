"""CSV and JSON writers for samples, point sets, curves and run manifests.

Every CSV has a header row and ends with a ``# manifest: <file>`` comment
line.  Floats are written with 17 significant digits so files round-trip
exactly and identical runs give identical bytes.
"""

import csv
import io
import json
from enum import Enum
from pathlib import Path

import numpy as np

MANIFEST_NAME = "manifest.json"
MANIFEST_SCHEMA = "randzeros-manifest/1"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def csv_text(header, rows, manifest=MANIFEST_NAME):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    buf.write(f"# manifest: {manifest}\n")
    return buf.getvalue()


def read_csv(path):
    """Header and rows (as strings) of a CSV written by :func:`csv_text`."""
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    r = list(csv.reader(lines))
    return r[0], r[1:]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_text(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def records_json(header, rows):
    return json_text([dict(zip(header, r)) for r in rows])


def write_table(out_dir, stem, header, rows, fmt="csv"):
    """Write a table as ``stem.csv`` or ``stem.json``; returns the file name."""
    name = f"{stem}.{fmt}"
    text = csv_text(header, rows) if fmt == "csv" else records_json(header, rows)
    Path(out_dir, name).write_text(text, encoding="utf-8")
    return name


def write_json(path, obj):
    Path(path).write_text(json_text(obj), encoding="utf-8")


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(to_jsonable(r), sort_keys=True) + "\n")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(ln) for ln in fh if ln.strip()]


def manifest(command, config, outputs, version):
    """Run manifest: resolved config, code version and produced files."""
    return {"schema": MANIFEST_SCHEMA, "command": command, "version": version, "config": dict(config), "outputs": list(outputs)}


# record converters

def section_sample_record(s):
    return {
        "family": s.spec.family, "N": s.spec.degree, "measure": s.spec.measure, "seed": s.spec.seed,
        "index": s.index, "re": np.real(s.coeffs), "im": np.imag(s.coeffs) if np.iscomplexobj(s.coeffs) else None,
    }


def section_sample_rows(samples):
    header = ["sample", "k", "re", "im"]
    rows = []
    for s in samples:
        c = np.asarray(s.coeffs)
        for k, v in enumerate(c):
            rows.append([s.index, k, float(np.real(v)), float(np.imag(v))])
    return header, rows


def point_sample_rows(samples, indices=None):
    header = ["sample", "x1", "x2", "x3", "multiplicity", "residual"]
    rows = []
    for i, s in enumerate(samples):
        idx = i if indices is None else indices[i]
        x = s.sphere()
        for p, m, r in zip(x, s.multiplicities, s.residuals):
            rows.append([idx, p[0], p[1], p[2], m, r])
    return header, rows


def point_sample_record(s, index=None):
    return {
        "sample": index, "kind": s.kind, "N": s.N, "points_re": np.real(s.points), "points_im": np.imag(s.points),
        "multiplicities": s.multiplicities, "residuals": s.residuals, "diagnostics": s.diagnostics,
    }


def density_rows(hist):
    theta, phi = hist.cells.centers()
    return ["cellId", "theta", "phi", "mass"], [[i, t, p, m] for i, (t, p, m) in enumerate(zip(theta, phi, hist.mass))]


def curve_rows(curve):
    if curve.ci_lo is not None:
        header = ["r", "kappa", "ci_lo", "ci_hi", "npairs"]
        return header, [list(r) for r in zip(curve.radii, curve.values, curve.ci_lo, curve.ci_hi, curve.npairs)]
    return ["r", "kappa"], [[r, v] for r, v in zip(curve.radii, curve.values)]


def hole_rows(rep):
    return ["D", "p", "ci_lo", "ci_hi"], [list(r) for r in zip(rep.D, rep.p, rep.ci_lo, rep.ci_hi)]


def crit_rows(fit):
    return ["N", "mean", "stderr"], [list(r) for r in zip(fit.degrees, fit.means, fit.sems)]


def qe_rows(rep):
    header = ["N", "draws", "S2_mean", "S2_stderr", "c_f", "N_times_S2"]
    return header, [[N, rep.draws, m, s, rep.c_f, ns] for N, m, s, ns in zip(rep.degrees, rep.s2_mean, rep.s2_stderr, rep.n_times_s2)]


def scaling_rows(reports, kind):
    return ["N", "kind", "sup_error"], [[r.N, kind, r.sup_error] for r in reports]


def complex_pair_rows(N, table):
    u, v, exact, limit, err = table
    header = ["N", "u_re", "u_im", "v_re", "v_im", "exact_re", "exact_im", "limit_re", "limit_im", "error"]
    rows = [[N, a.real, a.imag, b.real, b.imag, e.real, e.imag, l.real, l.imag, d] for a, b, e, l, d in zip(u, v, exact, limit, err)]
    return header, rows


def real_pair_rows(N, table):
    r, exact, limit, err = table
    return ["N", "r", "exact", "limit", "error"], [[N, *row] for row in zip(r, exact, limit, err)]
