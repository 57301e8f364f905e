import hashlib
import json
import time

import numpy as np
import pytest

from randzeros import __version__
from randzeros.cli import kacrice_curve_table, resolve_config, run
from randzeros.kacrice import k2_limit_curve
from randzeros.serialize import csv_text, curve_rows, read_csv, read_jsonl, to_jsonable


def digest(d):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(d.iterdir())}


def test_csv_text_layout():
    text = csv_text(["a", "b"], [[1, 0.1], [2, 1e-300]])
    lines = text.splitlines()
    assert lines[0] == "a,b" and lines[-1] == "# manifest: manifest.json"
    assert float(lines[1].split(",")[1]) == 0.1


def test_jsonable():
    out = to_jsonable({"a": np.arange(2), "b": np.float64("nan"), "c": 1 + 2j, "d": np.bool_(True)})
    assert out == {"a": [0, 1], "b": None, "c": [1.0, 2.0], "d": True}


def test_paircorr_outputs_and_reproducibility(tmp_path):
    args = ["paircorr", "--N", "100", "--samples", "60", "--seed", "7"]
    assert run(args + ["--out", str(tmp_path / "a")]) == 0
    assert run(args + ["--out", str(tmp_path / "b")]) == 0
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["version"] == __version__ and man["config"]["seed"] == 7
    assert "paircorr.csv" in man["outputs"]
    header, rows = read_csv(tmp_path / "a" / "paircorr.csv")
    assert header == ["r", "kappa", "ci_lo", "ci_hi", "npairs"] and len(rows) == 20
    da, db = digest(tmp_path / "a"), digest(tmp_path / "b")
    # manifests differ only by the output directory they record
    da.pop("manifest.json"), db.pop("manifest.json")
    da.pop("summary.json"), db.pop("summary.json")
    assert da == db


def test_kacrice_curve_byte_for_byte(tmp_path):
    assert run(["kacrice-curve", "--rmax", "5", "--bins", "50", "--out", str(tmp_path)]) == 0
    written = (tmp_path / "kacrice_curve.csv").read_text()
    assert written == csv_text(*kacrice_curve_table(5.0, 50))
    e = np.linspace(0.0, 5.0, 51)
    r = 0.5 * (e[1:] + e[:-1])
    assert written == csv_text(*curve_rows(k2_limit_curve(r)))


def test_config_file_merged_under_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\nN = 12\nsamples=3\nseed=5\n", encoding="utf-8")
    resolved = resolve_config("zeros", {"config": str(cfg), "N": "14"})
    assert resolved["N"] == 14 and resolved["samples"] == 3 and resolved["seed"] == 5


@pytest.mark.parametrize(
    "argv, field",
    [
        (["zeros", "--N", "10"], "seed"),
        (["zeros", "--N", "ten", "--seed", "1"], "N"),
        (["zeros", "--N", "0", "--seed", "1"], "N"),
        (["paircorr", "--seed", "1", "--format", "xml"], "format"),
        (["qe", "--seed", "1", "--symbol", "nope"], "symbol"),
        (["paircorr", "--seed", "1", "--N", "20"], "rmax"),
    ],
)
def test_config_errors_exit_2(argv, field, tmp_path, capsys):
    assert run(argv + ["--out", str(tmp_path)]) == 2
    assert f"{field}:" in capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=red\n", encoding="utf-8")
    assert run(["kacrice-curve", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "colour" in capsys.readouterr().err


def test_numerical_failure_exit_1(tmp_path, capsys):
    # scaled radii beyond sqrt(N) have no finite-N counterpart
    assert run(["kacrice-curve", "--finite", "true", "--N", "4", "--out", str(tmp_path)]) == 1
    assert "numerical failure" in capsys.readouterr().err


def test_every_subcommand_runs(tmp_path):
    cases = {
        "sample": ["--N", "4", "--samples", "2", "--seed", "1"],
        "zeros": ["--N", "8", "--samples", "3", "--seed", "1"],
        "crits": ["--N", "6", "--samples", "3", "--seed", "1"],
        "density": ["--N", "8", "--samples", "20", "--seed", "1", "--cells", "16"],
        "hole": ["--N", "20", "--samples", "30", "--seed", "1"],
        "kernel-scaling": ["--degrees", "16,64"],
        "qe": ["--degrees", "4,8", "--samples", "5", "--seed", "1"],
    }
    stems = {"sample": "samples", "zeros": "zeros", "crits": "crit", "density": "density", "hole": "hole",
             "kernel-scaling": "kernel_scaling", "qe": "qe"}
    for cmd, extra in cases.items():
        out = tmp_path / cmd
        assert run([cmd, *extra, "--out", str(out)]) == 0, cmd
        text = (out / f"{stems[cmd]}.csv").read_text()
        assert text.endswith("# manifest: manifest.json\n")
    header, _ = read_csv(tmp_path / "density" / "density.csv")
    assert header == ["cellId", "theta", "phi", "mass"]
    header, _ = read_csv(tmp_path / "qe" / "qe.csv")
    assert header == ["N", "draws", "S2_mean", "S2_stderr", "c_f", "N_times_S2"]


def test_crits_degree_fit(tmp_path):
    assert run(["crits", "--degrees", "4,8,12", "--samples", "10", "--seed", "2", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["results"]["gamma"] > 1


def test_json_format(tmp_path):
    assert run(["sample", "--N", "3", "--samples", "2", "--seed", "1", "--format", "json", "--out", str(tmp_path)]) == 0
    recs = read_jsonl(tmp_path / "samples.jsonl")
    assert len(recs) == 2 and len(recs[0]["re"]) == 4
    assert run(["zeros", "--N", "3", "--samples", "2", "--seed", "1", "--format", "json", "--out", str(tmp_path)]) == 0
    assert len(json.loads((tmp_path / "zeros.json").read_text())) == 6


def test_validate_fast_and_green(tmp_path):
    t = time.perf_counter()
    assert run(["validate", "--out", str(tmp_path)]) == 0
    assert time.perf_counter() - t < 120
    assert all(r["ok"] for r in json.loads((tmp_path / "validate.json").read_text()))
