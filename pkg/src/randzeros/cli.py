"""Command-line front end: reproducible experiments writing CSV/JSON files.

Every run writes ``manifest.json`` into the output directory with the fully
resolved configuration, the package version and the list of files written.
Rerunning with the same configuration reproduces every output byte for byte.

Exit codes: 0 success, 1 numerical failure, 2 configuration error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import kacrice, kernels, qe, serialize, statistics, validate
from .ensembles import EnsembleSpec, Family, Measure, sample
from .projective import ProjectivePoint
from .zeros_crits import DegenerateInputError, find_critical_points, find_zeros_batch

STOCHASTIC = {"sample", "zeros", "crits", "density", "paircorr", "hole", "qe"}


class ConfigError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _int_list(text):
    return [int(t) for t in str(text).replace(" ", "").split(",") if t]


def _float(text):
    return float(text)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# option name -> (parser, default)
OPTIONS = {
    "N": (int, None),
    "samples": (int, None),
    "seed": (int, None),
    "out": (str, "out"),
    "bins": (int, None),
    "rmax": (_float, None),
    "Dmax": (_float, None),
    "threads": (int, 1),
    "format": (str, "csv"),
    "family": (str, "SU2_POLY"),
    "measure": (str, "GAUSSIAN"),
    "degrees": (_int_list, None),
    "symbol": (str, "even"),
    "kind": (str, "complex"),
    "cells": (int, 100),
    "grid": (int, 40),
    "center_re": (_float, 0.0),
    "center_im": (_float, 0.0),
    "finite": (_bool, False),
}

DEFAULTS = {
    "sample": {"N": 10, "samples": 10},
    "zeros": {"N": 50, "samples": 100},
    "crits": {"N": 20, "samples": 100},
    "density": {"N": 50, "samples": 1000},
    "paircorr": {"N": 100, "samples": 1000, "bins": 20, "rmax": 5.0},
    "hole": {"N": 50, "samples": 1000, "bins": 30, "Dmax": 3.0},
    "kacrice-curve": {"bins": 50, "rmax": 5.0},
    "kernel-scaling": {"degrees": [16, 64, 256, 1024]},
    "qe": {"degrees": [20, 40, 80], "samples": 200},
    "validate": {},
}

# options each subcommand reads (seed is added for stochastic commands)
USES = {
    "sample": ["N", "samples", "family", "measure"],
    "zeros": ["N", "samples", "measure", "threads"],
    "crits": ["N", "samples", "measure", "degrees", "grid"],
    "density": ["N", "samples", "measure", "cells", "threads"],
    "paircorr": ["N", "samples", "measure", "bins", "rmax", "threads", "center_re", "center_im"],
    "hole": ["N", "samples", "measure", "bins", "Dmax", "threads", "center_re", "center_im"],
    "kacrice-curve": ["bins", "rmax", "N", "finite"],
    "kernel-scaling": ["degrees", "kind", "center_re", "center_im"],
    "qe": ["degrees", "samples", "symbol", "threads"],
    "validate": [],
}


HELP = {
    "N": "degree",
    "samples": "number of samples (ONB draws for qe)",
    "seed": "master seed; required for stochastic subcommands",
    "out": "output directory",
    "bins": "number of radial bins",
    "rmax": "largest scaled distance",
    "Dmax": "largest hole radius (scaled)",
    "threads": "worker threads",
    "format": "csv or json",
    "family": "SU2_POLY or SPHERICAL_HARMONIC_S2",
    "measure": "GAUSSIAN or SPHERICAL",
    "degrees": "comma-separated degree list",
    "symbol": "even, odd, random or a JSON coefficient file",
    "kind": "complex (Heisenberg) or real (J0)",
    "cells": "number of equal-area cells",
    "grid": "critical-point seed grid size",
    "center_re": "real part of the base point in the affine chart",
    "center_im": "imaginary part of the base point in the affine chart",
    "finite": "also tabulate the finite-N curve at --N",
}


def build_parser():
    p = argparse.ArgumentParser(prog="randzeros", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in DEFAULTS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value file merged under command-line flags")
        shown = set(USES[name]) | {"out", "format"} | ({"seed"} if name in STOCHASTIC else set())
        for opt in OPTIONS:
            # every option is accepted so one config file can serve all
            # subcommands; only the ones this subcommand reads are listed
            h = HELP[opt] if opt in shown else argparse.SUPPRESS
            sp.add_argument(f"--{opt}", dest=opt, default=argparse.SUPPRESS, help=h)
    return p


def read_config_file(path):
    cfg = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno} is not key=value")
        k, v = (t.strip() for t in line.split("=", 1))
        cfg[k.lstrip("-")] = v
    return cfg


def resolve_config(command, flags):
    """Defaults, then the config file, then command-line flags."""
    raw = {}
    if flags.get("config"):
        raw.update(read_config_file(flags["config"]))
    raw.update({k: v for k, v in flags.items() if k != "config"})
    cfg = {k: d for k, (_, d) in OPTIONS.items()}
    cfg.update(DEFAULTS[command])
    for k, v in raw.items():
        if k not in OPTIONS:
            raise ConfigError(k, "unknown option")
        conv = OPTIONS[k][0]
        try:
            cfg[k] = conv(v) if isinstance(v, str) else v
        except (TypeError, ValueError) as exc:
            raise ConfigError(k, f"invalid value {v!r}") from exc
    used = set(USES[command]) | {"out", "format"}
    if command in STOCHASTIC:
        used.add("seed")
        if cfg["seed"] is None:
            raise ConfigError("seed", "required for stochastic subcommands")
    _check(cfg, used)
    if command == "paircorr" and cfg["rmax"] >= np.sqrt(cfg["N"]):
        raise ConfigError("rmax", f"must be below sqrt(N) = {np.sqrt(cfg['N']):.4g}")
    return {k: cfg[k] for k in sorted(used)}


def _check(cfg, used):
    def need(cond, field, msg):
        if field in used and not cond:
            raise ConfigError(field, msg)

    need(cfg["N"] is None or cfg["N"] >= 1, "N", "must be >= 1")
    need(cfg["samples"] is None or cfg["samples"] >= 1, "samples", "must be >= 1")
    need(cfg["seed"] is None or cfg["seed"] >= 0, "seed", "must be >= 0")
    need(cfg["bins"] is None or cfg["bins"] >= 1, "bins", "must be >= 1")
    need(cfg["rmax"] is None or cfg["rmax"] > 0, "rmax", "must be > 0")
    need(cfg["Dmax"] is None or cfg["Dmax"] > 0, "Dmax", "must be > 0")
    need(cfg["threads"] >= 1, "threads", "must be >= 1")
    need(cfg["format"] in ("csv", "json"), "format", "must be csv or json")
    need(cfg["family"] in Family.__members__, "family", f"must be one of {list(Family.__members__)}")
    need(cfg["measure"] in Measure.__members__, "measure", f"must be one of {list(Measure.__members__)}")
    need(cfg["kind"] in ("complex", "real"), "kind", "must be complex or real")
    need(cfg["cells"] >= 1, "cells", "must be >= 1")
    need(cfg["grid"] >= 4, "grid", "must be >= 4")
    need(cfg["degrees"] is None or (len(cfg["degrees"]) >= 1 and min(cfg["degrees"]) >= 1), "degrees", "must be positive integers")
    if "symbol" in used and cfg["symbol"] not in qe.TEST_SYMBOLS and not Path(cfg["symbol"]).is_file():
        raise ConfigError("symbol", f"must be one of {sorted(qe.TEST_SYMBOLS)} or a JSON coefficient file")


def _spec(cfg, family=Family.SU2_POLY):
    return EnsembleSpec(Family(cfg.get("family", family)), cfg["N"], Measure(cfg["measure"]), cfg["seed"])


def _center(cfg):
    return ProjectivePoint.from_affine(complex(cfg["center_re"], cfg["center_im"]))


def _zeros(cfg):
    return find_zeros_batch(sample(_spec(cfg), cfg["samples"]), cfg["threads"])


def cmd_sample(cfg, out):
    samples = sample(_spec(cfg), cfg["samples"])
    if cfg["format"] == "json":
        serialize.write_jsonl(out / "samples.jsonl", [serialize.section_sample_record(s) for s in samples])
        return ["samples.jsonl"], {}
    return [serialize.write_table(out, "samples", *serialize.section_sample_rows(samples))], {}


def cmd_zeros(cfg, out):
    z = _zeros(cfg)
    summary = {"total_multiplicity_ok": all(s.total_multiplicity == cfg["N"] for s in z)}
    return [serialize.write_table(out, "zeros", *serialize.point_sample_rows(z), cfg["format"])], summary


def cmd_crits(cfg, out):
    files = []
    degrees = cfg["degrees"] or [cfg["N"]]
    counts, excluded = {}, {}
    if cfg["degrees"] is None:
        crit = [find_critical_points(s, grid=cfg["grid"]) for s in sample(_spec(cfg), cfg["samples"])]
        files.append(serialize.write_table(out, "crits", *serialize.point_sample_rows(crit), cfg["format"]))
        ok = np.array([c.diagnostics["index_ok"] for c in crit])
        counts[cfg["N"]] = np.array([len(c) for c in crit], dtype=float)[ok]
        excluded[cfg["N"]] = int((~ok).sum())
    else:
        for N in degrees:
            counts[N], excluded[N] = statistics.critical_counts(N, cfg["samples"], cfg["seed"], grid=cfg["grid"])
    means = [float(counts[N].mean()) for N in degrees]
    sems = [float(counts[N].std(ddof=1) / np.sqrt(counts[N].size)) if counts[N].size > 1 else 0.0 for N in degrees]
    rows = [[N, m, s] for N, m, s in zip(degrees, means, sems)]
    files.append(serialize.write_table(out, "crit", ["N", "mean", "stderr"], rows, cfg["format"]))
    summary = {"excluded": excluded}
    if len(degrees) >= 2:
        fit = statistics.critical_count_fit_from_counts(counts, excluded)
        summary.update(gamma=fit.gamma, stderr=fit.stderr, intercept=fit.intercept, r2=fit.r2)
    return files, summary


def cmd_density(cfg, out):
    h = statistics.empirical_density(_zeros(cfg), cfg["cells"])
    stat, p = h.chi_square()
    summary = {"chi_square": stat, "p_value": p, "total_mass": h.total_mass, "sample_count": h.sample_count}
    return [serialize.write_table(out, "density", *serialize.density_rows(h), cfg["format"])], summary


def cmd_paircorr(cfg, out):
    edges = np.linspace(0.0, cfg["rmax"], cfg["bins"] + 1)
    c = statistics.pair_correlation_mc(_zeros(cfg), _center(cfg), cfg["N"], edges)
    summary = {"low_confidence_bins": int(np.sum(c.meta["low_confidence"])), "references": c.meta["references"]}
    return [serialize.write_table(out, "paircorr", *serialize.curve_rows(c), cfg["format"])], summary


def cmd_hole(cfg, out):
    D = np.linspace(0.0, cfg["Dmax"], cfg["bins"] + 1)
    rep = statistics.hole_probability(_zeros(cfg), _center(cfg), D, cfg["N"], min_samples=1)
    summary = {
        "slope": rep.slope, "slope_stderr": rep.slope_stderr, "intercept": rep.intercept, "r2": rep.r2,
        "fit_range": rep.fit_range, "fit_points": rep.fit_points, "diagnostic": rep.diagnostic,
    }
    return [serialize.write_table(out, "hole", *serialize.hole_rows(rep), cfg["format"])], summary


def kacrice_curve_table(rmax, bins, N=None):
    """The analytic curve the ``kacrice-curve`` subcommand writes, at bin centers."""
    edges = np.linspace(0.0, rmax, bins + 1)
    r = 0.5 * (edges[1:] + edges[:-1])
    curve = kacrice.k2_finite_curve(N, r) if N else kacrice.k2_limit_curve(r)
    return serialize.curve_rows(curve)


def cmd_kacrice_curve(cfg, out):
    N = cfg["N"] if cfg["finite"] else None
    if cfg["finite"] and N is None:
        raise ConfigError("N", "required with finite=true")
    return [serialize.write_table(out, "kacrice_curve", *kacrice_curve_table(cfg["rmax"], cfg["bins"], N), cfg["format"])], {}


def cmd_kernel_scaling(cfg, out):
    header, rows = None, []
    if cfg["kind"] == "complex":
        center = complex(cfg["center_re"], cfg["center_im"])
        reps = [kernels.complex_scaling_error(N, center=center) for N in cfg["degrees"]]
        for N in cfg["degrees"]:
            header, r = serialize.complex_pair_rows(N, kernels.complex_scaling_table(N, center=center))
            rows += r
    else:
        reps = [kernels.real_scaling_error(N) for N in cfg["degrees"]]
        for N in cfg["degrees"]:
            header, r = serialize.real_pair_rows(N, kernels.real_scaling_table(N))
            rows += r
    summary = {"log_slope": kernels.scaling_slope(reps) if len(reps) > 1 else None}
    files = [
        serialize.write_table(out, "kernel_scaling", *serialize.scaling_rows(reps, cfg["kind"]), cfg["format"]),
        serialize.write_table(out, "kernel_scaling_pairs", header, rows, cfg["format"]),
    ]
    return files, summary


def _symbol(name):
    if name in qe.TEST_SYMBOLS:
        return qe.TEST_SYMBOLS[name]()
    return qe.SymbolFunction.from_json(Path(name).read_text(encoding="utf-8"))


def cmd_qe(cfg, out):
    f = _symbol(cfg["symbol"])
    rep = qe.variance_report(cfg["degrees"], f, cfg["samples"], cfg["seed"], cfg["threads"])
    return [serialize.write_table(out, "qe", *serialize.qe_rows(rep), cfg["format"])], {"c_f": rep.c_f}


def cmd_validate(cfg, out):
    results = validate.run_checks()
    for r in results:
        print(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']}: {r['detail']}")
    serialize.write_json(out / "validate.json", [{k: r[k] for k in ("name", "ok", "detail")} for r in results])
    if not all(r["ok"] for r in results):
        raise FloatingPointError("validation checks failed")
    return ["validate.json"], {}


COMMANDS = {
    "sample": cmd_sample, "zeros": cmd_zeros, "crits": cmd_crits, "density": cmd_density,
    "paircorr": cmd_paircorr, "hole": cmd_hole, "kacrice-curve": cmd_kacrice_curve,
    "kernel-scaling": cmd_kernel_scaling, "qe": cmd_qe, "validate": cmd_validate,
}


def run(argv=None):
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    flags = vars(args)
    command = flags.pop("command")
    try:
        cfg = resolve_config(command, flags)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    try:
        files, summary = COMMANDS[command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FloatingPointError, ArithmeticError, np.linalg.LinAlgError, DegenerateInputError, RuntimeError, ValueError) as exc:
        print(f"numerical failure in {command}: {exc}", file=sys.stderr)
        return 1
    if summary:
        serialize.write_json(out / "summary.json", {"command": command, "config": cfg, "results": summary})
        files.append("summary.json")
    serialize.write_json(out / serialize.MANIFEST_NAME, serialize.manifest(command, cfg, files, __version__))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
