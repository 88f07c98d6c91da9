"""Command-line front end writing CSV results.

Exit status: 0 success, 1 computational failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import sweep as sw
from .equilibria import Branch, all_stationary, linearize
from .errors import PolbjjError
from .integrator import IntegratorConfig, integrate
from .model import State, make_params

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("simulate", "equilibria", "linearize", "portrait", "sweep", "figures")

TRAJECTORY_HEADER = ("tau", "varsigma", "theta", "energy")
EQUILIBRIA_HEADER = ("varsigma", "theta", "energy", "stability", "family")
SWEEP_HEADER = ("value", "mean_varsigma", "label", "energy", "h_sep", "flags")
PORTRAIT_HEADER = ("s0", "theta0", "label", "mean_varsigma")
LINEARIZE_HEADER = ("branch", "omega_sq", "omega_jp_sq", "omega_r_sq", "e_j", "e_c",
                    "force", "displacement", "oscillatory")
FIG2_HEADER = ("curve",) + TRAJECTORY_HEADER
FIG3A_HEADER = ("value", "ratio", "mean_varsigma", "label", "energy", "h_sep", "flags")
FIGURE_FILES = ("fig1a", "fig1b", "fig1c", "fig2", "fig3a", "fig3b")

# key -> (type, default); None default means "no default"
OPTIONS = {
    "lambda": (float, None),
    "beta": (float, None),
    "s0": (float, None),
    "theta0": (float, 0.0),
    "dt": (float, 1e-3),
    "tmax": (float, 200.0),
    "method": (str, "rk4"),
    "rtol": (float, 1e-9),
    "stride": (int, 1),
    "var": (str, None),
    "from": (float, None),
    "to": (float, None),
    "steps": (int, None),
    "ns": (int, 11),
    "ntheta": (int, 9),
    "out": (str, None),
    "allow_partial": (bool, False),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    lam: Optional[float] = None
    beta: Optional[float] = None
    s0: Optional[float] = None
    theta0: float = 0.0
    dt: float = 1e-3
    tmax: float = 200.0
    method: str = "rk4"
    rtol: float = 1e-9
    stride: int = 1
    var: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: Optional[int] = None
    ns: int = 11
    ntheta: int = 9
    out: str = "-"
    allow_partial: bool = False

    @property
    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(t_max=self.tmax, dt=self.dt, method=self.method,
                                rtol=self.rtol, stride=self.stride)


def _convert(key: str, text: str, where: str):
    typ = OPTIONS[key][0]
    try:
        if typ is bool:
            low = text.strip().lower()
            if low not in ("1", "0", "true", "false", "yes", "no"):
                raise ValueError
            return low in ("1", "true", "yes")
        v = typ(text.strip())
    except ValueError:
        raise UsageError(f"{where}: malformed value {text.strip()!r} for {key!r}") from None
    if typ is float and not math.isfinite(v):
        raise UsageError(f"{where}: value for {key!r} must be finite, got {text.strip()!r}")
    return v


def read_config(text: str, source: str = "config") -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{n}: expected 'key = value', got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "lam":
            key = "lambda"
        if key not in OPTIONS:
            raise UsageError(f"{source}:{n}: unknown key {key!r}")
        out[key] = _convert(key, val, f"{source}:{n}")
    return out


def number(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polbjj", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="subcommand", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    def common(p, ic=True, integ=True):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--lambda", dest="lambda", type=number, help="nonlinearity Lambda")
        p.add_argument("--beta", type=number, help="scaled transverse kinetic energy")
        p.add_argument("--out", help="output CSV path, '-' for stdout "
                                     "(default: <subcommand>.csv; a directory for figures)")
        if ic:
            p.add_argument("--s0", type=number, help="initial imbalance varsigma(0)")
            p.add_argument("--theta0", type=number, help="initial phase (default: 0)")
        if integ:
            p.add_argument("--dt", type=number, help="time step (default: 1e-3)")
            p.add_argument("--tmax", type=number, help="horizon in tau (default: 200)")
            p.add_argument("--method", choices=("rk4", "adaptive"), help="(default: rk4)")
            p.add_argument("--rtol", type=number, help="adaptive tolerance (default: 1e-9)")
            p.add_argument("--stride", type=int, help="record every n-th step (default: 1)")

    p = sub.add_parser("simulate", help="integrate one trajectory")
    common(p)
    p.add_argument("--allow-partial", dest="allow_partial", action="store_const", const=True,
                   help="write the partial trajectory when the boundary is reached")
    common(sub.add_parser("equilibria", help="list stationary points"), ic=False, integ=False)
    common(sub.add_parser("linearize", help="small-amplitude frequencies"), ic=False, integ=False)
    p = sub.add_parser("portrait", help="label a grid of initial conditions")
    common(p, ic=False)
    p.add_argument("--ns", type=int, help="imbalance grid points in [-0.95, 0.95] (default: 11)")
    p.add_argument("--ntheta", type=int, help="phase grid points in [-pi, pi] (default: 9)")
    p = sub.add_parser("sweep", help="time-averaged imbalance along one parameter")
    common(p)
    p.add_argument("--var", choices=sw.VARIABLES, help="swept variable")
    p.add_argument("--from", dest="from", type=number, help="first grid value")
    p.add_argument("--to", type=number, help="last grid value")
    p.add_argument("--steps", type=int, help="number of grid points")
    p = sub.add_parser("figures", help="write the six figure CSVs into --out directory")
    p.add_argument("--config", help="key = value file")
    p.add_argument("--out", help="output directory (default: .)")
    p.add_argument("--dt", type=number, help="time step (default: 1e-3)")
    p.add_argument("--tmax", type=number, help="horizon in tau (default: 200)")
    return ap


def parse(args: Sequence[str], config_text: Optional[str] = None) -> RunConfig:
    """Build a RunConfig; raises ``SystemExit(2)`` on usage errors."""
    ap = _parser()
    ns = vars(ap.parse_args(list(args)))
    try:
        merged = {k: d for k, (_, d) in OPTIONS.items()}
        if config_text is not None:
            merged.update(read_config(config_text))
        if ns.get("config"):
            try:
                with open(ns["config"]) as fh:
                    merged.update(read_config(fh.read(), ns["config"]))
            except OSError as exc:
                raise UsageError(f"cannot read config {ns['config']!r}: {exc.strerror}") from None
        for k, v in ns.items():
            if k in OPTIONS and v is not None:
                merged[k] = v
        return _build(ns["subcommand"], merged)
    except UsageError as exc:
        ap.error(str(exc))


def _require(merged: dict, *keys: str) -> None:
    for k in keys:
        if merged.get(k) is None:
            raise UsageError(f"missing required option --{k}")


def _build(sub: str, m: dict) -> RunConfig:
    if sub == "simulate":
        _require(m, "lambda", "beta", "s0")
    elif sub in ("equilibria", "linearize", "portrait"):
        _require(m, "lambda", "beta")
    elif sub == "sweep":
        _require(m, "var", "from", "to", "steps", "lambda")
        if m["var"] not in sw.VARIABLES:
            raise UsageError(f"--var must be one of {', '.join(sw.VARIABLES)}, got {m['var']!r}")
        if m["var"] != "beta":
            _require(m, "beta")
        if m["var"] != "varsigma0":
            _require(m, "s0")
        if m["steps"] < 1:
            raise UsageError(f"--steps must be >= 1, got {m['steps']}")
        if m["steps"] > 1 and m["from"] == m["to"]:
            raise UsageError("--from and --to must differ when --steps > 1")
    if m["method"] not in ("rk4", "adaptive"):
        raise UsageError(f"--method must be rk4 or adaptive, got {m['method']!r}")
    for k in ("dt", "tmax", "rtol"):
        if not m[k] > 0:
            raise UsageError(f"--{k} must be positive, got {m[k]}")
    for k in ("stride", "ns", "ntheta"):
        if m[k] < 1:
            raise UsageError(f"--{k} must be >= 1, got {m[k]}")
    out = m["out"]
    if out is None:
        out = "." if sub == "figures" else f"{sub}.csv"
    return RunConfig(sub, lam=m["lambda"], beta=m["beta"], s0=m["s0"], theta0=m["theta0"],
                     dt=m["dt"], tmax=m["tmax"], method=m["method"], rtol=m["rtol"],
                     stride=m["stride"], var=m["var"], start=m["from"], stop=m["to"],
                     steps=m["steps"], ns=m["ns"], ntheta=m["ntheta"], out=out,
                     allow_partial=bool(m["allow_partial"]))


def fmt(x) -> str:
    """Full-precision text for floats; blanks for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if hasattr(x, "value"):
        return str(x.value)
    return str(x)


def to_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def trajectory_rows(tr):
    return zip(tr.times, tr.varsigma, tr.theta, tr.energies)


def sweep_rows(result):
    for r in result.rows:
        yield (r.value, r.mean_varsigma, r.label, r.energy, r.h_sep, ";".join(r.flags))


def portrait_rows(portrait):
    for e in portrait.entries:
        label = e.report.label if e.report else "unclassified"
        mean = e.report.mean_varsigma if e.report else math.nan
        yield (e.ic.varsigma, e.ic.theta, label, mean)


def _check_writable(path: str, directory: bool = False) -> None:
    if path == "-":
        return
    target = path if directory else (os.path.dirname(os.path.abspath(path)) or ".")
    if directory and not os.path.isdir(path):
        parent = os.path.dirname(os.path.abspath(path))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise OSError(f"cannot create output directory {path!r}")
        return
    if not os.path.isdir(target) or not os.access(target, os.W_OK):
        raise OSError(f"output location {path!r} is not writable")
    if os.path.isdir(path):
        raise OSError(f"output path {path!r} is a directory")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _grid(cfg: RunConfig) -> np.ndarray:
    if cfg.steps == 1:
        return np.array([cfg.start])
    return np.linspace(cfg.start, cfg.stop, cfg.steps)


def _simulate(cfg: RunConfig) -> tuple[str, int]:
    p = make_params(cfg.lam, cfg.beta)
    tr = integrate(State(cfg.s0, cfg.theta0), p, cfg.integrator)
    if tr.boundary_reached:
        print(f"polbjj: boundary |varsigma| -> 1 reached at tau = {tr.times[-1]:.6g}",
              file=sys.stderr)
        if not cfg.allow_partial:
            return "", EXIT_COMPUTE
    if tr.drift_exceeded:
        print(f"polbjj: energy drift {tr.max_drift:.3g} exceeds tolerance", file=sys.stderr)
        if not cfg.allow_partial:
            return "", EXIT_COMPUTE
    return to_csv(TRAJECTORY_HEADER, trajectory_rows(tr)), EXIT_OK


def _equilibria(cfg: RunConfig) -> str:
    p = make_params(cfg.lam, cfg.beta)
    rows = [(pt.varsigma, pt.theta, pt.energy, pt.stability, pt.family) for pt in all_stationary(p)]
    return to_csv(EQUILIBRIA_HEADER, rows)


def _linearize(cfg: RunConfig) -> str:
    p = make_params(cfg.lam, cfg.beta)
    rows = []
    for br in Branch:
        m = linearize(p, br)
        rows.append((br, m.omega_sq, m.omega_jp_sq, m.omega_r_sq, m.e_j, m.e_c, m.force,
                     m.displacement, m.oscillatory))
    return to_csv(LINEARIZE_HEADER, rows)


def _portrait(cfg: RunConfig) -> str:
    p = make_params(cfg.lam, cfg.beta)
    pp = sw.phase_portrait(p, sw.portrait_grid(cfg.ns, cfg.ntheta), cfg.integrator,
                           keep_trajectories=False)
    return to_csv(PORTRAIT_HEADER, portrait_rows(pp))


def _sweep(cfg: RunConfig) -> str:
    spec = sw.SweepSpec(cfg.lam, cfg.beta if cfg.beta is not None else 0.0, cfg.var, _grid(cfg),
                        State(cfg.s0 if cfg.s0 is not None else 0.0, cfg.theta0), cfg.integrator)
    return to_csv(SWEEP_HEADER, sweep_rows(sw.run_sweep(spec)))


def figures(integ: IntegratorConfig) -> dict[str, str]:
    """CSV text for every reference figure, keyed by file stem."""
    out = {}
    portrait_cfg = IntegratorConfig(t_max=integ.t_max, dt=integ.dt, stride=10)
    for name, beta in sw.FIG1_BETAS.items():
        pp = sw.phase_portrait(make_params(sw.REFERENCE_LAMBDA, beta), sw.portrait_grid(21, 17),
                               portrait_cfg, keep_trajectories=False)
        out[name] = to_csv(PORTRAIT_HEADER, portrait_rows(pp))
    fig2_cfg = IntegratorConfig(t_max=integ.t_max, dt=integ.dt, stride=100)
    rows = []
    for name, tr, _rep in sw.figure2_suite(fig2_cfg):
        rows.extend((name,) + r for r in trajectory_rows(tr))
    out["fig2"] = to_csv(FIG2_HEADER, rows)
    res = sw.run_sweep(sw.figure3a_spec(cfg=integ))
    out["fig3a"] = to_csv(FIG3A_HEADER, [
        (r.value, r.ratio, r.mean_varsigma, r.label, r.energy, r.h_sep, ";".join(r.flags))
        for r in res.rows])
    out["fig3b"] = to_csv(SWEEP_HEADER, sweep_rows(sw.run_sweep(sw.figure3b_spec(cfg=integ))))
    return out


def execute(cfg: RunConfig) -> int:
    try:
        _check_writable(cfg.out, directory=cfg.subcommand == "figures")
    except OSError as exc:
        print(f"polbjj: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if cfg.subcommand == "figures":
            texts = figures(IntegratorConfig(t_max=cfg.tmax, dt=cfg.dt))
        elif cfg.subcommand == "simulate":
            text, status = _simulate(cfg)
            if status != EXIT_OK:
                return status
        else:
            text = {"equilibria": _equilibria, "linearize": _linearize,
                    "portrait": _portrait, "sweep": _sweep}[cfg.subcommand](cfg)
    except PolbjjError as exc:
        print(f"polbjj: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    try:
        if cfg.subcommand == "figures":
            os.makedirs(cfg.out, exist_ok=True)
            for stem in FIGURE_FILES:
                _write(os.path.join(cfg.out, stem + ".csv"), texts[stem])
        else:
            _write(cfg.out, text)
    except OSError as exc:
        print(f"polbjj: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
