"""Command-line front end: simulate | oracle | figure1 | compare | sweep.

Run configurations are INI files with the sections [equation] [params]
[grid] [initial] [time] [output]; every key is typed and unknown keys are
rejected.  Exit codes: 0 success, 1 comparison failure, 2 configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import DispersionSeries, classify_regime, local_exponent, loglog_slope
from .core import DensityField, Grid1D, PhysParams, normalize
from .oracles import LAW_KINDS, PROFILE_KINDS, DispersionLaw, profile, sigma2
from .physics import FrictionLaw
from .solvers import DEFAULT_EQ8_REG, EQUATIONS, NumericalError, Scenario, ScenarioError, StabilityError, run
from .specfun import Eq7Params, TAU_STAR, eq7_sigma_from_time

EXIT_OK, EXIT_COMPARE_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

CSV_COLUMNS = ("t", "mass", "variance", "sigma2", "alpha")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- schema

def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _opt_float(s: str):
    return None if s.strip().lower() in ("", "none", "auto") else float(s)


def _opt_str(s: str):
    return None if s.strip().lower() in ("", "none", "auto") else s.strip()


def _opt_bool(s: str):
    return None if s.strip().lower() in ("", "none", "auto") else _bool(s)


_P = PhysParams()

# section -> key -> (parser, default); a default of ... marks a required key
SCHEMA: dict[str, dict[str, tuple]] = {
    "equation": {
        "name": (str, ...),
        "scheme": (str, "explicit"),
        "law": (_opt_str, None),
        "b1": (float, 0.0),
        "b3": (float, 0.0),
        "amplitude": (float, 1.0),
        "g0": (float, 1.0),
        "potential": (str, "none"),
        "quantum": (_bool, True),
        "reg": (float, DEFAULT_EQ8_REG),
        "bdf_order": (int, 2),
        "change_target": (float, 0.05),
    },
    "params": {k: (float, getattr(_P, k)) for k in ("m", "hbar", "theta", "K", "k_rate", "rho_eq", "V0", "nu")},
    "grid": {
        "x_min": (float, ...),
        "x_max": (float, ...),
        "n": (int, ...),
        "bc": (str, "noflux"),
    },
    "initial": {
        "profile": (str, "gaussian"),
        "sigma": (float, 1.0),
        "center": (float, 0.0),
        "background": (float, 0.0),
        "amplitude": (float, 0.0),
        "mode": (int, 1),
        "smooth": (int, 0),
        "normalize": (_opt_bool, None),
    },
    "time": {
        "t_end": (float, ...),
        "dt": (_opt_float, None),
        "safety": (float, 0.4),
        "every": (int, 1),
        "record": (str, "log"),
        "record_n": (int, 21),
        "record_start": (_opt_float, None),
    },
    "output": {
        "family": (_opt_str, None),
        "snapshots": (_bool, False),
        "chart": (_bool, False),
    },
}
INITIAL_PROFILES = (*PROFILE_KINDS, "cosine")
RECORD_MODES = ("steps", "log", "linear")


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class RunConfig:
    """Typed contents of a run configuration file."""

    sections: dict[str, dict] = field(default_factory=dict)

    def __getitem__(self, section):
        return self.sections[section]

    @classmethod
    def parse_text(cls, text: str, extra_sections: tuple = ()) -> "RunConfig":
        cp = configparser.ConfigParser(interpolation=None, strict=True)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse configuration: {exc}".splitlines()[0]) from exc
        out = {}
        for sec in cp.sections():
            if sec not in SCHEMA and sec not in extra_sections:
                raise ConfigError(f"[{sec}]: unknown section; expected {sorted(SCHEMA)}")
        for sec, keys in SCHEMA.items():
            given = dict(cp[sec]) if cp.has_section(sec) else {}
            for k in given:
                if k not in keys:
                    raise ConfigError(f"{sec}.{k}: unknown key; expected one of {sorted(keys)}")
            vals = {}
            for k, (conv, default) in keys.items():
                if k in given:
                    try:
                        vals[k] = conv(given[k])
                    except ValueError as exc:
                        raise ConfigError(f"{sec}.{k}: {exc}") from exc
                elif default is ...:
                    raise ConfigError(f"{sec}.{k}: required key missing")
                else:
                    vals[k] = default
            out[sec] = vals
        for sec in extra_sections:
            out[sec] = dict(cp[sec]) if cp.has_section(sec) else {}
        return cls(out)

    @classmethod
    def load(cls, path, extra_sections: tuple = ()) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
        return cls.parse_text(text, extra_sections)

    def to_ini(self) -> str:
        buf = io.StringIO()
        # extra sections keep their raw strings
        for sec in [*SCHEMA, *(s for s in self.sections if s not in SCHEMA)]:
            buf.write(f"[{sec}]\n")
            for k, v in self.sections[sec].items():
                buf.write(f"{k} = {_fmt(v)}\n")
            buf.write("\n")
        return buf.getvalue()

    def with_value(self, dotted: str, raw: str) -> "RunConfig":
        sec, _, key = dotted.partition(".")
        if sec not in SCHEMA or key not in SCHEMA[sec]:
            raise ConfigError(f"{dotted}: unknown sweep key")
        conv = SCHEMA[sec][key][0]
        new = {s: dict(v) for s, v in self.sections.items()}
        try:
            new[sec][key] = conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{dotted}: {exc}") from exc
        return RunConfig(new)


# ------------------------------------------------------- config -> scenario

_IMPLIED_LAW = {
    "smoluchowski5": "linear", "reaction_diffusion10": "linear",
    "cubic6": "cubic", "quantum_cubic8_full": "cubic", "quantum_cubic8_reduced": "cubic",
}


def _params(cfg: RunConfig) -> PhysParams:
    try:
        return PhysParams(**cfg["params"])
    except ValueError as exc:
        raise ConfigError(f"params.{exc}") from exc


def _law(cfg: RunConfig) -> FrictionLaw | None:
    e = cfg["equation"]
    kind = e["law"] or _IMPLIED_LAW.get(e["name"])
    if kind is None:
        return None
    try:
        return FrictionLaw(kind, b1=e["b1"], b3=e["b3"], amplitude=e["amplitude"], g0=e["g0"])
    except ValueError as exc:
        raise ConfigError(f"equation.law: {exc}") from exc


def _grid(cfg: RunConfig) -> Grid1D:
    g = cfg["grid"]
    try:
        return Grid1D(g["x_min"], g["x_max"], g["n"], g["bc"])
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _initial(cfg: RunConfig, grid: Grid1D) -> DensityField:
    ini = cfg["initial"]
    kind = ini["profile"]
    if kind not in INITIAL_PROFILES:
        raise ConfigError(f"initial.profile: expected one of {INITIAL_PROFILES}, got {kind!r}")
    try:
        if kind == "cosine":
            phase = 2 * np.pi * ini["mode"] * (grid.x - grid.x_min) / grid.length
            values = ini["background"] + ini["amplitude"] * np.cos(phase)
        else:
            values = profile(kind, ini["sigma"], grid, ini["center"]).values
        if ini["smooth"] < 0:
            raise ValueError("smooth must be >= 0")
        if ini["smooth"] > 0:
            w = 2 * ini["smooth"] + 1
            pad = grid.pad(values, ini["smooth"]) if grid.periodic else np.pad(values, ini["smooth"], mode="edge")
            values = np.convolve(pad, np.ones(w) / w, mode="valid")
        rho = DensityField(values, grid)
    except ValueError as exc:
        raise ConfigError(f"initial: {exc}") from exc
    norm = ini["normalize"]
    if norm is None:
        norm = kind != "cosine"
    return normalize(rho) if norm else rho


def _record_times(cfg: RunConfig):
    tm = cfg["time"]
    mode, n, t_end = tm["record"], tm["record_n"], tm["t_end"]
    if mode not in RECORD_MODES:
        raise ConfigError(f"time.record: expected one of {RECORD_MODES}, got {mode!r}")
    if mode == "steps":
        return None
    if n < 2:
        raise ConfigError("time.record_n: must be >= 2")
    start = tm["record_start"]
    if mode == "log":
        start = t_end * 1e-2 if start is None else start
        if not 0 < start < t_end:
            raise ConfigError("time.record_start: log records need 0 < record_start < t_end")
        return tuple(np.logspace(math.log10(start), math.log10(t_end), n))
    start = t_end / n if start is None else start
    if not 0 < start < t_end:
        raise ConfigError("time.record_start: must lie in (0, t_end)")
    return tuple(np.linspace(start, t_end, n))


def build_scenario(cfg: RunConfig) -> Scenario:
    e = cfg["equation"]
    if e["name"] not in EQUATIONS:
        raise ConfigError(f"equation.name: unknown {e['name']!r}; expected one of {EQUATIONS}")
    grid = _grid(cfg)
    tm = cfg["time"]
    try:
        return Scenario(
            equation=e["name"], initial=_initial(cfg, grid), t_end=tm["t_end"],
            params=_params(cfg), law=_law(cfg), potential=e["potential"], dt=tm["dt"],
            safety=tm["safety"], every=tm["every"], record_times=_record_times(cfg),
            quantum=e["quantum"], scheme=e["scheme"], reg=e["reg"],
            profile_family=cfg["output"]["family"], keep_snapshots=cfg["output"]["snapshots"],
            change_target=e["change_target"], bdf_order=e["bdf_order"])
    except ScenarioError as exc:
        raise ConfigError(str(exc)) from exc


# ------------------------------------------------------------------ output

def _r(v) -> str:
    return "" if v is None or (isinstance(v, float) and math.isnan(v)) else repr(float(v))


def _alphas(t, s2):
    alpha = np.full(len(t), np.nan)
    pos = (np.asarray(t) > 0) & (np.asarray(s2) > 0)
    idx = np.where(pos)[0]
    if idx.size >= 3:
        alpha[idx] = local_exponent(DispersionSeries(np.asarray(t)[idx], np.asarray(s2)[idx])).alpha
    return alpha


def write_run_csv(records, path) -> None:
    t = [r.t for r in records]
    s2 = [r.sigma2 for r in records]
    alpha = _alphas(t, s2)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r, a in zip(records, alpha):
            w.writerow([_r(r.t), _r(r.mass), _r(r.variance), _r(r.sigma2), _r(a)])


def _write_snapshots(records, grid, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *[repr(float(x)) for x in grid.x]])
        for r in records:
            if r.rho is not None:
                w.writerow([repr(r.t), *[repr(float(v)) for v in r.rho]])


def _chart(x, ys, labels, xlabel, ylabel, path, loglog=False) -> bool:
    """Write an SVG chart; returns False when matplotlib is unavailable."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for y, lab in zip(ys, labels):
        ax.plot(x, y, label=lab)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(ys) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return True


def read_run_csv(path) -> tuple[np.ndarray, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    if not rows or "t" not in rows[0] or "sigma2" not in rows[0]:
        raise ConfigError(f"{path}: expected a run CSV with t and sigma2 columns")
    try:
        return (np.array([float(r["t"]) for r in rows]), np.array([float(r["sigma2"]) for r in rows]))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --------------------------------------------------------------- commands

def _err(msg: str) -> None:
    print(f"qfric: {msg}", file=sys.stderr)


def simulate_config(cfg: RunConfig, out) -> None:
    sc = build_scenario(cfg)
    records = run(sc)
    out = Path(out)
    write_run_csv(records, out)
    if cfg["output"]["snapshots"]:
        _write_snapshots(records, sc.grid, out.with_suffix(".snapshots.csv"))
    if cfg["output"]["chart"]:
        pts = [(r.t, r.sigma2) for r in records if r.t > 0]
        if pts:
            t, s2 = zip(*pts)
            _chart(t, [s2], ["sigma^2"], "t", "sigma^2", out.with_suffix(".svg"), loglog=True)


def cmd_simulate(args) -> int:
    cfg = RunConfig.load(args.config)
    simulate_config(cfg, args.out)
    return EXIT_OK


def _kv_params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        for part in item.split(","):
            if not part.strip():
                continue
            k, sep, v = part.partition("=")
            if not sep:
                raise ConfigError(f"--param {part!r}: expected key=value")
            try:
                out[k.strip()] = float(v)
            except ValueError as exc:
                raise ConfigError(f"--param {k.strip()}: {exc}") from exc
    return out


def _law_from_args(args, cfg_params=None) -> DispersionLaw:
    kw = dict(cfg_params or {})
    kw.update(_kv_params(args.param))
    b1 = kw.pop("b1", 0.0)
    b3 = kw.pop("b3", 0.0)
    if args.law not in LAW_KINDS:
        raise ConfigError(f"law: expected one of {LAW_KINDS}, got {args.law!r}")
    try:
        return DispersionLaw(args.law, PhysParams(**kw), b1=b1, b3=b3)
    except TypeError as exc:
        raise ConfigError(f"param: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _times(start, end, n, spacing):
    if not (end > start >= 0) or n < 2:
        raise ConfigError("t-range: need 0 <= t-start < t-end and n >= 2")
    if spacing == "log":
        if start == 0:
            return np.concatenate(([0.0], np.logspace(math.log10(end) - 4, math.log10(end), n - 1)))
        return np.logspace(math.log10(start), math.log10(end), n)
    return np.linspace(start, end, n)


def cmd_oracle(args) -> int:
    law = _law_from_args(args)
    t = _times(args.t_start, args.t_end, args.n, args.spacing)
    s2 = sigma2(law, t)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "sigma2"])
        for a, b in zip(t, s2):
            w.writerow([repr(float(a)), repr(float(b))])
    return EXIT_OK


def figure1_curve(K=1.0, theta=1.0, b3=1.0, tau_max=2.0, n=401):
    """(tau, y): tau = (4/3)(K/b3)^(1/3) t, y = sqrt(K/theta) sigma^2."""
    p = Eq7Params(K, theta, b3)
    tau = np.linspace(0.0, tau_max, n)
    t = tau * p.time_unit
    y = np.array([eq7_sigma_from_time(v, p) ** 2 for v in t]) * math.sqrt(K / theta)
    return tau, y


def cmd_figure1(args) -> int:
    kw = {"K": 1.0, "theta": 1.0, "b3": 1.0}
    kw.update(_kv_params(args.param))
    unknown = set(kw) - {"K", "theta", "b3"}
    if unknown:
        raise ConfigError(f"param: figure1 takes K, theta, b3 (got {sorted(unknown)})")
    try:
        tau, y = figure1_curve(kw["K"], kw["theta"], kw["b3"], args.tau_max, args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "y"])
        for a, b in zip(tau, y):
            w.writerow([repr(float(a)), repr(float(b))])
    if args.chart:
        _chart(tau, [y], ["y"], "tau = (4/3)(K/b3)^(1/3) t", "y = sqrt(K/theta) sigma^2",
               Path(args.out).with_suffix(".svg"))
    print(f"plateau tau* = {TAU_STAR:.6f}")
    return EXIT_OK


@dataclass
class CompareResult:
    max_rel: float
    slope: float
    windows: list
    passed: bool


def compare_series(t, s2, law: DispersionLaw, tol: float, t_min=None, t_max=None,
                   initial="none", t0=0.0) -> CompareResult:
    """Relative sigma^2 deviation of a run from a law on the overlap window.

    ``initial`` removes the starting width: "quadrature" compares
    sqrt(s2^2 - s2(0)^2), "linear" compares s2 - s2(0).  ``t0`` shifts the
    law's time origin (virtual origin of a finite-width start).
    """
    t = np.asarray(t, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    s0 = float(s2[0]) if t[0] == 0 else 0.0
    if initial == "quadrature":
        meas = np.sqrt(np.maximum(s2**2 - s0**2, 0.0))
    elif initial == "linear":
        meas = s2 - s0
    elif initial == "none":
        meas = s2
    else:
        raise ConfigError(f"initial: expected none, quadrature or linear, got {initial!r}")
    sel = t > 0
    if t_min is not None:
        sel &= t >= t_min
    if t_max is not None:
        sel &= t <= t_max
    if sel.sum() < 2:
        raise ConfigError("compare: fewer than two samples in the window")
    tt, mm = t[sel], meas[sel]
    ref = sigma2(law, tt + t0)
    rel = np.abs(mm / ref - 1)
    slope = loglog_slope(tt + t0, mm) if np.all(mm > 0) else float("nan")
    # regime per decade of the window
    windows = []
    edges = 10.0 ** np.arange(math.floor(math.log10(tt[0])), math.ceil(math.log10(tt[-1])) + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        w = (tt >= lo) & (tt <= hi) & (mm > 0)
        if w.sum() >= 2:
            a = loglog_slope(tt[w] + t0, mm[w])
            windows.append((float(lo), float(hi), a, classify_regime(a)))
    mr = float(rel.max())
    return CompareResult(mr, slope, windows, bool(mr <= tol))


def cmd_compare(args) -> int:
    t, s2 = read_run_csv(args.run)
    law = _law_from_args(args)
    res = compare_series(t, s2, law, args.tol, args.t_min, args.t_max, args.initial, args.t0)
    print(f"max relative deviation {res.max_rel:.6g} (tolerance {args.tol:g}); slope {res.slope:.6g}")
    for lo, hi, a, reg in res.windows:
        print(f"  window [{lo:g}, {hi:g}]: alpha {a:.4f} {reg}")
    print("PASS" if res.passed else "FAIL")
    return EXIT_OK if res.passed else EXIT_COMPARE_FAIL


def _sweep_one(job):
    text, out = job
    try:
        simulate_config(RunConfig.parse_text(text), out)
        return out, EXIT_OK, ""
    except ConfigError as exc:
        return out, EXIT_CONFIG, str(exc)
    except (NumericalError, StabilityError) as exc:
        return out, EXIT_NUMERICAL, str(exc)


def cmd_sweep(args) -> int:
    """Cartesian product over the [sweep] section: ``section.key = v1, v2, ...``."""
    cfg = RunConfig.load(args.config, extra_sections=("sweep",))
    axes = []
    for key, raw in cfg.sections.pop("sweep").items():
        vals = [v.strip() for v in raw.split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"sweep.{key}: no values")
        axes.append((key, vals))
    if not axes:
        raise ConfigError("sweep: section is empty")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs, index = [], []
    for i, combo in enumerate(itertools.product(*[v for _, v in axes])):
        c = cfg
        for (key, _), val in zip(axes, combo):
            c = c.with_value(key, val)
        build_scenario(c)   # validate everything before running anything
        out = out_dir / f"run_{i:03d}.csv"
        jobs.append((c.to_ini(), str(out)))
        index.append((out.name, combo))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    worst = EXIT_OK
    with open(out_dir / "index.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["file", *[k for k, _ in axes], "status"])
        for (name, combo), (_, code, msg) in zip(index, results):
            w.writerow([name, *combo, code])
            if code:
                _err(f"{name}: {msg}")
                worst = max(worst, code)
    return worst


# ------------------------------------------------------------------ parser

def _add_law_args(p):
    p.add_argument("--law", required=True, choices=LAW_KINDS)
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="physical parameter or friction coefficient (b1, b3); repeatable or comma separated")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfric", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario and write its dispersion CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="tabulate a closed-form sigma^2(t) law")
    _add_law_args(p)
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("figure1", help="dimensionless width curve in the quartic potential")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="K, theta, b3")
    p.add_argument("--tau-max", type=float, default=2.0)
    p.add_argument("--n", type=int, default=401)
    p.add_argument("--chart", action="store_true", help="also write an SVG next to the CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("compare", help="compare a run CSV against a law")
    p.add_argument("--run", required=True)
    _add_law_args(p)
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--initial", choices=("none", "quadrature", "linear"), default="none",
                   help="remove the starting width before comparing")
    p.add_argument("--t0", type=float, default=0.0, help="time origin shift applied to the law")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="run the cartesian product of a [sweep] section")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except (NumericalError, StabilityError) as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
