"""Command-line front end.

Every subcommand resolves its settings from defaults, an optional INI file
(``--config``) and flags, in increasing priority. The resolved settings go
into ``manifest.json`` in the output directory before any computation
starts; ``homstab replay manifest.json`` re-runs them.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import datetime as _dt
import json
import math
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np
import scipy

from . import __version__
from .decay import sharp_constant, table_rows, write_table_csv, write_table_json
from .errors import ConfigError, NumericalFailure
from .field import VelocityField, evaluate_point_cloud
from .functionals import cone_log_check, write_functionals_json
from .inequalities import (
    CURATED_AQ,
    CknSpec,
    WeightSpec,
    aq_membership,
    ckn_conditions,
    ckn_empirical,
    log_sobolev_check,
    muckenhoupt_ratio,
)
from .profile import (
    Classification,
    HomParams,
    ProfileGrid,
    cbar3,
    gamma_range,
    in_J,
    is_admissible,
    profile_to_csv,
    profile_to_json,
    solve_profile,
)
from .spectral import (
    PerturbationSpec,
    SimConfig,
    energy_report,
    envelope_comparison,
    make_background,
    run_sim,
    write_checkpoint,
)

OUTPUT_ENV = "HOMSTAB_OUTPUT_DIR"
DEFAULT_OUTPUT = "homstab-out"
MANIFEST_SCHEMA = "homstab.manifest/1"
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


# --------------------------------------------------------------------------
# options: one table drives argparse, INI lookup and the resolved config
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Option:
    section: str
    key: str
    kind: str  # float, int, str, floats, ints, bool
    default: Any
    help: str = ""
    choices: tuple | None = None

    @property
    def flag(self) -> str:
        return "--" + self.key.replace("_", "-")

    @property
    def dest(self) -> str:
        return f"{self.section}__{self.key}"


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _convert(opt: Option, raw) -> Any:
    try:
        if opt.kind == "float":
            return float(raw)
        if opt.kind == "int":
            return int(raw)
        if opt.kind == "bool":
            return raw if isinstance(raw, bool) else _parse_bool(str(raw))
        if opt.kind == "floats":
            items = raw.replace(",", " ").split() if isinstance(raw, str) else raw
            return [float(v) for v in items]
        if opt.kind == "ints":
            items = raw.replace(",", " ").split() if isinstance(raw, str) else raw
            return [int(v) for v in items]
        value = str(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{opt.section}.{opt.key}: cannot parse {raw!r}") from exc
    if opt.choices and value not in opt.choices:
        raise ConfigError(f"{opt.section}.{opt.key} must be one of {opt.choices}")
    return value


def _add_options(parser: argparse.ArgumentParser, options: list[Option]) -> None:
    parser.add_argument("--config", help="INI file; flags override its values")
    parser.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})")
    for opt in options:
        kw: dict[str, Any] = {"dest": opt.dest, "default": None, "help": opt.help, "metavar": opt.key.upper()}
        if opt.kind in ("floats", "ints"):
            kw["nargs"] = "+"
            kw["type"] = float if opt.kind == "floats" else int
        elif opt.kind == "bool":
            kw["type"] = _parse_bool_arg
        else:
            kw["type"] = {"float": float, "int": int, "str": str}[opt.kind]
        if opt.choices:
            kw["choices"] = opt.choices
        parser.add_argument(opt.flag, **kw)


def _parse_bool_arg(text: str) -> bool:
    try:
        return _parse_bool(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def resolve(options: list[Option], args: argparse.Namespace) -> dict[str, dict[str, Any]]:
    """Defaults, then the INI file, then flags."""
    ini = configparser.ConfigParser()
    ini.optionxform = str  # keys are case-sensitive (L, N, T, R_c)
    if getattr(args, "config", None):
        if not ini.read(args.config, encoding="utf-8"):
            raise ConfigError(f"cannot read config file {args.config}")
        known = {(o.section, o.key) for o in options}
        for sec in ini.sections():
            for key in ini[sec]:
                if (sec, key) not in known:
                    raise ConfigError(f"unknown config key {sec}.{key}")
    out: dict[str, dict[str, Any]] = {}
    for opt in options:
        value = opt.default
        if ini.has_option(opt.section, opt.key):
            value = ini.get(opt.section, opt.key)
        flag = getattr(args, opt.dest, None)
        if flag is not None:
            value = flag
        if value is not None:
            value = _convert(opt, value)
        out.setdefault(opt.section, {})[opt.key] = value
    return out


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


BACKGROUND = [
    Option("background", "c1", "float", 0.0, "left endpoint parameter"),
    Option("background", "c2", "float", 0.0, "right endpoint parameter"),
    Option("background", "c3", "float", 0.1, "interior parameter"),
    Option("background", "gamma", "float", 0.0, "profile value at the equator"),
]

SIMULATION = BACKGROUND + [
    Option("grid", "L", "float", 2.0 * math.pi, "box length"),
    Option("grid", "N", "int", 32, "grid points per axis (power of two)"),
    Option("time", "dt", "float", 0.01, "time step"),
    Option("time", "T", "float", 5.0, "final time"),
    Option("time", "record_every", "int", 1, "record norms every this many steps"),
    Option("mollifier", "rho_m", "float", 0.6, "axis blending radius"),
    Option("mollifier", "R_c", "float", 2.8, "outer cutoff radius"),
    Option("perturbation", "kind", "str", "random", "initial perturbation", ("random", "mode", "zero")),
    Option("perturbation", "l3_norm", "float", 0.05, "L^3 norm of the initial perturbation"),
    Option("perturbation", "k0", "float", 2.0, "spectral peak parameter of random data"),
    Option("perturbation", "seed", "int", 0, "random seed"),
    Option("perturbation", "mode", "ints", [1, 0, 0], "wave vector of the mode perturbation"),
    Option("output", "q_list", "floats", [6.0], "extra L^q norms to record"),
    Option("output", "tau", "float", 0.5, "tau of the decay envelope"),
    Option("output", "checkpoint", "bool", True, "write the final state"),
]


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    options: list[Option]
    run: Callable[[dict, Path], list[str]]
    seed_of: Callable[[dict], Any] = lambda cfg: None


def _params(cfg: dict) -> HomParams:
    b = cfg["background"]
    return HomParams(b["c1"], b["c2"], b["c3"], b["gamma"])


def _c_gamma(cfg: dict) -> HomParams:
    c = cfg["params"]["c"]
    if len(c) != 3:
        raise ConfigError("--c needs three values")
    return HomParams(c[0], c[1], c[2], cfg["params"]["gamma"])


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, allow_nan=True, default=_json_default) + "\n", encoding="utf-8")


def _json_default(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, tuple):
        return list(v)
    raise TypeError(f"cannot serialize {type(v)}")


# classify ------------------------------------------------------------------

CLASSIFY = [
    Option("params", "c", "floats", None, "c1 c2 c3"),
    Option("params", "gamma", "float", None, "optional gamma for the M test"),
    Option("params", "tol", "float", 1e-8, "bisection tolerance of gamma_range"),
]


def run_classify(cfg: dict, out: Path) -> list[str]:
    p = cfg["params"]
    c = p["c"]
    if c is None or len(c) != 3:
        raise ConfigError("--c needs three values")
    # cbar3 is defined only for c1, c2 >= -1
    defined = c[0] >= -1.0 and c[1] >= -1.0
    report: dict[str, Any] = {"schema": "homstab.classify/1", "c": c, "cbar3": cbar3(c[0], c[1]) if defined else None}
    if not in_J(c):
        report["verdict"] = Classification.OUTSIDE_J.value
    else:
        rng = gamma_range(c, p["tol"])
        report.update({"gamma_minus": rng.gamma_minus, "gamma_plus": rng.gamma_plus, "tol": rng.tol})
        report["verdict"] = Classification.IN_J.value
        if p["gamma"] is not None:
            report["gamma"] = p["gamma"]
            report["verdict"] = is_admissible(HomParams(*c, p["gamma"]), p["tol"]).value
        else:
            m_candidate = c[0] == 0.0 and c[1] == 0.0 and c[2] > -4.0
            report["M_for_gamma_in_open_range"] = m_candidate
    _write_json(out / "classify.json", report)
    lines = [f"verdict: {report['verdict']}"]
    if report["cbar3"] is not None:
        lines.append(f"cbar3: {_fmt(report['cbar3'])}")
    if "gamma_minus" in report:
        lines.append(f"gamma_minus: {_fmt(report['gamma_minus'])} (tol {report['tol']:.1e})")
        lines.append(f"gamma_plus: {_fmt(report['gamma_plus'])} (tol {report['tol']:.1e})")
    print("\n".join(lines))
    return ["classify.json"]


# profile -------------------------------------------------------------------

PROFILE = [
    Option("params", "c", "floats", [0.0, 0.0, 0.0], "c1 c2 c3"),
    Option("params", "gamma", "float", 1.0, "profile value at the equator"),
    Option("solver", "tol", "float", 1e-8, "residual tolerance"),
    Option("solver", "spacing", "float", None, "export spacing in xi"),
]


def run_profile(cfg: dict, out: Path) -> list[str]:
    params = _c_gamma(cfg)
    prof = solve_profile(params, ProfileGrid(spacing=cfg["solver"]["spacing"]), cfg["solver"]["tol"])
    profile_to_csv(prof, out / "profile.csv")
    profile_to_json(prof, out / "profile.json")
    print(f"branch: {prof.branch.value}  residual: {prof.max_residual:.3e}  nodes: {len(prof.nodes)}")
    return ["profile.csv", "profile.json"]


# field ---------------------------------------------------------------------

FIELD = [
    Option("params", "c", "floats", [0.0, 0.0, 1.0], "c1 c2 c3"),
    Option("params", "gamma", "float", 0.0, "profile value at the equator"),
    Option("field", "points", "str", None, "CSV of x,y,z points to evaluate"),
    Option("field", "h", "float", None, "finite-difference step of the residual column"),
]


def run_field(cfg: dict, out: Path) -> list[str]:
    fld = VelocityField(solve_profile(_c_gamma(cfg)))
    outputs = ["functionals.json"]
    rep = write_functionals_json(fld, out / "functionals.json")
    if cfg["field"]["points"]:
        n = evaluate_point_cloud(fld, cfg["field"]["points"], out / "points.csv", cfg["field"]["h"])
        outputs.append("points.csv")
        print(f"evaluated {n} points")
    k = rep["K"]
    print(f"b: {rep['b']['value']}  K: cone {k['k_cone']:.6g} outer {k['k_outer']:.6g} grad {k['k_grad']:.6g}")
    return outputs


# constants -----------------------------------------------------------------

CONSTANTS = [
    Option("constants", "q", "floats", [3.5, 4.0, 6.0, 9.0, 20.0], "exponents q > 3"),
    Option("constants", "tau", "floats", [0.1, 0.5, 0.9], "tau values in (0, 1)"),
]


def run_constants(cfg: dict, out: Path) -> list[str]:
    rows = table_rows(cfg["constants"]["q"], cfg["constants"]["tau"])
    write_table_csv(rows, out / "constants.csv")
    write_table_json(rows, out / "constants.json")
    sys.stdout.write((out / "constants.csv").read_text(encoding="utf-8"))
    return ["constants.csv", "constants.json"]


# verify --------------------------------------------------------------------

SUITES = ("ckn-hardy", "ckn-empirical", "aq", "log-sobolev", "cone-log", "decay-limits")

VERIFY = [
    Option("verify", "suite", "str", "ckn-hardy", "check to run", SUITES),
    Option("verify", "alpha", "float", 0.5, "alpha of the Hardy-type CKN case"),
    Option("verify", "samples", "int", 50, "number of random samples"),
    Option("verify", "seed", "int", 0, "random seed"),
]


def _suite(cfg: dict) -> dict:
    v = cfg["verify"]
    suite = v["suite"]
    if suite == "ckn-hardy":
        rep = ckn_conditions(CknSpec.hardy_type(v["alpha"]))
        return {"passed": rep.overall, "conditions": rep.flags(), "alpha": v["alpha"]}
    if suite == "ckn-empirical":
        spec = CknSpec.hardy_type(v["alpha"])
        emp = ckn_empirical(spec, samples=v["samples"], seed=v["seed"])
        ratios = [s.ratio for s in emp.samples]
        return {"passed": bool(np.all(np.isfinite(ratios))), "observed_constant": emp.constant,
                "alpha": v["alpha"], "samples": len(ratios)}
    if suite == "aq":
        rows = []
        for t1, t2, q in CURATED_AQ:
            spec = WeightSpec(t1, t2, q)
            res = muckenhoupt_ratio(spec, seed=v["seed"])
            rows.append({"theta1": t1, "theta2": t2, "q": q, "member": aq_membership(spec),
                         "bounded": res.bounded, "growth": res.growth})
        return {"passed": all(r["member"] == r["bounded"] for r in rows), "points": rows}
    if suite == "log-sobolev":
        m = log_sobolev_check(samples=v["samples"], seed=v["seed"])
        return {"passed": m >= -1e-8, "min_margin": m, "samples": v["samples"]}
    if suite == "cone-log":
        rep = cone_log_check(seed=v["seed"])
        return {"passed": rep.worst <= 1e-12, **asdict(rep)}
    # decay-limits
    low = sharp_constant(3.0 + 1e-8, 0.5)
    rows = []
    for tau in (0.1, 0.5, 0.9):
        lim = 3.0 ** -1.75 * math.exp(-2.0) * (4.0 * math.pi * (1.0 - tau)) ** -0.5
        rows.append({"tau": tau, "q_large": sharp_constant(1e8, tau), "limit": lim})
    ok = abs(low - 1.0) <= 1e-6 and all(abs(r["q_large"] - r["limit"]) <= 1e-6 for r in rows)
    return {"passed": ok, "q_near_3": low, "large_q": rows}


def run_verify(cfg: dict, out: Path) -> list[str]:
    rep = {"schema": "homstab.verify/1", "suite": cfg["verify"]["suite"], **_suite(cfg)}
    _write_json(out / "verify.json", rep)
    print(f"{rep['suite']}: {'PASS' if rep['passed'] else 'FAIL'}")
    return ["verify.json"]


# simulate ------------------------------------------------------------------


def sim_config(cfg: dict) -> SimConfig:
    p = cfg["perturbation"]
    mode = p["mode"]
    if len(mode) != 3:
        raise ConfigError("mode needs three integers")
    init = PerturbationSpec(p["kind"], p["l3_norm"], p["k0"], p["seed"], tuple(mode))
    return SimConfig(
        params=_params(cfg),
        L=cfg["grid"]["L"],
        N=cfg["grid"]["N"],
        dt=cfg["time"]["dt"],
        T=cfg["time"]["T"],
        rho_m=cfg["mollifier"]["rho_m"],
        R_c=cfg["mollifier"]["R_c"],
        init=init,
        q_list=tuple(cfg["output"]["q_list"]),
        record_every=cfg["time"]["record_every"],
    ).validate()


def run_simulate(cfg: dict, out: Path) -> list[str]:
    config = sim_config(cfg)
    bg = make_background(config.params, config)
    _write_json(out / "background.json", {"schema": "homstab.background/1", **bg.report()})
    series = run_sim(config, bg)
    series.to_csv(out / "norms.csv")
    outputs = ["background.json", "norms.csv"]
    if config.record_every == 1:
        rep = energy_report(series, bg)
        _write_json(out / "energy.json", {
            "schema": "homstab.energy/1",
            "max_defect": rep.max_defect,
            "max_ratio": rep.max_ratio,
            "k_background": rep.k_background,
            "comparison": rep.comparison,
            "bound": rep.bound,
            "ratio_within_bound": rep.ratio_within_bound,
            "defects": rep.defects,
        })
        outputs.append("energy.json")
    if 6.0 in config.q_list and series.l3[0] > 0.0:
        env = envelope_comparison(series, 6.0, cfg["output"]["tau"])
        _write_json(out / "envelope.json", {
            "schema": "homstab.envelope/1", "q": env.q, "tau": env.tau, "t_min": env.t_min,
            "checked": env.checked, "below": env.below, "crossings": env.crossings,
        })
        outputs.append("envelope.json")
        print(env.describe())
    if cfg["output"]["checkpoint"]:
        write_checkpoint(out / "final.chk", series.final_state)
        outputs.append("final.chk")
    print(f"t={series.t[-1]:.6g}  ||w||_2={series.l2[-1]:.6g}  ||w||_3={series.l3[-1]:.6g}")
    return outputs


# sweep ---------------------------------------------------------------------

SWEEP = SIMULATION + [
    Option("sweep", "c3_values", "floats", [0.05, 0.1, 0.2], "background c3 values"),
    Option("sweep", "seeds", "ints", [0], "perturbation seeds"),
    Option("sweep", "workers", "int", 1, "parallel worker processes"),
]

SWEEP_COLUMNS = ("run", "c3", "seed", "t_final", "l2_initial", "l2_final", "l3_initial", "l3_final", "max_cross_ratio")


def _sweep_one(job: tuple[str, dict, str]) -> dict:
    name, cfg, out = job
    run_dir = Path(out)
    run_dir.mkdir(parents=True, exist_ok=True)
    _write_manifest(run_dir, "simulate", cfg, status="running")
    outputs = run_simulate(cfg, run_dir)
    _write_manifest(run_dir, "simulate", cfg, status="done", outputs=outputs)
    with open(run_dir / "norms.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    grad = np.array([float(r["grad_l2"]) for r in rows])
    cross = np.array([float(r["cross"]) for r in rows])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(grad > 0.0, np.abs(cross) / grad**2, 0.0)
    return {
        "run": name,
        "c3": cfg["background"]["c3"],
        "seed": cfg["perturbation"]["seed"],
        "t_final": float(rows[-1]["t"]),
        "l2_initial": float(rows[0]["l2"]),
        "l2_final": float(rows[-1]["l2"]),
        "l3_initial": float(rows[0]["l3"]),
        "l3_final": float(rows[-1]["l3"]),
        "max_cross_ratio": float(ratio.max()),
    }


def run_sweep(cfg: dict, out: Path) -> list[str]:
    jobs = []
    for i, c3 in enumerate(cfg["sweep"]["c3_values"]):
        for seed in cfg["sweep"]["seeds"]:
            sub = json.loads(json.dumps({k: v for k, v in cfg.items() if k != "sweep"}))
            sub["background"]["c3"] = c3
            sub["perturbation"]["seed"] = seed
            sim_config(sub)
            name = f"run-{i:03d}-seed-{seed}"
            jobs.append((name, sub, str(out / name)))
    workers = max(1, cfg["sweep"]["workers"])
    if workers == 1:
        results = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in results:
            w.writerow([r[c] if isinstance(r[c], str) else _fmt(r[c]) for c in SWEEP_COLUMNS])
    print(f"{len(results)} runs written to {out}")
    return ["sweep.csv"] + [f"{j[0]}/norms.csv" for j in jobs]


COMMANDS = {
    c.name: c
    for c in (
        Command("classify", "classify c and report the admissible gamma range", CLASSIFY, run_classify),
        Command("profile", "solve and export a profile", PROFILE, run_profile),
        Command("field", "velocity field functionals and point evaluation", FIELD, run_field),
        Command("constants", "decay-constant table", CONSTANTS, run_constants),
        Command("verify", "run an inequality or constant check", VERIFY, run_verify,
                lambda cfg: cfg["verify"]["seed"]),
        Command("simulate", "pseudo-spectral perturbation run", SIMULATION, run_simulate,
                lambda cfg: cfg["perturbation"]["seed"]),
        Command("sweep", "independent simulations over c3 and seeds", SWEEP, run_sweep,
                lambda cfg: cfg["sweep"]["seeds"]),
    )
}


# --------------------------------------------------------------------------
# manifests and entry point
# --------------------------------------------------------------------------


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _write_manifest(out: Path, name: str, cfg: dict, status: str, outputs: list[str] | None = None,
                    started: str | None = None) -> dict:
    path = out / "manifest.json"
    prev = json.loads(path.read_text(encoding="utf-8")) if path.exists() else {}
    doc = {
        "schema": MANIFEST_SCHEMA,
        "subcommand": name,
        "config": cfg,
        "seed": COMMANDS[name].seed_of(cfg),
        "version": __version__,
        "build": {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__},
        "started": started or prev.get("started") or _now(),
        "finished": _now() if status != "running" else None,
        "status": status,
        "outputs": outputs or [],
    }
    _write_json(path, doc)
    return doc


def _output_dir(arg: str | None) -> Path:
    out = Path(arg or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)
    out.mkdir(parents=True, exist_ok=True)
    return out


def execute(name: str, cfg: dict, out: Path) -> list[str]:
    """Write the manifest, run the subcommand, then record its outputs."""
    _write_manifest(out, name, cfg, status="running", started=_now())
    try:
        outputs = COMMANDS[name].run(cfg, out)
    except (ConfigError, NumericalFailure) as exc:
        _write_manifest(out, name, cfg, status=f"failed: {type(exc).__name__}: {exc}")
        raise
    _write_manifest(out, name, cfg, status="done", outputs=outputs)
    return outputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"homstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS.values():
        _add_options(sub.add_parser(cmd.name, help=cmd.help), cmd.options)
    rp = sub.add_parser("replay", help="re-run the configuration stored in a manifest")
    rp.add_argument("manifest")
    rp.add_argument("--out", help="output directory for the replayed run")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            try:
                doc = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read manifest {args.manifest}: {exc}") from exc
            if doc.get("schema") != MANIFEST_SCHEMA or doc.get("subcommand") not in COMMANDS:
                raise ConfigError(f"{args.manifest} is not a replayable manifest")
            execute(doc["subcommand"], doc["config"], _output_dir(args.out))
        else:
            cmd = COMMANDS[args.command]
            cfg = resolve(cmd.options, args)
            execute(cmd.name, cfg, _output_dir(args.out))
    except ConfigError as exc:
        print(f"homstab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"homstab: numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
