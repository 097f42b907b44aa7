"""Command line front end.

    anisolp norm      --family F --s 1 --q 2 --p 2,2 --input field.mnf1
    anisolp decompose --input field.mnf1 --a 1,2 --out-dir bands/
    anisolp verify    --ineq npp --n 1 --p 1 --r inf --R 8 --trials 100 --seed 7
    anisolp sweep     --n 1 --p 1 --r inf --R-list 2,4,8,16,32,64

Options may also come from ``--config run.json`` (keys are the long option
names with dashes or underscores); flags given on the command line win.
Exit status: 0 all verdicts pass, 1 some verdict fails, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .anisotropy import Anisotropy
from .grid import GridError, GridSpec
from .io import FieldFileError, read_field, write_field
from .littlewood_paley import DecompositionError, build_family, decompose, max_admissible_level
from .mixed_norm import MixedExponents, parse_exponent
from .space_norms import SpaceParams, besov_norm, triebel_norm
from .verifier import suites
from .verifier.ensemble import KINDS
from .verifier.ratios import BalanceError, ExponentError, check_sobolev_params

INEQUALITIES = ("npp", "mixed-npp", "seq-npp", "sobolev", "lemma1", "subadd", "all")
COMMANDS = ("norm", "decompose", "verify", "sweep")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

    def get(self, key, default=None):
        v = self.options.get(key)
        return default if v is None else v


def _list(text, conv=float) -> list:
    if isinstance(text, (list, tuple)):
        return [conv(v) for v in text]
    return [conv(v) for v in str(text).split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anisolp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--seed", type=int)
        p.add_argument("--json", dest="json_out", help="write the JSON report here")
        p.add_argument("--csv", dest="csv_out", help="write the per-trial CSV here")

    p = sub.add_parser("norm", help="B or F quasi-norm of a field file")
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--family", choices=["B", "F", "b", "f"])
    p.add_argument("--s", type=float)
    p.add_argument("--q")
    p.add_argument("--p")
    p.add_argument("--a", help="anisotropy weights, default all ones")
    p.add_argument("--jmax", type=int, help="default: largest level the grid admits")

    p = sub.add_parser("decompose", help="write the Littlewood-Paley bands of a field")
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--out-dir")
    p.add_argument("--a")
    p.add_argument("--jmax", type=int)

    p = sub.add_parser("verify", help="run an inequality suite")
    common(p)
    p.add_argument("--ineq", choices=INEQUALITIES)
    p.add_argument("--n", type=int)
    p.add_argument("--p")
    p.add_argument("--r")
    p.add_argument("--R", help="radius (npp) or per-axis half-widths (mixed-npp)")
    p.add_argument("--a")
    p.add_argument("--s", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--q")
    p.add_argument("--space", choices=["F", "B"])
    p.add_argument("--kind", choices=KINDS[:3])
    p.add_argument("--trials", type=int)
    p.add_argument("--N", help="samples per axis (default: chosen from the support)")

    p = sub.add_parser("sweep", help="fit the growth exponent of the NPP constant")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--p")
    p.add_argument("--r")
    p.add_argument("--R-list")
    p.add_argument("--kinds", help="comma separated ensemble kinds")
    p.add_argument("--trials", type=int)
    p.add_argument("--slope-tol", type=float)
    p.add_argument("--N")
    return parser


DEFAULTS = {
    "verify": {"ineq": "npp", "n": 1, "trials": 100, "seed": 0, "q": "2", "space": "F", "kind": "random-rect"},
    "sweep": {"n": 1, "p": "1", "r": "inf", "R_list": "2,4,8,16,32,64", "trials": 100, "seed": 0,
              "kinds": "dirichlet,gaussian-bump,random-rect", "slope_tol": suites.SLOPE_TOL},
    "norm": {"family": "F", "s": 0.0, "q": "2"},
    "decompose": {},
}

# per-inequality defaults, applied after the config file and flags
INEQ_DEFAULTS = {
    "npp": {"p": "1", "r": "inf", "R": "8"},
    "mixed-npp": {"p": "1,2", "r": "2,inf", "R": "4,8"},
    "seq-npp": {"a": "1,2", "p": "1,1", "r": "2,3"},
    "sobolev": {"a": "1,1", "s": 1.0, "t": 0.0, "p": "1,1", "r": "2,2"},
}


CONFIG_ALIASES = {"json": "json_out", "csv": "csv_out", "out-dir": "out_dir", "R-list": "R_list"}
CONFIG_KEYS = frozenset(json.loads(
    (Path(__file__).parent / "schema" / "run_config.schema.json").read_text())["properties"])


def load_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags."""
    opts = dict(DEFAULTS.get(args.command, {}))
    problems = []
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"config: cannot read {args.config}: {exc}"]) from exc
        if not isinstance(data, dict):
            raise ConfigError(["config: top level must be a JSON object"])
        cmd = data.pop("command", args.command)
        if cmd != args.command:
            problems.append(f"config: command {cmd!r} does not match {args.command!r}")
        for k, v in data.items():
            k = CONFIG_ALIASES.get(k, k.replace("-", "_"))
            if k not in CONFIG_KEYS:
                problems.append(f"config: unknown key {k!r}")
            opts[k] = v
    for k, v in vars(args).items():
        if k in ("command", "config") or v is None:
            continue
        opts[k] = v
    if problems:
        raise ConfigError(problems)
    return RunConfig(args.command, opts)


def _check_writable(path, name: str, problems: list[str]) -> None:
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        problems.append(f"{name}: directory {parent} does not exist")
    elif not os.access(parent, os.W_OK):
        problems.append(f"{name}: directory {parent} is not writable")


def _exps(cfg: RunConfig, key: str, problems: list[str], n: int | None = None):
    try:
        e = MixedExponents(str(cfg.get(key)))
    except ValueError as exc:
        problems.append(f"{key}: {exc}")
        return None
    if n is not None and len(e) == 1 and n > 1:
        e = MixedExponents(e.p * n)
    if n is not None and len(e) != n:
        problems.append(f"{key}: expected {n} values, got {len(e)}")
        return None
    return e


def _grid(cfg: RunConfig, n: int, problems: list[str]) -> GridSpec | None:
    if cfg.get("N") is None:
        return None
    try:
        sizes = _list(cfg.get("N"), int)
        if len(sizes) == 1:
            sizes *= n
        return GridSpec(sizes)
    except (ValueError, GridError) as exc:
        problems.append(f"N: {exc}")
        return None


def validate(cfg: RunConfig) -> dict:
    """Check everything up front; returns parsed values or raises one
    :class:`ConfigError` listing every problem."""
    problems: list[str] = []
    out: dict = {}
    c = cfg.command
    if c in ("verify", "sweep"):
        _check_writable(cfg.get("json_out"), "json", problems)
        _check_writable(cfg.get("csv_out"), "csv", problems)
        out["seed"] = int(cfg.get("seed", 0))
        if not 0 <= out["seed"] < 2**64:
            problems.append("seed: must be a 64-bit unsigned integer")
        out["trials"] = int(cfg.get("trials", 100))
        if out["trials"] < 1:
            problems.append("trials: must be >= 1")
    if c in ("norm", "decompose"):
        src = cfg.get("input")
        if src is None:
            problems.append("input: required")
        else:
            try:
                out["field"] = read_field(src)
            except OSError as exc:
                problems.append(f"input: cannot read {src}: {exc.strerror or exc}")
            except FieldFileError as exc:
                problems.append(f"input: {exc.code}: {exc}")
        field_ = out.get("field")
        n = field_.ndim if field_ else None
        aniso = None
        try:
            aniso = Anisotropy(_list(cfg.get("a"))) if cfg.get("a") is not None else (
                Anisotropy.isotropic(n) if n else None)
        except ValueError as exc:
            problems.append(f"a: {exc}")
        if aniso is not None and n is not None and aniso.ndim != n:
            problems.append(f"a: {aniso.ndim} weights for a {n}-dimensional field")
            aniso = None
        out["aniso"] = aniso
        if field_ is not None and aniso is not None:
            jmax = cfg.get("jmax")
            jmax = max_admissible_level(field_.spec, aniso) if jmax is None else int(jmax)
            try:
                out["family"] = build_family(field_.spec, aniso, jmax)
            except (GridError, ValueError) as exc:
                problems.append(f"jmax: {exc}")
        if c == "decompose":
            if cfg.get("out_dir") is None:
                problems.append("out-dir: required")
            elif not Path(cfg.get("out_dir")).is_dir():
                problems.append(f"out-dir: {cfg.get('out_dir')} is not a directory")
        else:
            fam = str(cfg.get("family", "F")).upper()
            try:
                if n is not None and aniso is not None:
                    p = _exps(cfg, "p", problems, n)
                    if p is not None:
                        out["params"] = SpaceParams(float(cfg.get("s", 0.0)), aniso, p, cfg.get("q", "2"), fam)
            except ValueError as exc:
                problems.append(f"p/q/family: {exc}")
            if cfg.get("p") is None:
                problems.append("p: required")
    if c == "verify":
        ineq = cfg.get("ineq", "npp")
        if ineq not in INEQUALITIES:
            problems.append(f"ineq: unknown inequality {ineq!r}")
        out["ineq"] = ineq
        for k, v in INEQ_DEFAULTS.get(ineq, {}).items():
            if cfg.options.get(k) is None:
                cfg.options[k] = v
        out["kind"] = cfg.get("kind", "random-rect")
        if ineq == "npp":
            n = int(cfg.get("n", 1))
            out["n"] = n
            try:
                out["p"], out["r"] = parse_exponent(cfg.get("p")), parse_exponent(cfg.get("r"))
                if not 0 < out["p"] <= out["r"]:
                    problems.append(f"p, r: need 0 < p <= r, got p={out['p']}, r={out['r']}")
            except ValueError as exc:
                problems.append(f"p/r: {exc}")
            try:
                out["R"] = float(_list(cfg.get("R"))[0])
                if out["R"] <= 0:
                    problems.append("R: must be positive")
            except (ValueError, IndexError):
                problems.append(f"R: cannot parse {cfg.get('R')!r}")
            out["grid"] = _grid(cfg, n, problems)
            if out.get("grid") and out.get("R"):
                for k, nyq in enumerate(out["grid"].nyquist):
                    if out["R"] >= nyq:
                        problems.append(f"R: radius {out['R']} reaches Nyquist {nyq:g} on axis {k + 1}")
        elif ineq == "mixed-npp":
            try:
                R = _list(cfg.get("R"))
            except ValueError:
                problems.append(f"R: cannot parse {cfg.get('R')!r}")
                R = []
            n = len(R) or 1
            if any(x <= 0 for x in R):
                problems.append("R: half-widths must be positive")
            out["R"] = R
            out["p"] = _exps(cfg, "p", problems, n)
            out["r"] = _exps(cfg, "r", problems, n)
            if out["p"] is not None and out["r"] is not None:
                for k, (pk, rk) in enumerate(zip(out["p"], out["r"])):
                    if pk > rk:
                        problems.append(f"p, r: axis {k + 1} has p = {pk} > r = {rk}")
            out["grid"] = _grid(cfg, n, problems)
            if out.get("grid") and R:
                for k, (rk, nyq) in enumerate(zip(R, out["grid"].nyquist)):
                    if rk >= nyq:
                        problems.append(f"R: half-width {rk} reaches Nyquist {nyq:g} on axis {k + 1}")
        elif ineq in ("seq-npp", "sobolev"):
            try:
                aniso = Anisotropy(_list(cfg.get("a")))
            except ValueError as exc:
                problems.append(f"a: {exc}")
                aniso = None
            out["aniso"] = aniso
            n = aniso.ndim if aniso else 1
            out["p"] = _exps(cfg, "p", problems, n)
            out["r"] = _exps(cfg, "r", problems, n)
            try:
                out["q"] = parse_exponent(cfg.get("q", "2"))
            except ValueError as exc:
                problems.append(f"q: {exc}")
            if ineq == "seq-npp" and out["p"] is not None and out["r"] is not None:
                if out["p"] == out["r"]:
                    problems.append("p, r: the sequence inequality needs p != r")
                for k, (pk, rk) in enumerate(zip(out["p"], out["r"])):
                    if not pk <= rk < math.inf:
                        problems.append(f"p, r: axis {k + 1} needs p_k <= r_k < inf, got {pk}, {rk}")
            if ineq == "sobolev":
                out["s"] = float(cfg.get("s"))
                out["t"] = float(cfg.get("t"))
                out["space"] = cfg.get("space", "F")
                if aniso is not None and out["p"] is not None and out["r"] is not None:
                    try:
                        check_sobolev_params(aniso, out["s"], out["t"], out["p"], out["r"], out["space"])
                    except BalanceError as exc:
                        problems.append(f"s, t: {exc}")
                    except ExponentError as exc:
                        problems.append(f"p, r: {exc}")
    if c == "sweep":
        out["n"] = int(cfg.get("n", 1))
        try:
            out["p"], out["r"] = parse_exponent(cfg.get("p")), parse_exponent(cfg.get("r"))
            if not 0 < out["p"] <= out["r"]:
                problems.append(f"p, r: need 0 < p <= r, got p={out['p']}, r={out['r']}")
        except ValueError as exc:
            problems.append(f"p/r: {exc}")
        try:
            out["R_list"] = _list(cfg.get("R_list"))
        except ValueError:
            problems.append(f"R-list: cannot parse {cfg.get('R_list')!r}")
            out["R_list"] = []
        if len(out["R_list"]) < 3:
            problems.append("R-list: need at least three radii")
        kinds = _list(cfg.get("kinds"), str)
        for k in kinds:
            if k not in KINDS[:3]:
                problems.append(f"kinds: unknown ensemble kind {k!r}")
        out["kinds"] = kinds
        out["slope_tol"] = float(cfg.get("slope_tol"))
        out["grid"] = _grid(cfg, out["n"], problems)
        if out.get("grid") and out["R_list"]:
            for k, nyq in enumerate(out["grid"].nyquist):
                if max(out["R_list"]) >= nyq:
                    problems.append(f"R-list: radius {max(out['R_list'])} reaches Nyquist {nyq:g} on axis {k + 1}")
    if problems:
        raise ConfigError(problems)
    return out


def _emit(report, v: dict, stdout) -> int:
    report.write(v.get("json_out"), v.get("csv_out"))
    stdout.write(report.to_json())
    return EXIT_PASS if report.verdict else EXIT_FAIL


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    v = validate(cfg)
    v["json_out"], v["csv_out"] = cfg.get("json_out"), cfg.get("csv_out")
    c = cfg.command
    if c == "norm":
        bands = decompose(v["field"], v["family"])
        params = v["params"]
        value = besov_norm(bands, params) if params.family == "B" else triebel_norm(bands, params)
        stdout.write(f"{value!r}\n")
        return EXIT_PASS
    if c == "decompose":
        bands = decompose(v["field"], v["family"])
        width = max(2, len(str(len(bands) - 1)))
        for j, band in enumerate(bands):
            path = Path(cfg.get("out_dir")) / f"band_{j:0{width}d}.mnf1"
            write_field(band, path)
            stdout.write(f"{path}\n")
        return EXIT_PASS
    if c == "sweep":
        report = suites.scaling_sweep(v["n"], v["p"], v["r"], v["R_list"], v["trials"], v["seed"],
                                      kinds=v["kinds"], slope_tol=v["slope_tol"], grid=v["grid"])
        return _emit(report, v, stdout)
    ineq, trials, seed = v["ineq"], v["trials"], v["seed"]
    if ineq == "npp":
        report = suites.npp_suite(v["n"], v["p"], v["r"], v["R"], trials, seed, kind=v["kind"], grid=v["grid"])
    elif ineq == "mixed-npp":
        report = suites.mixed_npp_suite(v["p"], v["r"], v["R"], trials, seed, kind=v["kind"], grid=v["grid"])
    elif ineq == "seq-npp":
        report = suites.seq_npp_suite(v["aniso"], v["p"], v["r"], v["q"], trials, seed)
    elif ineq == "sobolev":
        report = suites.sobolev_suite(v["aniso"], v["s"], v["t"], v["p"], v["r"], v["q"], trials, seed,
                                      space=v["space"])
    elif ineq == "lemma1":
        report = suites.interpolation_suite(seed)
    elif ineq == "subadd":
        report = suites.subadditivity_suite(min(10_000, 100 * trials), seed)
    else:
        report = suites.run_all(seed, trials)
    return _emit(report, v, stdout)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args)
        return run(cfg)
    except ConfigError as exc:
        sys.stderr.write("configuration error:\n")
        for problem in exc.problems:
            sys.stderr.write(f"  - {problem}\n")
        return EXIT_CONFIG
    except (DecompositionError, GridError, FieldFileError, OSError) as exc:
        sys.stderr.write(f"configuration error:\n  - {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
