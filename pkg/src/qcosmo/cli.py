"""Command-line entry point: ``qcosmo {decompose,exact,vqe,paper}``.

Settings resolve as built-in defaults < ``--config`` JSON file < explicit
flags. Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import AnsatzSpec
from .eigensolver import eigh
from .exceptions import ConfigError, QcosmoError
from .models import (
    COSMOLOGICAL_KINDS,
    MODEL_KINDS,
    PAPER_PARAMETERS,
    PAPER_RESULTS,
    ModelSpec,
    build,
    normalize_kind,
)
from .pauli import PauliSum
from .spsa import SpsaConfig
from .vqe import run_vqe, wheeler_dewitt_report

log = logging.getLogger("qcosmo")

OUTPUT_ENV = "QCOSMO_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

DEFAULTS = {
    "model": None,
    "paper_params": False,
    "param": [],
    "num_points": 4,
    "spacing": None,
    "offset": 0.0,
    "epsilon": 1e-4,
    "dft_index_base": 1,
    "prune_threshold": 1e-10,
    "out": None,
    "depth": 3,
    "entanglement": "full",
    "maxiter": 1000,
    "spsa_a": 0.2,
    "spsa_c": 0.1,
    "calibrate": True,
    "trials": 10,
    "seed": 0,
    "jobs": 1,
    "hamiltonian": None,
    "sweep": None,
    "zero_threshold": 1e-3,
}


def _add_common(p: argparse.ArgumentParser, *, model_required: bool = True) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--config", help="JSON file with flat keys mirroring the flags (e.g. {\"maxiter\": 500})")
    g.add_argument(
        "--model",
        help=f"model kind: {', '.join(MODEL_KINDS)}" + ("" if model_required else " (default: all four cosmological models)"),
    )
    g.add_argument("--paper-params", action="store_true", help="load the reference parameter values")
    g.add_argument("--param", action="append", metavar="KEY=VALUE", help="model parameter override, repeatable")
    g = p.add_argument_group("grid")
    g.add_argument("--num-points", type=int, help="grid points per dimension, a power of 2 (default 4)")
    g.add_argument("--spacing", type=float, help="grid spacing (default sqrt(2*pi)/N)")
    g.add_argument("--offset", type=float, help="grid offset in units of spacing (default 0; 0.5 avoids the origin)")
    g.add_argument("--epsilon", type=float, help="regularizer in 1/(a^2+eps) (default 1e-4)")
    g.add_argument("--dft-index-base", type=int, choices=(0, 1), help="DFT row/column labels start at 0 or 1 (default 1)")
    g.add_argument("--prune-threshold", type=float, help="drop Pauli terms with |coeff| <= this (default 1e-10)")
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./results)")


def _add_vqe(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("vqe")
    g.add_argument("--depth", type=int, help="ansatz repetitions (default 3)")
    g.add_argument("--entanglement", choices=("full", "linear"), help="CNOT pattern (default full)")
    g.add_argument("--maxiter", type=int, help="SPSA iterations per trial (default 1000)")
    g.add_argument("--spsa-a", type=float, help="SPSA step gain before calibration (default 0.2)")
    g.add_argument("--spsa-c", type=float, help="SPSA perturbation gain (default 0.1)")
    g.add_argument("--no-calibrate", dest="calibrate", action="store_false", help="skip step-size calibration")
    g.add_argument("--trials", type=int, help="independent VQE trials (default 10)")
    g.add_argument("--seed", type=int, help="master seed (default 0)")
    g.add_argument("--jobs", type=int, help="threads for parallel trials (default 1)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcosmo",
        description="Minisuperspace Hamiltonians: Pauli decomposition, exact spectra and VQE.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("decompose", help="write the Pauli decomposition of a model",
                       argument_default=argparse.SUPPRESS)
    _add_common(p)
    p = sub.add_parser("exact", help="exact spectrum of a model", argument_default=argparse.SUPPRESS)
    _add_common(p)
    p = sub.add_parser("vqe", help="VQE minimum eigenvalue of a model", argument_default=argparse.SUPPRESS)
    _add_common(p)
    _add_vqe(p)
    p.add_argument("--hamiltonian", help="PauliSum JSON file to solve instead of a built-in model")
    p = sub.add_parser("paper", help="compare all four cosmological models against the reference values",
                       argument_default=argparse.SUPPRESS)
    _add_common(p, model_required=False)
    _add_vqe(p)
    p.add_argument("--sweep", nargs=2, metavar=("PARAM", "START:STOP:STEP"),
                   help="instead of the report, tabulate exact eigenvalues over a parameter range for --model")
    p.add_argument("--zero-threshold", type=float, help="|eigenvalue| below this counts as H psi = 0 (default 1e-3)")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and explicit flags; validate before any work."""
    cfg = dict(DEFAULTS)
    given = vars(args).copy()
    command = given.pop("command")
    given.pop("verbose", None)
    path = given.pop("config", None)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = sorted(set(data) - set(DEFAULTS) - {"command", "tool_version"})
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        data.pop("command", None)
        data.pop("tool_version", None)
        cfg.update(data)
    cfg.update(given)
    cfg["command"] = command
    if cfg["out"] is None:
        cfg["out"] = os.environ.get(OUTPUT_ENV, "results")
    cfg["param"] = list(cfg["param"] or [])

    if cfg["model"] is not None:
        cfg["model"] = normalize_kind(cfg["model"])
    elif command in ("decompose", "exact") or (command == "vqe" and not cfg["hamiltonian"]):
        raise ConfigError(f"--model is required; valid kinds: {', '.join(MODEL_KINDS)}")
    if cfg["paper_params"] and cfg["model"] and cfg["model"] not in PAPER_PARAMETERS:
        raise ConfigError(f"--paper-params applies only to {', '.join(COSMOLOGICAL_KINDS)}")
    n = cfg["num_points"]
    if not isinstance(n, int) or n < 2 or n & (n - 1):
        raise ConfigError(f"--num-points must be a power of 2 >= 2, got {n}")
    for key in ("trials", "maxiter", "jobs"):
        if not isinstance(cfg[key], int) or cfg[key] < (0 if key == "maxiter" else 1):
            raise ConfigError(f"--{key} must be a positive integer")
    if cfg["depth"] < 0:
        raise ConfigError("--depth must be >= 0")
    if command == "paper" and cfg["sweep"] is not None:
        if cfg["model"] is None:
            raise ConfigError("--sweep needs --model")
        cfg["sweep"] = list(cfg["sweep"])
        _sweep_values(cfg["sweep"][1])
    # building the ModelSpec validates parameter and grid overrides up front
    if cfg["model"] is not None:
        model_spec(cfg)
    return cfg


def _parse_params(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        key, sep, value = str(item).partition("=")
        if not sep:
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key.strip().lower()] = float(value)
        except ValueError:
            raise ConfigError(f"--param {key}: {value!r} is not a number") from None
    return out


def _sweep_values(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"sweep range must be START:STOP:STEP, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ConfigError("sweep needs STEP > 0 and STOP >= START")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def model_spec(cfg: dict, kind: str | None = None, extra: dict | None = None) -> ModelSpec:
    kind = kind or cfg["model"]
    params = dict(PAPER_PARAMETERS[kind]) if (cfg["paper_params"] or cfg["command"] == "paper") and kind in PAPER_PARAMETERS else {}
    params.update(_parse_params(cfg["param"]))
    params.update(extra or {})
    return ModelSpec(
        kind,
        params,
        qubits_per_dim=int(np.log2(cfg["num_points"])),
        spacing=cfg["spacing"],
        offset=cfg["offset"],
        epsilon=cfg["epsilon"],
        dft_index_base=cfg["dft_index_base"],
        prune_threshold=cfg["prune_threshold"],
    )


def _spsa(cfg: dict) -> SpsaConfig:
    return SpsaConfig(max_iterations=cfg["maxiter"], a=cfg["spsa_a"], c=cfg["spsa_c"], calibrate=cfg["calibrate"])


def _ansatz(cfg: dict, num_qubits: int) -> AnsatzSpec:
    return AnsatzSpec(num_qubits, cfg["depth"], cfg["entanglement"])


def _envelope(cfg: dict, conventions: dict, started: float) -> dict:
    return {
        "tool_version": __version__,
        "config": {k: v for k, v in sorted(cfg.items())},
        "conventions": conventions,
        "seed": cfg["seed"],
        "run_info": {
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "wall_time_s": round(time.perf_counter() - started, 3),
        },
    }


def _header(cfg: dict, prefix: str) -> str:
    meta = json.dumps({"tool_version": __version__, "config": dict(sorted(cfg.items()))}, sort_keys=True)
    return f"{prefix} qcosmo {__version__}\n{prefix} {meta}\n"


class _Writer:
    """Collects outputs and writes them once computation has finished."""

    def __init__(self, out: str):
        self.out = Path(out)
        self.files: dict[str, str] = {}

    def json(self, name: str, payload: dict) -> None:
        self.files[name] = json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def text(self, name: str, text: str) -> None:
        self.files[name] = text

    def flush(self) -> list[Path]:
        self.out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in self.files.items():
            path = self.out / name
            path.write_text(text)
            written.append(path)
        return written


def cmd_decompose(cfg: dict, writer: _Writer) -> None:
    started = time.perf_counter()
    spec = model_spec(cfg)
    model = build(spec)
    payload = _envelope(cfg, model.conventions, started)
    payload["num_qubits"] = model.pauli.num_qubits
    payload["terms"] = model.pauli.to_records()
    table = model.pauli.table()
    writer.json(f"{spec.kind}_pauli.json", payload)
    writer.text(f"{spec.kind}_pauli.txt", _header(cfg, "#") + table + "\n")
    print(table)


def cmd_exact(cfg: dict, writer: _Writer) -> None:
    started = time.perf_counter()
    spec = model_spec(cfg)
    model = build(spec)
    spectrum = eigh(model.matrix)
    payload = _envelope(cfg, model.conventions, started)
    payload.update(
        eigenvalues=[float(v) for v in spectrum.eigenvalues],
        min=spectrum.min,
        nearest_zero=spectrum.nearest_zero,
        real_amplitude_min=float(eigh(model.matrix.real).min),
    )
    if spec.kind in PAPER_RESULTS:
        payload["paper_exact"] = PAPER_RESULTS[spec.kind]["exact"]
    writer.json(f"{spec.kind}_exact.json", payload)
    print(f"min eigenvalue          {spectrum.min:.12g}")
    print(f"eigenvalue nearest zero {spectrum.nearest_zero:.12g}")


def cmd_vqe(cfg: dict, writer: _Writer) -> None:
    started = time.perf_counter()
    if cfg["hamiltonian"]:
        try:
            hamiltonian = PauliSum.from_json(Path(cfg["hamiltonian"]).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot read Hamiltonian {cfg['hamiltonian']}: {exc}") from exc
        name, conventions = "custom", {"source": str(cfg["hamiltonian"])}
    else:
        model = build(model_spec(cfg))
        hamiltonian, conventions, name = model.pauli, model.conventions, cfg["model"]
    result = run_vqe(
        hamiltonian,
        _ansatz(cfg, hamiltonian.num_qubits),
        _spsa(cfg),
        cfg["trials"],
        cfg["seed"],
        n_jobs=cfg["jobs"],
        conventions=conventions,
    )
    payload = _envelope(cfg, conventions, started)
    payload["result"] = result.to_dict()
    payload["variational_bound_ok"] = result.best_energy >= result.exact_min - 1e-9
    writer.json(f"{name}_vqe.json", payload)
    writer.text(f"{name}_vqe_trace.csv", _header(cfg, "#") + result.traces_csv())
    writer.text(f"{name}_vqe_best.qasm", _header(cfg, "//") + result.best_circuit.to_qasm())
    print(f"VQE best {result.best_energy:.10g}  mean {result.energy_mean:.10g} +- {result.energy_std:.3g}")
    print(f"exact min {result.exact_min:.10g}  (real-amplitude floor {result.exact_real_min:.10g})")


def _markdown(rows: list[dict], cfg: dict) -> str:
    lines = [
        _header(cfg, "<!--").replace("\n", " -->\n"),
        "| model | exact min | exact nearest 0 | real-amp. floor | VQE best | VQE mean ± std | paper exact | paper VQE | bound ok |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        p = r["paper"]
        lines.append(
            f"| {r['model']} | {r['exact_min']:.6g} | {r['exact_nearest_zero']:.6g} | {r['exact_real_min']:.6g} "
            f"| {r['vqe_best']:.6g} | {r['vqe_mean']:.6g} ± {r['vqe_std']:.3g} | {p['exact']:.6g} "
            f"| {p['vqe']:.6g} ± {p['vqe_std']:.3g} | {'yes' if r['variational_bound_ok'] else 'NO'} |"
        )
    lines.append("")
    lines.append("± is the sample standard deviation over independent VQE trials.")
    return "\n".join(lines) + "\n"


def cmd_paper(cfg: dict, writer: _Writer) -> None:
    started = time.perf_counter()
    if cfg["sweep"] is not None:
        return _cmd_sweep(cfg, writer, started)
    kinds = [cfg["model"]] if cfg["model"] else list(COSMOLOGICAL_KINDS)
    rows = []
    for kind in kinds:
        spec = model_spec(cfg, kind)
        record, result = wheeler_dewitt_report(
            spec,
            _ansatz(cfg, spec.num_qubits),
            _spsa(cfg),
            cfg["trials"],
            cfg["seed"],
            zero_threshold=cfg["zero_threshold"],
            n_jobs=cfg["jobs"],
        )
        record.pop("wall_time_s")
        rows.append(record)
        writer.text(f"paper_{kind}_vqe_best.qasm", _header(cfg, "//") + result.best_circuit.to_qasm())
        log.info("%s: exact %.6g, VQE %.6g", kind, record["exact_min"], record["vqe_best"])
    payload = _envelope(cfg, {r["model"]: r["conventions"] for r in rows}, started)
    payload["models"] = rows
    writer.json("paper_report.json", payload)
    md = _markdown(rows, cfg)
    writer.text("paper_report.md", md)
    print(md, end="")


def _cmd_sweep(cfg: dict, writer: _Writer, started: float) -> None:
    name, text = cfg["sweep"]
    key = name.lower()
    rows = []
    for value in _sweep_values(text):
        value = float(value)
        spectrum = eigh(build(model_spec(cfg, extra={key: value})).matrix)
        rows.append({key: value, "min": spectrum.min, "nearest_zero": spectrum.nearest_zero})
    spec = model_spec(cfg)
    payload = _envelope(cfg, spec.conventions(), started)
    payload["sweep"] = rows
    writer.json(f"sweep_{cfg['model']}_{key}.json", payload)
    csv = [f"{key},min,nearest_zero"] + [f"{r[key]!r},{r['min']!r},{r['nearest_zero']!r}" for r in rows]
    writer.text(f"sweep_{cfg['model']}_{key}.csv", _header(cfg, "#") + "\n".join(csv) + "\n")
    for r in rows:
        print(f"{key}={r[key]:.6g}\tmin={r['min']:.10g}\tnearest_zero={r['nearest_zero']:.10g}")


COMMANDS = {"decompose": cmd_decompose, "exact": cmd_exact, "vqe": cmd_vqe, "paper": cmd_paper}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
    except (ConfigError, ValueError) as exc:
        print(f"qcosmo: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    writer = _Writer(cfg["out"])
    try:
        COMMANDS[cfg["command"]](cfg, writer)
    except ConfigError as exc:
        print(f"qcosmo: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QcosmoError, ArithmeticError) as exc:
        print(f"qcosmo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for path in writer.flush():
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
