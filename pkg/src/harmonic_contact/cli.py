"""Command-line front end.

Exit codes: 0 success, 1 configuration or domain error, 2 numerical failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .actionangle import action_angle_report
from .damping import ConstantDamping, DampingSpec
from .dynamics import ImpactScenario, Trajectory, simulate_reference
from .errors import ConfigError, ContactError, DegenerateBound, DomainError, InvalidPotential
from .potentials import (
    ContactPotential,
    PowerLawPotential,
    TabulatedPotential,
    VolumetricEllipsoidPotential,
)
from .regularize import ReferenceConstants, transform_trajectory
from .stability import Regime, stability_report
from .verification import run_checks

log = logging.getLogger("harmonic_contact")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

_TOP_KEYS = {"potential", "m", "v0", "refs", "damping", "output"}
_POTENTIAL_KEYS = {
    "power_law": {"k", "p"},
    "ellipsoid": {"a", "b", "c", "K_n", "alpha"},
    "tabulated": {"path"},
}


@dataclass
class ScenarioConfig:
    potential: ContactPotential
    m: float
    speeds: list[float]
    refs: ReferenceConstants
    damping: object | None = None
    out_dir: Path | None = None
    prefix: str = "run"
    raw: dict = field(default_factory=dict)


def _positive(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name}: must be strictly positive, got {value!r}")
    return float(value)


def _strict(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{where}: missing key(s) {missing}")


def parse_config(doc: dict, base_dir: Path | None = None) -> ScenarioConfig:
    """Validate a scenario document. Unknown keys are rejected."""
    _strict(doc, _TOP_KEYS, "config", required=("potential", "m", "v0"))
    pdoc = doc["potential"]
    if not isinstance(pdoc, dict) or pdoc.get("type") not in _POTENTIAL_KEYS:
        raise ConfigError(f"potential.type: expected one of {sorted(_POTENTIAL_KEYS)}")
    kind = pdoc["type"]
    keys = _POTENTIAL_KEYS[kind]
    _strict(pdoc, keys | {"type"}, "potential", required=tuple(sorted(keys)))
    if kind == "power_law":
        pot = PowerLawPotential(_positive(pdoc["k"], "potential.k"), _positive(pdoc["p"], "potential.p"))
    elif kind == "ellipsoid":
        pot = VolumetricEllipsoidPotential(
            *(_positive(pdoc[k], f"potential.{k}") for k in ("a", "b", "c", "K_n", "alpha"))
        )
    else:
        path = Path(pdoc["path"])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        if not path.exists():
            raise ConfigError(f"potential.path: file not found: {path}")
        pot = TabulatedPotential.from_csv(path)

    m = _positive(doc["m"], "m")
    v0 = doc["v0"]
    speeds = v0 if isinstance(v0, list) else [v0]
    if not speeds:
        raise ConfigError("v0: list must be non-empty")
    speeds = [_positive(v, f"v0[{i}]") for i, v in enumerate(speeds)]

    rdoc = doc.get("refs", {"K": 1.0, "M": 1.0})
    _strict(rdoc, {"K", "M"}, "refs", required=("K", "M"))
    refs = ReferenceConstants(_positive(rdoc["K"], "refs.K"), _positive(rdoc["M"], "refs.M"))

    damping = None
    if doc.get("damping") is not None:
        ddoc = doc["damping"]
        _strict(ddoc, {"C0", "constant"}, "damping")
        if len(ddoc) != 1:
            raise ConfigError("damping: give exactly one of 'C0' or 'constant'")
        if "C0" in ddoc:
            damping = DampingSpec(_positive(ddoc["C0"], "damping.C0"), refs, m)
        else:
            damping = ConstantDamping(_positive(ddoc["constant"], "damping.constant"))

    odoc = doc.get("output", {})
    _strict(odoc, {"dir", "prefix"}, "output")
    out_dir = Path(odoc["dir"]) if "dir" in odoc else None
    if out_dir is not None and not out_dir.is_absolute() and base_dir is not None:
        out_dir = base_dir / out_dir
    prefix = str(odoc.get("prefix", "run"))
    return ScenarioConfig(pot, m, speeds, refs, damping, out_dir, prefix, raw=doc)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(doc, base_dir=path.parent)


def atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file and rename, so readers never see a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _out_dir(args, cfg: ScenarioConfig) -> Path:
    if args.out_dir:
        return Path(args.out_dir)
    return cfg.out_dir or Path(".")


def _emit(args, cfg, name: str, text: str) -> None:
    if args.out_dir or cfg.out_dir:
        atomic_write(_out_dir(args, cfg) / name, text)
    sys.stdout.write(text)


def _map(fn, items):
    with ThreadPoolExecutor(max_workers=max(1, min(len(items), os.cpu_count() or 1))) as pool:
        return list(pool.map(fn, items))


def _header(cfg: ScenarioConfig, **extra) -> dict:
    out = {"config": cfg.raw}
    out.update(extra)
    return out


def cmd_simulate(args, cfg: ScenarioConfig) -> int:
    runs = [(v0, None) for v0 in cfg.speeds]
    if cfg.damping is not None:
        runs += [(v0, cfg.damping) for v0 in cfg.speeds]

    def work(item):
        v0, damping = item
        scn = ImpactScenario(cfg.m, cfg.potential, v0, cfg.refs, damping)
        traj = simulate_reference(scn, rtol=args.rtol, atol=args.atol, n_samples=args.n_samples)
        return item, scn, traj, transform_trajectory(cfg.potential, cfg.refs, cfg.m, traj)

    results = _map(work, runs)
    out = _out_dir(args, cfg)
    files = {}
    for (v0, damping), scn, traj, tt in results:
        kind = "conservative" if damping is None else "damped"
        stem = f"{cfg.prefix}_v{v0:g}_{kind}"
        header = _header(cfg, scenario=scn.describe(), duration=traj.duration,
                         exit_speed=traj.exit_speed)
        files[out / f"{stem}_physical.csv"] = traj.to_csv(header)
        files[out / f"{stem}_transformed.csv"] = tt.to_csv(header)
    for path, text in files.items():
        atomic_write(path, text)
        print(path)
    return EXIT_OK


def cmd_transform(args, cfg: ScenarioConfig) -> int:
    if not args.input:
        raise ConfigError("transform: --input <physical trajectory CSV> is required")
    src = Path(args.input)
    if not src.exists():
        raise ConfigError(f"--input: file not found: {src}")
    traj = Trajectory.from_csv(src.read_text())
    tt = transform_trajectory(cfg.potential, cfg.refs, cfg.m, traj)
    text = tt.to_csv(_header(cfg, source=str(src)))
    if args.output:
        atomic_write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bound(args, cfg: ScenarioConfig) -> int:
    reports = _map(lambda v0: stability_report(cfg.potential, cfg.m, v0, cfg.refs), cfg.speeds)
    doc = [dict(v0=v0, **r.to_dict()) for v0, r in zip(cfg.speeds, reports)]
    _emit(args, cfg, f"{cfg.prefix}_bound.json", json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def table1_rows(cfg: ScenarioConfig) -> list[tuple[float, float, float, float]]:
    rows = []
    for v0, rep in zip(cfg.speeds, _map(lambda v: stability_report(cfg.potential, cfg.m, v),
                                        cfg.speeds)):
        if rep.regime is Regime.DEGENERATE:
            raise DegenerateBound(
                f"v0={v0:g}: U'/sqrt(2U) diverges at contact, no finite timestep bound"
            )
        rows.append((v0, rep.q_max * 1e3, rep.force_at_qmax, rep.dt_safe * 1e3))
    return rows


def cmd_table1(args, cfg: ScenarioConfig) -> int:
    lines = ["v0,delta_max_mm,force_N,dt_safe_ms"]
    lines += [",".join(f"{v:.6f}" for v in row) for row in table1_rows(cfg)]
    _emit(args, cfg, "table1.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_action(args, cfg: ScenarioConfig) -> int:
    energies = [args.energy] if args.energy else [0.5 * cfg.m * v**2 for v in cfg.speeds]
    reports = _map(lambda E: action_angle_report(cfg.potential, cfg.m, E), energies)
    doc = [json.loads(r.to_json()) for r in reports]
    _emit(args, cfg, f"{cfg.prefix}_action.json", json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_damping_profile(args, cfg: ScenarioConfig) -> int:
    if cfg.damping is None:
        raise ConfigError("damping-profile: config has no 'damping' section")
    q_max = args.q_max if args.q_max is not None else cfg.potential.q_lim
    if not math.isfinite(q_max):
        raise ConfigError("damping-profile: --q-max is required for unbounded potentials")
    q_min = args.q_min if args.q_min is not None else q_max * 1e-3
    if not (0 < q_min < q_max):
        raise ConfigError(f"damping-profile: need 0 < q-min < q-max, got {q_min}, {q_max}")
    q = np.geomspace(q_min, q_max, args.n) if args.log else np.linspace(q_min, q_max, args.n)
    C = cfg.damping.coefficient(cfg.potential, q)
    lines = ["q,C"] + [f"{a:.17g},{b:.17g}" for a, b in zip(q, C)]
    _emit(args, cfg, f"{cfg.prefix}_damping_profile.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, cfg: ScenarioConfig) -> int:
    with ThreadPoolExecutor(max_workers=max(1, len(cfg.speeds))) as pool:
        results = run_checks(
            cfg.potential, cfg.m, cfg.speeds, cfg.refs, cfg.damping,
            rtol=args.rtol, atol=args.atol, n_samples=args.n_samples, executor=pool,
        )
    ok = all(r.passed for r in results)
    report = {"passed": ok, "checks": [r.to_dict() for r in results]}
    if args.out_dir or cfg.out_dir:
        atomic_write(_out_dir(args, cfg) / f"{cfg.prefix}_verify.json",
                     json.dumps(report, indent=2) + "\n")
    for r in results:
        val = "-" if r.value is None else f"{r.value:.3e}"
        tol = "-" if r.tolerance is None else f"{r.tolerance:.1e}"
        print(f"{r.status.upper():7s} {r.name:48s} value={val:>10s} tol={tol:>8s} {r.detail}")
    print(f"{'ALL CHECKS PASSED' if ok else 'VERIFICATION FAILED'}")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "simulate": (cmd_simulate, "integrate each impact and write physical + transformed CSVs"),
    "transform": (cmd_transform, "map a physical trajectory CSV into the harmonic space"),
    "bound": (cmd_bound, "critical-timestep lower bound report (JSON)"),
    "table1": (cmd_table1, "turning point, peak force and dt_safe per impact speed (CSV)"),
    "action": (cmd_action, "action J(E), dJ/dE and contact duration (JSON)"),
    "damping-profile": (cmd_damping_profile, "physical damping coefficient C(q) on a grid (CSV)"),
    "verify": (cmd_verify, "run the verification checks and report pass/fail"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonic-contact",
        description="Harmonic regularisation toolkit for 1-D contact dynamics.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out-dir", help="directory for output files")
        p.add_argument("--rtol", type=float, default=1e-13)
        p.add_argument("--atol", type=float, default=1e-13)
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; all computation is deterministic")
        if name in ("simulate", "verify"):
            p.add_argument("--n-samples", type=int, default=2001,
                           help="trajectory samples per contact, uniform in t")
        if name == "transform":
            p.add_argument("--input", help="physical trajectory CSV (t,q,qdot,E)")
            p.add_argument("--output", help="output CSV path (default: stdout)")
        if name == "action":
            p.add_argument("--energy", type=float, help="energy in J (default: from each v0)")
        if name == "damping-profile":
            p.add_argument("--q-min", type=float)
            p.add_argument("--q-max", type=float)
            p.add_argument("--n", type=int, default=200)
            p.add_argument("--log", action="store_true", help="log-spaced grid")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler, _ = COMMANDS[args.command]
    try:
        cfg = load_config(args.config)
        return handler(args, cfg)
    except (ConfigError, DomainError, InvalidPotential) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ContactError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
