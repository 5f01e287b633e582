"""Command-line front end: ``superfock <command> [options]``.

Commands write CSV (or JSON with ``--format json``) into ``--out`` and a
short summary to stdout.  Exit status: 0 success, 1 failed checks, 2 bad
configuration or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import checks as chk
from . import dynamics as dyn
from . import entanglement as ent
from . import fock, susino, thermal
from .fock import ConfigError, ModeConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; loadable from JSON, unknown keys rejected."""

    cutoff: int = 12
    margin: int = 4
    couplings: tuple[float, ...] = (1.0, 0.7)
    g: float = 0.3
    betas: tuple[float, ...] = (0.3, 0.7, float(np.log(2)), 2.0, 5.0)
    s_values: tuple[float, ...] = (0.1, 1.0, float(np.pi))
    kbar_grid: tuple[float, ...] = ent.KBAR_GRID
    phi_steps: int = ent.PHI_STEPS
    thermal_cutoff: int = thermal.THERMAL_CUTOFF
    wz_cutoff: int = 40
    seed: int = 0
    tol: float | None = None
    format: str = "csv"
    out: str = "results"

    def __post_init__(self):
        for name in ("couplings", "betas", "s_values", "kbar_grid"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not self.couplings:
            raise ConfigError("need at least one coupling")
        if any(b <= 0 for b in self.betas):
            raise ConfigError("all betas must be positive")
        if self.phi_steps < 1:
            raise ConfigError("phi_steps must be >= 1")
        if any(k < 0 for k in self.kbar_grid):
            raise ConfigError("kbar values must be non-negative")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        n = len(self.couplings)
        # validates cutoff, margin and dimension
        ModeConfig(n, n, self.cutoff, self.couplings, safe_margin=self.margin)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def settings(self) -> chk.CheckSettings:
        return chk.CheckSettings(
            self.cutoff, self.margin, self.couplings, self.g, self.betas,
            self.s_values, self.thermal_cutoff, self.wz_cutoff, self.seed,
        )


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(fmt(x.real)), float(fmt(x.imag))]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(fmt(x))
    return x


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def table_text(header: list[str], rows, fmt_kind: str) -> str:
    if fmt_kind == "json":
        return dump_json([dict(zip(header, r)) for r in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def write_table(cfg: RunConfig, stem: str, header: list[str], rows) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.{cfg.format}"
    path.write_text(table_text(header, rows, cfg.format), encoding="utf-8")
    return path


def write_report(cfg: RunConfig, stem: str, report) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.json"
    path.write_text(dump_json(report), encoding="utf-8")
    return path


def state_label(fermion_occ, boson_occ) -> str:
    return "|" + ",".join(map(str, fermion_occ)) + ";" + ",".join(map(str, boson_occ)) + ">"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(cfg: RunConfig) -> int:
    results = chk.run_checks(cfg.settings(), tol_override=cfg.tol)
    failed = [c for c in results if not c.passed]
    report = {
        "passed": not failed,
        "n_checks": len(results),
        "n_failed": len(failed),
        "checks": [c.as_dict() for c in results],
    }
    path = write_report(cfg, "check_report", report)
    for c in failed:
        print(f"FAIL {c.name}: defect {fmt(c.defect)} vs tol {fmt(c.tol)} ({c.kind})")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed; report in {path}")
    return EXIT_FAIL if failed else EXIT_OK


def _transition_rows(flow: str, config: ModeConfig, U: np.ndarray, s: float, margin: int):
    basis = fock.enumerate_basis(config)
    limit = config.boson_cutoff - margin
    rows, worst = [], 0.0
    for i, st in enumerate(basis):
        if max(st.boson_occ) > limit:
            continue
        probs = np.abs(U[:, i]) ** 2
        worst = max(worst, abs(probs.sum() - 1))
        for j in np.nonzero(probs > 1e-15)[0]:
            rows.append((flow, float(s), state_label(*st), state_label(*basis[j]), float(probs[j])))
    return rows, worst


def cmd_evolve(cfg: RunConfig) -> int:
    rows, worst = [], 0.0
    margin = min(cfg.margin, 2)
    single = ModeConfig(1, 1, cfg.cutoff)
    n = len(cfg.couplings)
    multi = ModeConfig(n, n, min(cfg.cutoff, 6), cfg.couplings)
    cliff = dyn.clifford_config(min(cfg.cutoff, 10))
    runs = [
        ("Ia", single, dyn.SpectralEvolution(dyn.build_G(dyn.SuperchargeSpec(single)))),
        (f"Ia{n}", multi, dyn.SpectralEvolution(dyn.build_G(dyn.SuperchargeSpec(multi)))),
        ("III", cliff, dyn.SpectralEvolution(dyn.build_clifford(dyn.SuperchargeSpec(cliff, "clifford")).G)),
    ]
    for s in cfg.s_values:
        for flow, config, ev in runs:
            r, w = _transition_rows(flow, config, dyn._dense(ev.unitary(s)), s, margin)
            rows += r
            worst = max(worst, w)
    path = write_table(cfg, "transitions", ["flow", "s", "from_state", "to_state", "probability"], rows)
    print(f"{len(rows)} transitions; max row-sum defect {fmt(worst)}; written to {path}")
    return EXIT_OK if worst <= 1e-10 else EXIT_FAIL


def cmd_entangle(cfg: RunConfig) -> int:
    phis = ent.phi_grid(cfg.phi_steps)
    surface, worst = ent.entanglement_surface(cfg.kbar_grid, phis)
    p1 = write_table(cfg, "entanglement_surface", ["kbar", "phi", "E"], surface)
    per = [row for kb in cfg.kbar_grid for row in ent.per_fermion_entropy(kb, phis)]
    p2 = write_table(cfg, "entanglement_per_fermion", ["kbar", "phi", "E1", "E2"], per)
    ext = []
    for kb in cfg.kbar_grid:
        r = ent.extremum_solve(kb)
        ext += [(kb, phi, float(ent.mixing_entropy(kb, phi)), d) for phi, d in zip(r.roots, r.derivative)]
    p3 = write_table(cfg, "entanglement_extrema", ["kbar", "phi", "E", "dE_dphi"], ext)
    print(f"surface {p1}, per-fermion {p2}, extrema {p3}; closed form vs partial trace {fmt(worst)}")
    return EXIT_OK if worst <= 1e-10 else EXIT_FAIL


def cmd_thermal(cfg: RunConfig) -> int:
    rows = thermal.thermal_table(cfg.betas, cfg.s_values, cfg.thermal_cutoff)
    path = write_table(
        cfg, "thermal", ["beta", "s", "omega_nf", "omega_nb", "omega_nf_evolved", "drift_ib"], rows
    )
    occ = [thermal.mode_occupation_check(b, cfg.thermal_cutoff) for b in cfg.betas]
    write_report(cfg, "thermal_occupations", occ)
    ok = all(r["passed"] for r in occ)
    print(f"{len(rows)} rows written to {path}; occupation checks {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_susino(cfg: RunConfig) -> int:
    config = ModeConfig(1, 1, max(cfg.cutoff, 8))
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    pair = susino.build_susinos(config)
    phases = {f"{s:.6g}": susino.exciton_phases(pair, G, s) for s in (0.3, 1.0)}
    rows = [
        (s, name, v["gamma"], v["modulus"], v["residual"])
        for s, table in phases.items() for name, v in table.items()
    ]
    path = write_table(cfg, "susino_phases", ["s", "operator", "gamma", "modulus", "residual"], rows)
    report = {
        "statistics": susino.statistics_report(pair),
        "phases": phases,
        "perturbed": susino.perturbed_evolution(config, 0.5, 1.0),
    }
    write_report(cfg, "susino", report)
    print(f"susino phases written to {path}")
    return EXIT_OK


def cmd_wz(cfg: RunConfig) -> int:
    levels = dyn.wz_spectrum(cfg.g, cfg.wz_cutoff)
    hi = dyn.wz_spectrum(cfg.g, cfg.wz_cutoff + 4)
    n_low = 6
    rows = [(i, float(x)) for i, x in enumerate(levels)]
    path = write_table(cfg, "wz_spectrum", ["index", "level"], rows)
    report = {
        "g": cfg.g,
        "cutoff": cfg.wz_cutoff,
        "degeneracy_low": dyn.degeneracy_report(levels[: 2 * n_low]),
        "convergence": {
            "cutoffs": [cfg.wz_cutoff, cfg.wz_cutoff + 4],
            "low_levels": [levels[:n_low].tolist(), hi[:n_low].tolist()],
            "max_difference": float(np.max(np.abs(levels[:n_low] - hi[:n_low]))),
        },
        "closed_form": dyn.wz_closed_form_compare(cfg.g, min(cfg.cutoff, 20)),
    }
    write_report(cfg, "wz", report)
    print(f"spectrum written to {path}; closed-form discrepancy {fmt(report['closed_form']['discrepancy'])}")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "evolve": cmd_evolve,
    "entangle": cmd_entangle,
    "thermal": cmd_thermal,
    "susino": cmd_susino,
    "wz": cmd_wz,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", help="output directory (default: results)")
    common.add_argument("--cutoff", type=int, help="boson cutoff")
    common.add_argument("--margin", type=int, help="safe-subspace margin")
    common.add_argument("--tol", type=float, help="override every upper-bound check tolerance")
    common.add_argument("--format", choices=("csv", "json"), help="data file format")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    parser = argparse.ArgumentParser(prog="superfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "run every invariant suite and write a JSON report",
        "evolve": "transition probabilities under flows Ia and III",
        "entangle": "entanglement surface, per-fermion entropies and extrema",
        "thermal": "Gibbs-state invariance and drift table",
        "susino": "susino phases and statistics",
        "wz": "deformed-supercharge spectrum and convergence",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config is not None:
        try:
            cfg = RunConfig.from_json(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config: {e}") from e
        except TypeError as e:
            raise ConfigError(str(e)) from e
    overrides = {
        k: getattr(args, k)
        for k in ("out", "cutoff", "margin", "tol", "format", "seed")
        if getattr(args, k) is not None
    }
    return replace(cfg, **overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
