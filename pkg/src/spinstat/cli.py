"""Batch verification campaigns.

Each subcommand sweeps one family of checks over a parameter grid and writes
a JSON report (or a CSV table).  The exit status is 0 exactly when every
item's required verdicts hold; 2 signals a bad configuration.

Report schema (``schema`` = ``spinstat.report/1``)::

    {
      "schema": "spinstat.report/1",
      "artifact_version": str,
      "mode": str,
      "config": {...},           # the effective campaign configuration
      "tolerances": {...},
      "summary": {"items": int, "failed": int, "passed": bool},
      "items": [VerificationReport.to_json(), ...]
    }
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from . import phasecalc as pc
from .intertwine import FLOW_TOL, SPECTRAL_TOL, VerificationReport, theorem1_verdict
from .spectral2d import (
    CONE,
    ExtensionBC,
    random_band_limited,
    rotate_spectral,
    rotate_transport,
)
from .spectral3d import (
    BOSE,
    FERMI,
    YLM_TOL,
    BoundStateLabel,
    bound_state_classify,
    obstruction_check,
    theorem4_verdict,
    ylm_parity_check,
)

SCHEMA = "spinstat.report/1"
MODES = ("verify-2d", "verify-3d", "lemma-tables", "bound-states", "braid-phases", "flow-crosscheck")


class ConfigError(ValueError):
    pass


class SchemaMismatch(ValueError):
    pass


def _frac_list(xs) -> list[str]:
    return [str(pc.as_fraction(x)) for x in xs]


@dataclass
class CampaignConfig:
    mode: str
    lambdas: Optional[list] = None
    sigmas: Optional[list] = None
    thetas: Optional[list] = None  # boundary phases as multiples of pi
    signs: Optional[list] = None
    M: int = 16
    grid: int = 128
    l_max: int = 3
    exchange: str = "auto"
    n_max: int = 10
    q_max: int = 8
    states: int = 20
    angles: int = 64
    seed: int = 0
    witness: bool = True
    tolerance_spectral: float = SPECTRAL_TOL
    tolerance_flow: float = FLOW_TOL
    fault: Optional[str] = None  # test hook: corrupt an evaluator on purpose

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        defaults = _DEFAULT_GRIDS.get(self.mode, {})
        for key, val in defaults.items():
            if getattr(self, key) is None:
                setattr(self, key, list(val))
        try:
            for key in ("lambdas", "sigmas", "thetas"):
                if getattr(self, key) is not None:
                    setattr(self, key, _frac_list(getattr(self, key)))
            if self.signs is not None:
                self.signs = [int(pc.InvolutionSign.coerce(s)) for s in self.signs]
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        for key in ("lambdas", "sigmas", "thetas", "signs"):
            val = getattr(self, key)
            if val is not None and not val:
                raise ConfigError(f"{key} grid is empty")
        if self.sigmas:
            for s in self.sigmas:
                if Fraction(s) * 2 != int(Fraction(s) * 2):
                    raise ConfigError(f"spin {s} is not in (1/2)Z")
        if self.mode == "verify-3d":
            if any(Fraction(x).denominator != 1 for x in self.lambdas):
                raise ConfigError("verify-3d needs integer lambdas")
        if self.mode == "flow-crosscheck" and self.M < 4:
            raise ConfigError("flow cross-checks need M >= 4")
        if self.grid < 2 * self.M + 2 and self.mode == "flow-crosscheck":
            raise ConfigError(f"grid {self.grid} aliases order-{self.M} modes")
        if self.exchange not in ("auto", "both", BOSE, FERMI):
            raise ConfigError(f"exchange must be auto, both, bose or fermi, got {self.exchange!r}")
        if self.fault not in (None, "negate-c1", "negate-c2", "negate-c3"):
            raise ConfigError(f"unknown fault hook {self.fault!r}")

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


_DEFAULT_GRIDS = {
    "verify-2d": {
        "lambdas": [Fraction(k, 2) for k in range(0, 9)],
        "sigmas": [0, Fraction(1, 2), 1],
        "thetas": [0, 1],
    },
    "verify-3d": {"lambdas": list(range(-2, 3)), "sigmas": [0, Fraction(1, 2), 1], "signs": [1, -1]},
    "lemma-tables": {
        "lambdas": [Fraction(k, 4) for k in range(-16, 17)],
        "sigmas": [Fraction(j, 2) for j in range(-4, 5)],
        "signs": [1, -1],
    },
    "flow-crosscheck": {"thetas": [0, 1]},
}


def load_config(mode: str, path: Optional[str] = None, **overrides) -> CampaignConfig:
    data = {}
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        if data.get("mode", mode) != mode:
            raise ConfigError(f"{path} is a {data['mode']!r} campaign, not {mode!r}")
    data["mode"] = mode
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in dataclasses.fields(CampaignConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return CampaignConfig(**data)


# ---------------------------------------------------------------------------
# per-item workers; module level so that they pickle for process pools


def _item_verify_2d(args):
    sigma, lam, theta, cfg = args
    return theorem1_verdict(sigma, lam, ExtensionBC(theta), M=cfg.M, seed=cfg.seed,
                            spectral_tol=cfg.tolerance_spectral, flow_tol=cfg.tolerance_flow,
                            witness=cfg.witness)


def _item_verify_3d(args):
    sigma, lam, s, cfg = args
    rep = theorem4_verdict(sigma, lam, s, M=cfg.M, seed=cfg.seed, witness=cfg.witness,
                           spectral_tol=cfg.tolerance_spectral, flow_tol=cfg.tolerance_flow)
    obs = obstruction_check(sigma, lam, s, M=cfg.M, spectral_tol=cfg.tolerance_spectral)
    rep.verdicts["obstructed"] = obs.verdicts["obstructed"]
    rep.verdicts["full_space_equiv"] = obs.verdicts["full_space_equiv"]
    rep.required = rep.required + ("obstructed",)
    return rep


def _faulty(cond: pc.Conditions, fault: Optional[str]) -> pc.Conditions:
    if fault is None:
        return cond
    idx = int(fault[-1]) - 1
    vals = list(cond)
    vals[idx] = not vals[idx]
    return pc.Conditions(*vals)


def _item_lemma(args):
    dim, lam, sigma, sign, sector, fault = args
    if dim == 2:
        cond = pc.lemma3_conditions(lam, sigma, sign)
        params = {"dim": 2, "lambda": Fraction(lam), "sigma": Fraction(sigma), "R": sign}
    else:
        cond = pc.lemma6_conditions(lam, sigma, sign, sector)
        params = {"dim": 3, "lambda": Fraction(lam), "sigma": Fraction(sigma), "s": sign,
                  "sector": pc.SectorLabel(sector).symbol}
    cond = _faulty(cond, fault)
    return VerificationReport(
        kind=f"lemma{'3' if dim == 2 else '6'}",
        parameters=params,
        verdicts={"c1": cond.c1, "c2": cond.c2, "c3": cond.c3,
                  "two_imply_third": pc.two_imply_third(cond)},
        required=("two_imply_third",),
    )


def _item_bound_state(args):
    l, m, exchange = args
    cls = bound_state_classify(BoundStateLabel(l, m, exchange))
    residual = ylm_parity_check(l, m)
    chain = True
    if cls.allowed:
        chain &= (l % 2 == 0) == (exchange == BOSE)
    if cls.granted:
        chain &= m % 2 == 0 and cls.lz_eigenvalue.denominator == 1
    return VerificationReport(
        kind="bound_state",
        parameters={"l": l, "m": m, "exchange": exchange},
        verdicts={"allowed": cls.allowed, "granted": cls.granted, "chain": chain,
                  "ylm_parity_ok": residual <= YLM_TOL},
        residuals={"ylm_parity": residual},
        details={"sector": cls.sector.symbol if cls.sector is not None else None,
                 "lz_eigenvalue": cls.lz_eigenvalue},
        required=("chain", "ylm_parity_ok"),
    )


def _item_braid(args):
    n, exponent = args
    kappa = pc.ExactPhase(exponent)
    rel, cm, total = pc.braid_phases(n, kappa)
    verdicts = {"factorises": total == rel * cm}
    required = ("factorises",)
    if kappa.is_real():
        verdicts["relative_trivial"] = rel.is_one()
        required = required + ("relative_trivial",)
    return VerificationReport(
        kind="braid",
        parameters={"n": n, "kappa": Fraction(exponent)},
        verdicts=verdicts,
        details={"relative": rel, "cm": cm, "total": total},
        required=required,
    )


def _item_flow(args):
    theta, index, cfg = args
    bc = ExtensionBC(theta)
    rng = np.random.default_rng([cfg.seed, index])
    psi = random_band_limited(CONE, cfg.M, rng, bc)
    sampled = psi.sample(cfg.grid)
    worst = 0.0
    norm_dev = 0.0
    for t in 4 * math.pi * np.arange(cfg.angles) / cfg.angles:
        a = rotate_spectral(psi, t).sample(cfg.grid).values
        b = rotate_transport(sampled, t, bc).values
        worst = max(worst, float(np.max(np.abs(a - b))))
        norm_dev = max(norm_dev, abs(np.linalg.norm(rotate_spectral(psi, t).coefficients) - 1.0))
    return VerificationReport(
        kind="flow",
        parameters={"theta_over_pi": Fraction(theta), "state": index, "M": cfg.M, "grid": cfg.grid},
        verdicts={"agree": worst <= cfg.tolerance_flow, "unitary": norm_dev <= 1e-12},
        residuals={"flow": worst, "norm": norm_dev},
        required=("agree", "unitary"),
    )


def _items(cfg: CampaignConfig):
    F = Fraction
    if cfg.mode == "verify-2d":
        return _item_verify_2d, [(F(s), F(l), F(t), cfg) for l in cfg.lambdas for s in cfg.sigmas for t in cfg.thetas]
    if cfg.mode == "verify-3d":
        return _item_verify_3d, [(F(s), F(l), sg, cfg) for l in cfg.lambdas for s in cfg.sigmas for sg in cfg.signs]
    if cfg.mode == "lemma-tables":
        rows = [(2, F(l), F(s), sg, None, cfg.fault) for l in cfg.lambdas for s in cfg.sigmas for sg in cfg.signs]
        rows += [(3, F(l), F(s), sg, sec, cfg.fault) for l in cfg.lambdas if F(l).denominator == 1
                 for s in cfg.sigmas for sg in cfg.signs for sec in (1, -1)]
        return _item_lemma, rows
    if cfg.mode == "bound-states":
        rows = []
        for l in range(cfg.l_max + 1):
            for m in range(-l, l + 1):
                if cfg.exchange == "auto":
                    rows.append((l, m, BOSE if l % 2 == 0 else FERMI))
                elif cfg.exchange == "both":
                    rows += [(l, m, BOSE), (l, m, FERMI)]
                else:
                    rows.append((l, m, cfg.exchange))
        return _item_bound_state, rows
    if cfg.mode == "braid-phases":
        exps = sorted({F(p, q) for q in range(1, cfg.q_max + 1) for p in range(2 * q)})
        return _item_braid, [(n, e) for n in range(1, cfg.n_max + 1) for e in exps]
    if cfg.mode == "flow-crosscheck":
        return _item_flow, [(F(t), i, cfg) for t in cfg.thetas for i in range(cfg.states)]
    raise ConfigError(cfg.mode)


def _safe(worker: Callable, args) -> dict:
    try:
        rep = worker(args)
    except Exception as exc:  # recorded per item; the sweep continues
        params = [a for a in args if not isinstance(a, CampaignConfig)]
        rep = VerificationReport(kind="error", parameters={"args": [str(a) for a in params]},
                                 error=f"{type(exc).__name__}: {exc}")
    return rep.to_json()


def _call(pair):
    worker, args = pair
    return _safe(worker, args)


def run_campaign(cfg: CampaignConfig, workers: int = 1) -> dict:
    """Run every item of the campaign; result order follows the item order."""
    worker, rows = _items(cfg)
    if workers > 1 and len(rows) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            items = list(pool.map(_call, [(worker, r) for r in rows], chunksize=max(1, len(rows) // (4 * workers))))
    else:
        items = [_safe(worker, r) for r in rows]
    failed = sum(not it["passed"] for it in items)
    return {
        "schema": SCHEMA,
        "artifact_version": __version__,
        "mode": cfg.mode,
        "config": cfg.to_json(),
        "tolerances": {
            "spectral": cfg.tolerance_spectral,
            "flow": cfg.tolerance_flow,
            "unitarity": 1e-12,
            "ylm_parity": YLM_TOL,
        },
        "summary": {"items": len(items), "failed": failed, "passed": failed == 0},
        "items": items,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, default=str) + "\n"


# ---------------------------------------------------------------------------
# tables


DEFAULT_COLUMNS = {
    "verify-2d": ["lambda", "sigma", "theta_over_pi", "ssc", "equiv", "intertwining"],
    "verify-3d": ["lambda", "sigma", "s", "ssc", "equiv_plus", "equiv_minus", "dichotomy", "obstructed", "intertwining"],
    "lemma-tables": ["dim", "lambda", "sigma", "R", "s", "sector", "c1", "c2", "c3", "two_imply_third"],
    "bound-states": ["l", "m", "exchange", "allowed", "sector", "lz_eigenvalue"],
    "braid-phases": ["n", "kappa", "relative", "cm", "total", "factorises"],
    "flow-crosscheck": ["theta_over_pi", "state", "flow", "agree"],
}


def _flatten(item: dict) -> dict:
    row = {}
    for part in ("details", "residuals", "verdicts", "parameters"):
        for k, v in (item.get(part) or {}).items():
            row.setdefault(k, v)
    if item.get("error"):
        row["error"] = item["error"]
    return row


def _sort_key(value):
    if isinstance(value, bool) or value is None:
        return (0, str(value))
    if isinstance(value, (int, float)):
        return (1, Fraction(value))
    try:
        return (1, Fraction(value))
    except (TypeError, ValueError, ZeroDivisionError):
        return (2, str(value))


def render_table(report: dict, columns: Optional[Sequence[str]] = None, fmt: str = "csv") -> str:
    """Project a report onto columns.

    Rows are sorted lexicographically by parameter value, taking parameter
    columns in display order first.
    """
    if "items" not in report or "mode" not in report:
        raise SchemaMismatch("not a spinstat report")
    columns = list(columns or DEFAULT_COLUMNS.get(report["mode"], []))
    rows = [(_flatten(it), it.get("parameters") or {}) for it in report["items"]]
    if rows:
        present = set().union(*(r.keys() for r, _ in rows))
        missing = [c for c in columns if c not in present]
        if missing:
            raise SchemaMismatch(f"columns not in report: {missing}")
    def key(rp):
        params = rp[1]
        order = [c for c in columns if c in params] + sorted(k for k in params if k not in columns)
        return tuple(_sort_key(params[k]) for k in order)

    rows.sort(key=key)
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r, _ in rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in columns])
        return buf.getvalue()
    cells = [columns] + [["" if r.get(c) is None else str(r.get(c)) for c in columns] for r, _ in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    for row in cells:
        buf.write("  ".join(v.ljust(wd) for v, wd in zip(row, widths)).rstrip() + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinstat", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", help="JSON campaign file")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tolerance-spectral", type=float, dest="tolerance_spectral")
        sp.add_argument("--tolerance-flow", type=float, dest="tolerance_flow")
        sp.add_argument("--M", type=int, dest="M")
        sp.add_argument("--lambdas", help="comma separated, e.g. 0,1/2,1")
        sp.add_argument("--sigmas", help="comma separated, e.g. 0,1/2")
        if mode == "bound-states":
            sp.add_argument("--l-max", type=int, dest="l_max")
            sp.add_argument("--exchange", choices=("auto", "both", BOSE, FERMI))
        if mode == "braid-phases":
            sp.add_argument("--n-max", type=int, dest="n_max")
            sp.add_argument("--q-max", type=int, dest="q_max")
    tp = sub.add_parser("table", help="render a JSON report as a table")
    tp.add_argument("report")
    tp.add_argument("--columns", help="comma separated column names")
    tp.add_argument("--format", choices=("csv", "text"), default="csv")
    tp.add_argument("--out")
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "table":
        with open(args.report) as fh:
            report = json.load(fh)
        cols = args.columns.split(",") if args.columns else None
        try:
            _emit(render_table(report, cols, args.format), args.out)
        except SchemaMismatch as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    overrides = {k: getattr(args, k, None) for k in
                 ("seed", "tolerance_spectral", "tolerance_flow", "M", "l_max", "exchange", "n_max", "q_max")}
    for key in ("lambdas", "sigmas"):
        val = getattr(args, key, None)
        if val:
            overrides[key] = [v.strip() for v in val.split(",") if v.strip()]
    try:
        cfg = load_config(args.command, args.config, **overrides)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = run_campaign(cfg, workers=max(1, args.workers))
    text = dumps_report(report) if args.format == "json" else render_table(report)
    _emit(text, args.out)
    summ = report["summary"]
    print(f"{cfg.mode}: {summ['items']} items, {summ['failed']} failed", file=sys.stderr)
    return 0 if summ["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
