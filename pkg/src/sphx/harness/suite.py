"""Suite orchestration: run checks, write one CSV per check and a summary."""

from __future__ import annotations

import csv
import io
import json
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .checks import CHECKS, CheckSpec, Outcome, select
from .config import RunConfig


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skip
    measured: float
    bound: float
    artifacts: tuple[str, ...] = ()
    criterion: int = 0
    literal: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def format_value(v) -> str:
    """Deterministic text for a CSV cell (shortest round-trip float repr)."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else repr(float(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return repr(v)
    if isinstance(v, complex):
        return f"{format_value(v.real)}{'+' if v.imag >= 0 else '-'}{format_value(abs(v.imag))}j"
    return str(v)


def render_csv(columns, rows, meta: dict | None = None) -> str:
    """CSV text with sorted ``# key=value`` metadata lines above the header."""
    buf = io.StringIO()
    meta = meta or {}
    for k in sorted(meta):
        buf.write(f"# {k}={format_value(meta[k])}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(x) for x in row])
    return buf.getvalue()


def write_csv(path, columns, rows, meta: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(columns, rows, meta))
    return path


def _json_safe(x):
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating, Fraction)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x if x is None or isinstance(x, str) else str(x)


def run_check(spec: CheckSpec, cfg: RunConfig) -> CheckResult:
    try:
        out: Outcome = spec.fn(cfg)
    except Exception as exc:  # a crashing check is a failing check, with the reason on record
        out = Outcome(float("nan"), float("nan"), False, ("error",), [(repr(exc),)],
                      {"traceback": traceback.format_exc().strip().splitlines()[-1]})
    status = "skip" if out.skipped else ("pass" if out.passed else "fail")
    meta = {"check": spec.name, "criterion": spec.criterion, "suite": spec.suite, "seed": cfg.seed,
            "status": status, "measured": out.measured, "bound": out.bound, "literal": spec.literal,
            **{f"meta.{k}": v for k, v in out.meta.items()}}
    path = write_csv(Path(cfg.output_dir) / f"{spec.name}.csv", out.columns, out.rows, meta)
    return CheckResult(spec.name, status, float(out.measured), float(out.bound), (str(path),),
                       spec.criterion, spec.literal, _json_safe(out.meta))


def _run_named(name: str, cfg: RunConfig) -> CheckResult:
    return run_check(CHECKS[name], cfg)


def run_suite(cfg: RunConfig) -> list[CheckResult]:
    """Run the selected checks; results come back in registry order.

    Config validation already happened when ``cfg`` was built, so a bad
    space id never reaches here.
    """
    specs = select(cfg)
    Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
    if cfg.workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_named, [s.name for s in specs], [cfg] * len(specs)))
    else:
        results = [run_check(s, cfg) for s in specs]
    write_summary(cfg, results)
    return results


def write_summary(cfg: RunConfig, results: list[CheckResult]) -> Path:
    summary = {
        "suite": cfg.suite,
        "seed": cfg.seed,
        "config": json.loads(cfg.to_json()),
        "n_pass": sum(r.status == "pass" for r in results),
        "n_fail": sum(r.status == "fail" for r in results),
        "n_skip": sum(r.status == "skip" for r in results),
        "checks": [_json_safe({**asdict(r), "artifacts": [Path(a).name for a in r.artifacts]}) for r in results],
    }
    path = Path(cfg.output_dir) / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return path


def exit_status(results: list[CheckResult]) -> int:
    return 1 if any(r.failed for r in results) else 0
