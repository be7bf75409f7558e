"""Golden-file regression: compare a run directory against blessed CSVs, and
emit the exponent graph."""

from __future__ import annotations

import csv
import math
import shutil
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .. import exponents as ex
from ..rootsys import get_space
from .config import DEFAULT_TOLERANCES
from .suite import CheckResult, render_csv, write_csv

EXPONENT_GRAPH_COLUMNS = ("inv_p", "delta0", "delta")


@dataclass(frozen=True)
class SchemaError:
    file: str
    message: str

    def __str__(self) -> str:
        return f"schema error in {self.file}: {self.message}"


@dataclass(frozen=True)
class Drift:
    file: str
    row: int  # 1-based data row, header excluded
    column: str
    expected: str
    actual: str

    def __str__(self) -> str:
        return (f"value drift in {self.file} row {self.row} column {self.column}: "
                f"expected {self.expected}, got {self.actual}")


def _read(path: Path) -> tuple[list[str], list[list[str]]]:
    with path.open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows:
        return [], []
    return rows[0], rows[1:]


def _number(s: str) -> float | None:
    try:
        return float(s)
    except ValueError:
        try:
            return float(complex(s).real) if s.endswith("j") else None
        except ValueError:
            return None


def _cell_ok(expected: str, actual: str, tol: float) -> bool:
    if expected == actual:
        return True
    if expected.endswith("j") or actual.endswith("j"):
        try:
            a, b = complex(expected), complex(actual)
        except ValueError:
            return False
        return abs(a - b) <= tol * max(1.0, abs(a))
    a, b = _number(expected), _number(actual)
    if a is None or b is None:
        return False
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a))


def compare_files(actual: Path, expected: Path, tolerances: dict, name: str | None = None):
    """Return ``(schema_errors, drifts)`` for one CSV pair."""
    name = name or expected.name
    h_exp, r_exp = _read(expected)
    h_act, r_act = _read(actual)
    if h_exp != h_act:
        extra = [c for c in h_act if c not in h_exp]
        missing = [c for c in h_exp if c not in h_act]
        msg = f"header mismatch (extra columns {extra}, missing columns {missing})" if extra or missing \
            else f"column order differs: {h_act} vs {h_exp}"
        return [SchemaError(name, msg)], []
    if len(r_exp) != len(r_act):
        return [SchemaError(name, f"row count {len(r_act)} differs from golden {len(r_exp)}")], []
    default = float(tolerances.get("golden", DEFAULT_TOLERANCES["golden"]))
    drifts = []
    for i, (re_, ra) in enumerate(zip(r_exp, r_act), start=1):
        if len(re_) != len(ra):
            return [SchemaError(name, f"row {i} has {len(ra)} cells, expected {len(re_)}")], drifts
        for col, e, a in zip(h_exp, re_, ra):
            tol = float(tolerances.get(f"golden.{col}", default))
            if not _cell_ok(e, a, tol):
                drifts.append(Drift(name, i, col, e, a))
    return [], drifts


def golden_compare(run_dir, golden_dir, tolerances: dict | None = None) -> CheckResult:
    """Compare every golden CSV with its counterpart in ``run_dir``.

    ``measured`` counts value drifts; schema problems (missing or extra files,
    header or row-count changes) are listed separately under ``detail``.
    """
    run_dir, golden_dir = Path(run_dir), Path(golden_dir)
    if not golden_dir.is_dir():
        raise FileNotFoundError(f"golden directory not found: {golden_dir}")
    tolerances = dict(tolerances or {})
    golden = {p.name for p in golden_dir.glob("*.csv")}
    present = {p.name for p in run_dir.glob("*.csv")} if run_dir.is_dir() else set()
    schema: list[SchemaError] = [SchemaError(n, "missing from run directory") for n in sorted(golden - present)]
    schema += [SchemaError(n, "not present in golden directory") for n in sorted(present - golden)]
    drifts: list[Drift] = []
    for n in sorted(golden & present):
        s, d = compare_files(run_dir / n, golden_dir / n, tolerances, n)
        schema += s
        drifts += d
    ok = not schema and not drifts
    detail = {"schema_errors": [str(s) for s in schema], "drifts": [str(d) for d in drifts],
              "files_compared": len(golden & present)}
    return CheckResult("golden_compare", "pass" if ok else "fail", float(len(drifts)), 0.0, (),
                       0, False, detail)


def bless(run_dir, golden_dir) -> list[Path]:
    """Copy the CSVs of ``run_dir`` into ``golden_dir`` (replacing stale ones)."""
    run_dir, golden_dir = Path(run_dir), Path(golden_dir)
    golden_dir.mkdir(parents=True, exist_ok=True)
    for old in golden_dir.glob("*.csv"):
        old.unlink()
    return [Path(shutil.copy2(p, golden_dir / p.name)) for p in sorted(run_dir.glob("*.csv"))]


def exponent_graph_rows(space, p_grid=None, npts: int = 50) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Rows ``(1/p, delta0, delta)``, always including both kink abscissas."""
    sp = get_space(space)
    kinks = [ex.kink_inv_p(sp.n, 1), ex.kink_inv_p(sp.n, sp.r)]
    if p_grid is None:
        grid = ex.default_s_grid(npts, kinks)
    else:
        grid = sorted({ex.inv_p(p) for p in p_grid} | set(kinks))
    return [(s, ex.delta_s(s, sp.n, 1), ex.delta_s(s, sp.n, sp.r)) for s in grid]


def emit_exponent_graph(space, p_grid=None, path=None, npts: int = 50) -> str:
    """CSV text with columns ``inv_p,delta0,delta``; also written to ``path`` if given."""
    rows = exponent_graph_rows(space, p_grid, npts)
    sp = get_space(space)
    meta = {"space": sp.id, "n": sp.n, "r": sp.r}
    if path is not None:
        write_csv(path, EXPONENT_GRAPH_COLUMNS, rows, meta)
    return render_csv(EXPONENT_GRAPH_COLUMNS, rows, meta)
