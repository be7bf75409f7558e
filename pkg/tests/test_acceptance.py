"""Acceptance suite: one PASS/FAIL line per criterion.

Each criterion aggregates the registry checks that carry its number.
Checks flagged ``literal`` evaluate a criterion exactly as worded where the
wording disagrees with the verified reading; they get their own FAIL-able
line and their own test, and are not hidden.

Run ``python3 tests/test_acceptance.py`` for the report alone, or through
pytest, where the lines are printed as each criterion is evaluated.
"""

from __future__ import annotations

import functools
import sys
import tempfile

import pytest

from sphx.harness import make_config
from sphx.harness.checks import REGISTRY
from sphx.harness.config import DEFAULT_TOLERANCES
from sphx.harness.suite import format_value, run_check

# Bounds as stated in the acceptance criteria.  The test below fails if a
# default tolerance drifts away from them.
PINNED = {
    "c3_envelope_drift": 0.10,
    "c4_h2_bound_factor": 2.0,
    "c4_h2_classical": 0.01,
    "c4_halving_lo": 1.3,
    "c4_halving_hi": 1.7,
    "c5_envelope_drift": 0.10,
    "c6_k0_slope": 0.05,
    "c6_far_field_slope": 0.10,
    "c6_round_trip": 1e-5,
    "c7_sup_slope": 0.10,
    "c7_transform_slope": 0.10,
    "c7_progression_slope": 0.15,
    "c8_hessian": 1e-4,
    "c9_l2_slope": 0.05,
    "c9_lp_slope": 0.10,
    "c9_schur": 1e-8,
    "c10_localization": 1e-6,
    "c10_pole_slope": 0.10,
}

CRITERIA = {
    1: "exponent identities (exact)",
    2: "strict convexity of M(s)",
    3: "noncompact envelope",
    4: "asymptotic formula",
    5: "compact envelope",
    6: "kernel envelope",
    7: "dyadic scalings",
    8: "Hessian formulas",
    9: "beam regime",
    10: "compact projector",
}

_OUT = tempfile.mkdtemp(prefix="sphx_acceptance_")
CONFIG = make_config(overrides={"output_dir": _OUT}, env={})


@functools.lru_cache(maxsize=None)
def result(name: str):
    spec = next(s for s in REGISTRY if s.name == name)
    return run_check(spec, CONFIG)


def _checks(criterion: int, literal: bool):
    return [s.name for s in REGISTRY if s.criterion == criterion and s.literal == literal]


def _detail(r) -> str:
    return f"{r.name} measured={format_value(r.measured)} bound={format_value(r.bound)}"


def criterion_line(criterion: int) -> tuple[bool, str]:
    rs = [result(n) for n in _checks(criterion, False)]
    ok = all(not r.failed for r in rs)
    body = "; ".join(_detail(r) for r in rs)
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {criterion} ({CRITERIA[criterion]}): {body}"


def literal_line(name: str) -> tuple[bool, str]:
    r = result(name)
    spec = next(s for s in REGISTRY if s.name == name)
    return not r.failed, (f"{'PASS' if not r.failed else 'FAIL'} criterion {spec.criterion} "
                          f"(literal wording): {_detail(r)}")


def _emit(line: str, capsys) -> None:
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def test_tolerances_pinned():
    for k, v in PINNED.items():
        assert DEFAULT_TOLERANCES[k] == v, k


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, capsys):
    ok, line = criterion_line(criterion)
    _emit(line, capsys)
    assert ok, line


@pytest.mark.parametrize("name", [s.name for s in REGISTRY if s.literal])
def test_literal_wording(name, capsys):
    ok, line = literal_line(name)
    _emit(line, capsys)
    assert ok, line


def main() -> int:
    failed = 0
    for c in sorted(CRITERIA):
        ok, line = criterion_line(c)
        print(line, flush=True)
        failed += not ok
    for name in (s.name for s in REGISTRY if s.literal):
        ok, line = literal_line(name)
        print(line, flush=True)
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
