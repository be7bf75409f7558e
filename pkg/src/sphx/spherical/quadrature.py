from __future__ import annotations

from dataclasses import dataclass

SCHEMES = ("gauss-legendre", "trapezoid-periodic", "product-euler-angles")


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature request.

    ``points_per_dim=None`` lets the evaluator pick a starting size from the
    oscillation frequency; ``refinement`` is the absolute tolerance for the
    doubling loop (``None`` evaluates once at the starting size).
    """

    scheme: str = "gauss-legendre"
    points_per_dim: int | None = None
    refinement: float | None = 1e-10
    max_points: int = 4096

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points_per_dim is not None and self.points_per_dim < 8:
            raise ValueError("points_per_dim must be at least 8")
        if self.refinement is not None and self.refinement <= 0:
            raise ValueError("refinement tolerance must be positive")


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_est: float
    nodes_used: int
    converged: bool = True

    def __post_init__(self):
        if not self.abs_error_est >= 0:
            raise ValueError("error estimate must be nonnegative")


class QuadratureError(RuntimeError):
    """Raised when refinement cannot meet the requested tolerance."""

    def __init__(self, result: EvalResult, tol: float):
        super().__init__(
            f"quadrature did not converge: err {result.abs_error_est:.3e} > tol {tol:.3e} "
            f"with {result.nodes_used} nodes"
        )
        self.result = result


def refine(evaluate, n0: int, spec: QuadratureSpec, nodes_of, strict: bool = False) -> EvalResult:
    """Doubling loop shared by the evaluators.

    ``evaluate(n)`` returns a complex value; the error estimate is the
    difference to the half-size rule, so the working size starts at 16 to
    keep that comparison rule at 8 or more nodes.
    """
    n = max(16, int(n0))
    half = evaluate(n // 2)
    val = evaluate(n)
    err = abs(val - half)
    tol = spec.refinement
    while tol is not None and err > tol and 2 * n <= spec.max_points:
        n *= 2
        half, val = val, evaluate(n)
        err = abs(val - half)
    res = EvalResult(complex(val), float(err), int(nodes_of(n)), bool(tol is None or err <= tol))
    if strict and not res.converged:
        raise QuadratureError(res, tol)
    return res
