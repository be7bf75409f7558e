"""Ground-truth evaluators: spherical functions, projections, beams and norms."""

from .beams import (
    BeamFunction,
    FitReport,
    beam,
    beam_decay_check,
    beam_eval,
    beam_l2_lower,
    beam_lp_norm,
    beam_lp_scaling,
    loglog_slope,
    schur_defect,
    zonal_lp_scaling,
)
from .compact import (
    phi_compact,
    phi_compact_values,
    spherical_dimension,
    weyl_dimension,
)
from .noncompact import phi_noncompact, phi_noncompact_iwasawa
from .norms import NormResult, lp_norm
from .quadrature import EvalResult, QuadratureError, QuadratureSpec
from .realization import GroupElement, iwasawa_H

__all__ = [
    "BeamFunction", "EvalResult", "FitReport", "GroupElement", "NormResult",
    "QuadratureError", "QuadratureSpec", "beam", "beam_decay_check", "beam_eval",
    "beam_l2_lower", "beam_lp_norm", "beam_lp_scaling", "iwasawa_H", "loglog_slope", "lp_norm",
    "phi_compact", "phi_compact_values", "phi_noncompact", "phi_noncompact_iwasawa",
    "schur_defect", "spherical_dimension", "weyl_dimension", "zonal_lp_scaling",
]
