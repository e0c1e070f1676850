"""Normalized generalized Bessel functions u = 0F1(kappa; -c z/4) and
sufficient conditions for their membership in Janowski classes."""

from .conditions import (
    ConditionReport,
    Mode,
    QCoefficients,
    Theorem,
    corollary_condition,
    thm21_condition,
    thm22_condition,
    thm31_condition,
    thm32_condition,
)
from .errors import (
    ContourZero,
    DerivativeZero,
    GenBesselError,
    InvalidParams,
    NonConvergence,
    PoleHit,
)
from .janowski import JanowskiPair, TargetRegion, margin, mobius, target_region
from .membership import (
    Functional,
    MembershipVerdict,
    Status,
    count_excluded_point_hits,
    count_zeros,
    eval_functional,
    verify,
)
from .series import BesselParams, SeriesValue, pochhammer

__version__ = "0.1.0"
