"""Quasispline wavelets: trigonometric-polynomial masks whose orthogonalised scaling and
wavelet functions converge to the Meyer system as the smoothness parameter grows."""
from .analysis import (
    ConvergenceStudy,
    DecayFit,
    LocalizationReport,
    PurityReport,
    SmoothnessReport,
    decay_fit,
    localization,
    purity_check,
    theta_k_sequence,
    uc_gap_table,
)
from .conditions import Budgets, ConditionReport, ledger, measure, measure_alpha, measure_gamma, select_n
from .errors import (
    ConstructionError,
    DomainError,
    GridError,
    NumericalConsistencyError,
    PolicyError,
    QSWError,
)
from .meyer import DEFAULT_THETA, MeyerSystem, ThetaProfile, validate_theta
from .quasispline import QuasisplineSystem, Truncation, build, synthesize
from .trigpoly import FEJER, PARTIAL_SUMS, VALLEE_POUSSIN, TrigPolynomial, fourier_coeffs, get_method

__version__ = "0.1.0"
