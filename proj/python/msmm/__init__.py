"""Spatial mixed-effects and Dirichlet-process mixture models for small-area tables."""

from ._core import (
    Basis,
    MsmmError,
    __version__,
    build_basis,
    delta_method_variance,
    effective_sample_size,
    fit_fh,
    fit_msm,
    fit_msmm,
    gelman_rubin,
    geweke,
    log_transform,
    rand_index,
    run_cli,
    two_field_fixture,
)

__all__ = [
    "Basis",
    "MsmmError",
    "__version__",
    "build_basis",
    "delta_method_variance",
    "effective_sample_size",
    "fit_fh",
    "fit_msm",
    "fit_msmm",
    "gelman_rubin",
    "geweke",
    "log_transform",
    "rand_index",
    "run_cli",
    "two_field_fixture",
]
