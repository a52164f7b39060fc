"""Matrix-free probabilistic upper bounds on the spectral norm."""

from ._core import (
    CapabilityError,
    ContractError,
    DegenerateDrawError,
    Operator,
    dense,
    dense_svd,
    estimate,
    expm,
    frechet,
    frechet_truth,
    g_cb,
    g_cb_sup,
    hilbert,
    hilbert_dense,
    oracle_theta,
    power_ratio,
    run_batch,
    synthetic,
    theta_for_delta,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "ContractError",
    "DegenerateDrawError",
    "Operator",
    "dense",
    "dense_svd",
    "estimate",
    "expm",
    "frechet",
    "frechet_truth",
    "g_cb",
    "g_cb_sup",
    "hilbert",
    "hilbert_dense",
    "oracle_theta",
    "power_ratio",
    "run_batch",
    "synthetic",
    "theta_for_delta",
    "__version__",
]
