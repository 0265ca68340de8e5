"""Tolerance policy shared by every numerical routine in the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used throughout the package.

    Attributes
    ----------
    eps_eig : float
        Absolute width for eigenvalue clustering: eigenvalues closer than
        this are treated as a single spectral breakpoint.
    eps_proj : float
        Residual bound for projection tests (hermiticity, idempotency,
        range containment) and for numerical-rank decisions.
    eps_recon : float
        Residual bound for element-level reconstructions and equality of
        self-adjoint elements.
    """

    eps_eig: float = 1e-8
    eps_proj: float = 1e-9
    eps_recon: float = 1e-8

    def __post_init__(self) -> None:
        if not (self.eps_eig > 0 and self.eps_proj > 0 and self.eps_recon > 0):
            raise ValueError("all tolerances must be strictly positive")
        if self.eps_eig < self.eps_proj:
            raise ValueError("eps_eig must be at least eps_proj")


DEFAULT_TOL = ToleranceConfig()
