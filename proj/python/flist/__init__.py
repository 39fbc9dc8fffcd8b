"""Inverse scattering solver and validation checks for the Fokas-Lenells equation."""

from ._core import (
    AccuracyError,
    AdmissibilityReport,
    ConfigError,
    ContractError,
    DomainError,
    Error,
    IoError,
    PhysParams,
    RealGrid,
    ResonanceError,
    ScatteringData,
    SolverError,
    SpectralGridParams,
    evolution_suite,
    evolve,
    forward_scatter,
    identity_suite,
    norming_constant,
    pde_residual,
    read_scattering,
    reconstruct,
    roundtrip,
    spectral_grid,
    write_scattering,
)

__all__ = [name for name in dir() if not name.startswith("_")]
