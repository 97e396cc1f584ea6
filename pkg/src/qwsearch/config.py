"""Central numerics configuration: every tolerance and size guard in one record.

All comparisons and guards across the package read from a NumericsConfig so
that a single override (e.g. a tighter norm tolerance, or a larger dense
guard on a big machine) propagates consistently.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


class InvariantViolation(RuntimeError):
    """A runtime invariant (norm conservation, probability range, ...) broke.

    Carries the invariant name so harness layers can report it verbatim.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class NumericsConfig:
    # tolerances
    norm_tol: float = 1e-10          # state normalization at construction
    conservation_tol: float = 1e-10  # walker norm drift allowed per evolution step
    unitary_tol: float = 1e-12       # 2x2 factors and dense operators
    strict_tol: float = 1e-12        # exact-identity comparisons
    overlap_tol: float = 1e-12       # optimizer convergence threshold per sweep
    # optimizer defaults
    hopm_restarts: int = 32
    hopm_sweep_cap: int = 500
    # size guards; configuration values rather than constants so larger
    # machines can push oracle coverage up one size
    pauli_guard_n: int = 12          # 3^n layer enumeration
    dense_guard_n: int = 5           # dense operator dimension n * 2^n
    grid_guard_n: int = 3            # exhaustive Bloch-angle grid
    grid_guard_resolution: int = 64  # subdivisions per angle
    identity_check_guard_n: int = 6  # verify_theorem_identities trial size

    def replace(self, **kwargs) -> "NumericsConfig":
        return dataclasses.replace(self, **kwargs)


DEFAULT = NumericsConfig()
