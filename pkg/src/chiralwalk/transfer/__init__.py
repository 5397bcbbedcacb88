"""Transfer matrices, Lyapunov exponents and localization lengths."""

from chiralwalk.transfer.lyapunov import (
    LyapunovResult,
    chain_angles,
    clean_gap_exponent,
    inverse_xi_vs_disorder,
    lyapunov,
    lyapunov_pair,
    lyapunov_sweep,
    xi_vs_energy,
    zero_energy_exponent,
)
from chiralwalk.transfer.matrices import (
    TransferMatrix,
    iterate_amplitudes,
    transfer_matrix,
    transfer_stack,
)

__all__ = [
    "LyapunovResult",
    "TransferMatrix",
    "chain_angles",
    "clean_gap_exponent",
    "inverse_xi_vs_disorder",
    "iterate_amplitudes",
    "lyapunov",
    "lyapunov_pair",
    "lyapunov_sweep",
    "transfer_matrix",
    "transfer_stack",
    "xi_vs_energy",
    "zero_energy_exponent",
]
