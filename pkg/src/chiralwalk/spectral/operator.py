"""Matrix form of the one-step unitary U = S C on a ring.

Basis index ``2 * i + sigma`` for array site ``i`` and chirality ``sigma``
(R = 0, L = 1). Coins are real, so U is a real orthogonal matrix.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from chiralwalk.config import settings
from chiralwalk.core.disorder import CoinField, DisorderMode
from chiralwalk.core.lattice import BoundaryConfig, L, R
from chiralwalk.exceptions import CapacityError, InvalidArgumentError


def _check_operator_input(coin_field: CoinField, boundary: BoundaryConfig | None) -> None:
    if coin_field.mode is DisorderMode.TEMPORAL:
        raise InvalidArgumentError("a temporal field has no time-independent step operator")
    if boundary is not None and not boundary.periodic:
        raise InvalidArgumentError("the step operator is assembled on a ring only")


def build_step_operator(
    coin_field: CoinField, boundary: BoundaryConfig | None = None
) -> sparse.csr_array:
    """Sparse U with exactly two nonzeros per row and per column."""
    _check_operator_input(coin_field, boundary)
    n = coin_field.n_sites
    cos, sin = coin_field.coin_entries()
    site = np.arange(n)
    right, left = (site + 1) % n, (site - 1) % n

    # (U psi)_{i+1,R} = c_i psi_{i,R} - s_i psi_{i,L}
    # (U psi)_{i-1,L} = s_i psi_{i,R} + c_i psi_{i,L}
    rows = np.concatenate([2 * right + R, 2 * right + R, 2 * left + L, 2 * left + L])
    cols = np.concatenate([2 * site + R, 2 * site + L, 2 * site + R, 2 * site + L])
    data = np.concatenate([cos, -sin, sin, cos])
    return sparse.csr_array(sparse.coo_array((data, (rows, cols)), shape=(2 * n, 2 * n)))


def build_step_matrix(
    coin_field: CoinField, boundary: BoundaryConfig | None = None
) -> np.ndarray:
    """Dense 2N x 2N form of :func:`build_step_operator`."""
    if coin_field.n_sites > settings.max_dense_sites:
        raise CapacityError(
            f"dense assembly of N={coin_field.n_sites} exceeds the cap "
            f"of {settings.max_dense_sites} sites (CHIRALWALK_MAX_DENSE_SITES)"
        )
    return build_step_operator(coin_field, boundary).toarray()


def unitarity_residual(matrix: np.ndarray) -> float:
    """max |U^dagger U - I|."""
    product = matrix.conj().T @ matrix
    return float(np.max(np.abs(product - np.eye(matrix.shape[0]))))


def zigzag_order(n_sites: int) -> np.ndarray:
    """Site order 0, 1, N-1, 2, N-2, ..., N/2 in which ring neighbours are at most two apart."""
    order = [0]
    for k in range(1, n_sites // 2):
        order += [k, n_sites - k]
    order.append(n_sites // 2)
    return np.asarray(order)


def folded_band(coin_field: CoinField, boundary: BoundaryConfig | None = None) -> np.ndarray:
    """Lower band storage of U + U^T in zigzag order (lower bandwidth 5).

    Its eigenvalues are 2 cos(omega) over the spectrum of U.
    """
    op = build_step_operator(coin_field, boundary)
    symmetric = (op + op.T).tocsr()
    states = (2 * zigzag_order(coin_field.n_sites)[:, None] + np.array([R, L])).ravel()
    size = states.size
    perm = sparse.csr_array((np.ones(size), (np.arange(size), states)), shape=(size, size))
    permuted = (perm @ symmetric @ perm.T).tocsr()
    band = np.zeros((6, size))
    for k in range(6):
        band[k, : size - k] = permuted.diagonal(-k)
    return band
