import math

import numpy as np
import pytest
from scipy import linalg

from chiralwalk.config import configure
from chiralwalk.core import BoundaryConfig, CoinField, evolve, localized_state
from chiralwalk.core.dispersion import dispersion
from chiralwalk.exceptions import CapacityError, InvalidArgumentError
from chiralwalk.spectral import (
    Spectrum,
    build_step_matrix,
    build_step_operator,
    check_quadruplet_symmetry,
    detect_edge_states,
    eigenphases,
    field_eigenphases,
    folded_eigenphases,
)
from chiralwalk.spectral.operator import folded_band, unitarity_residual, zigzag_order
from chiralwalk.spectral.spectrum import wrap_phase


def test_step_matrix_matches_time_evolution():
    field = CoinField.spatial(0.5, 1.5, 12, seed=2, wall="-")
    matrix = build_step_matrix(field)
    state = localized_state(12, 1, (0.6, 0.8j))
    evolved = evolve(state, field, steps=1)
    np.testing.assert_allclose(matrix @ state.amplitudes.ravel(), evolved.amplitudes.ravel(), atol=1e-15)


def test_step_operator_is_sparse_orthogonal():
    op = build_step_operator(CoinField.spatial(0.3, 2.0, 20, seed=1))
    assert op.nnz == 4 * 20
    assert unitarity_residual(op.toarray()) < 1e-13
    assert np.isrealobj(op.toarray())


def test_temporal_field_has_no_step_operator():
    with pytest.raises(InvalidArgumentError):
        build_step_operator(CoinField.temporal(0.3, 1.0, 8, seed=0))


def test_open_line_is_rejected():
    with pytest.raises(InvalidArgumentError):
        build_step_operator(CoinField.clean(0.3, 8), BoundaryConfig.open_line())


def test_dense_cap_raises_capacity_error():
    configure(max_dense_sites=10)
    with pytest.raises(CapacityError):
        build_step_matrix(CoinField.clean(0.3, 12))


def test_eigenphases_of_clean_ring_follow_the_dispersion():
    n_sites, theta = 16, 0.7
    spectrum = field_eigenphases(CoinField.clean(theta, n_sites))
    k = 2 * math.pi * np.arange(n_sites) / n_sites
    expected = np.sort(wrap_phase(dispersion(k, theta).ravel()))
    np.testing.assert_allclose(spectrum.phases, expected, atol=1e-10)
    assert spectrum.residual < 1e-12
    assert len(spectrum) == 2 * n_sites


def test_eigenphases_rejects_non_unitary_input():
    with pytest.raises(InvalidArgumentError):
        eigenphases(np.eye(4) * 2)
    with pytest.raises(InvalidArgumentError):
        eigenphases(np.eye(3))


def test_phases_stay_in_half_open_interval():
    spectrum = eigenphases(-np.eye(4))
    assert np.all(spectrum.phases == math.pi)


def test_spectrum_requires_two_phases_per_site():
    with pytest.raises(InvalidArgumentError):
        Spectrum(np.zeros(5), 0.0, n_sites=3)


def test_zigzag_order_makes_ring_neighbours_close():
    order = zigzag_order(10)
    assert sorted(order.tolist()) == list(range(10))
    position = np.argsort(order)
    for site in range(10):
        assert abs(position[site] - position[(site + 1) % 10]) <= 2


def test_folded_band_reproduces_the_symmetric_matrix():
    field = CoinField.spatial(0.4, 2.0, 14, seed=7, wall="+")
    band = folded_band(field)
    assert band.shape == (6, 28)
    dense = build_step_matrix(field)
    expected = np.sort(np.linalg.eigvalsh(dense + dense.T))
    np.testing.assert_allclose(np.sort(linalg.eigvals_banded(band, lower=True)), expected, atol=1e-12)


def test_folded_phases_match_dense_magnitudes():
    field = CoinField.spatial(math.pi / 4, math.pi, 40, seed=3, wall="-")
    dense = field_eigenphases(field)
    folded = folded_eigenphases(field)
    assert folded.folded
    np.testing.assert_allclose(folded.phases, np.sort(np.abs(dense.phases)), atol=5e-7)


@pytest.mark.parametrize("wall, expected", [("-", (2, 2)), ("+", (0, 0))])
def test_clean_hadamard_edge_states(wall, expected):
    spectrum = field_eigenphases(CoinField.clean(math.pi / 4, 500, wall=wall))
    assert tuple(detect_edge_states(spectrum, tol=1e-8)) == expected


def test_clean_ring_without_wall_has_no_edge_states():
    spectrum = field_eigenphases(CoinField.clean(math.pi / 4, 100))
    assert tuple(detect_edge_states(spectrum)) == (0, 0)


def test_folded_spectrum_finds_the_same_edge_states():
    spectrum = folded_eigenphases(CoinField.clean(math.pi / 4, 200, wall="-"))
    assert tuple(detect_edge_states(spectrum)) == (2, 2)


def test_detect_edge_states_rejects_non_positive_tolerance():
    spectrum = field_eigenphases(CoinField.clean(0.3, 8))
    with pytest.raises(InvalidArgumentError):
        detect_edge_states(spectrum, tol=0.0)


def test_quadruplet_symmetry_holds_for_disordered_rings():
    for sample in range(100):
        field = CoinField.spatial(math.pi / 4, math.pi, 100, seed=12, sample_index=sample, wall="-")
        report = check_quadruplet_symmetry(field_eigenphases(field))
        assert report.holds, report


def test_quadruplet_symmetry_detects_a_broken_spectrum():
    phases = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    report = check_quadruplet_symmetry(Spectrum(phases, 0.0, 3))
    assert not report.chiral_holds
    assert not report.bipartite_holds


def test_quadruplet_check_handles_the_pi_seam():
    phases = np.array([math.pi, math.pi - 1e-12, 0.0, 1e-12, -math.pi / 2, math.pi / 2, 1.0, -1.0])
    report = check_quadruplet_symmetry(Spectrum(phases, 0.0, 4), tol=1e-9)
    assert report.chiral_mismatch < 1e-9


@pytest.mark.parametrize("strength", [math.pi / 4, math.pi / 2, math.pi])
@pytest.mark.parametrize("seed", [0, 1])
def test_edge_states_survive_spatial_disorder_up_to_pi(strength, seed):
    field = CoinField.spatial(math.pi / 4, strength, 500, seed=seed, wall="-")
    assert tuple(detect_edge_states(field_eigenphases(field))) == (2, 2)
