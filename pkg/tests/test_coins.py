import math

import numpy as np
import pytest

from chiralwalk.core import Wall, dispersion, band_edges, make_coin, make_reflecting_coin
from chiralwalk.core.lattice import initial_state, localized_state, site_index, site_labels
from chiralwalk.exceptions import InvalidArgumentError


@pytest.mark.parametrize("theta", [0.0, math.pi / 4, 1.0, math.pi / 2, -2.5, 3 * math.pi])
def test_coin_is_unitary_with_unit_determinant(theta):
    coin = make_coin(theta)
    assert coin.is_unitary(1e-14)
    assert abs(coin.determinant - 1.0) < 1e-14


def test_hadamard_coin_entries():
    coin = make_coin(math.pi / 4)
    h = 1 / math.sqrt(2)
    np.testing.assert_allclose(coin.matrix, [[h, -h], [h, h]], atol=1e-15)


def test_coin_rejects_non_finite_angle():
    with pytest.raises(InvalidArgumentError):
        make_coin(math.nan)


def test_reflecting_coins_are_exact():
    minus = make_reflecting_coin("-")
    plus = make_reflecting_coin(Wall.PLUS)
    np.testing.assert_array_equal(minus.matrix, [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(plus.matrix, [[0, -1], [1, 0]])
    assert minus.is_unitary(0.0)
    assert plus.is_unitary(0.0)


def test_plus_wall_is_the_quarter_turn_rotation():
    np.testing.assert_allclose(make_reflecting_coin("+").matrix, make_coin(math.pi / 2).matrix, atol=1e-16)
    np.testing.assert_allclose(make_reflecting_coin("-").matrix, make_coin(-math.pi / 2).matrix, atol=1e-16)


def test_reflecting_coin_swaps_chirality():
    out = make_reflecting_coin("minus").apply(np.array([1.0, 0.0]))
    np.testing.assert_array_equal(out, [0.0, -1.0])


@pytest.mark.parametrize("value, expected", [("+", Wall.PLUS), ("minus", Wall.MINUS), (-1, Wall.MINUS), (Wall.PLUS, Wall.PLUS)])
def test_wall_parse(value, expected):
    assert Wall.parse(value) is expected


def test_wall_parse_rejects_unknown():
    with pytest.raises(InvalidArgumentError):
        Wall.parse("sideways")


def test_site_labels_and_index():
    labels = site_labels(6)
    assert labels.tolist() == [-3, -2, -1, 0, 1, 2]
    assert site_index(6, 0) == 3
    with pytest.raises(InvalidArgumentError):
        site_index(6, 3)


def test_initial_state_is_normalized_at_origin():
    state = initial_state(10)
    assert state.norm_squared == pytest.approx(1.0, abs=1e-15)
    assert state.amplitude(0, 0) == pytest.approx(1 / math.sqrt(2))
    assert state.amplitude(0, 1) == pytest.approx(1j / math.sqrt(2))
    assert not state.amplitudes.flags.writeable


@pytest.mark.parametrize("n_sites", [3, 5, 2])
def test_lattice_rejects_odd_or_tiny_sizes(n_sites):
    with pytest.raises(InvalidArgumentError):
        initial_state(n_sites)


def test_localized_state_normalizes_spinor():
    state = localized_state(8, -2, (3.0, 4.0))
    assert state.amplitude(-2, 0) == pytest.approx(0.6)
    assert state.amplitude(-2, 1) == pytest.approx(0.8)


def test_dispersion_branches_are_symmetric():
    k = np.linspace(-math.pi, math.pi, 101)
    branches = dispersion(k, math.pi / 4)
    assert branches.shape == (101, 2)
    np.testing.assert_allclose(np.cos(branches[:, 1]), np.cos(k) * math.cos(math.pi / 4), atol=1e-14)
    np.testing.assert_allclose(branches[:, 0], -branches[:, 1], atol=1e-15)


def test_band_edges_of_hadamard_walk():
    lo, hi = band_edges(math.pi / 4)
    assert lo == pytest.approx(math.pi / 4)
    assert hi == pytest.approx(3 * math.pi / 4)
