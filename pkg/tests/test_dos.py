import math

import numpy as np
import pytest
from scipy import integrate

from chiralwalk.config import configure
from chiralwalk.exceptions import InvalidArgumentError
from chiralwalk.spectral import (
    DosHistogram,
    Solver,
    clean_dos,
    clean_dos_bin_average,
    clean_integrated_dos,
    critical_peak,
    critical_points,
    dos_ensemble,
    dos_near_critical,
)
from chiralwalk.spectral.dos import pick_solver


def test_clean_dos_vanishes_in_the_gaps():
    theta = math.pi / 4
    assert clean_dos(0.1, theta) == 0.0
    assert clean_dos(math.pi - 0.1, theta) == 0.0
    assert clean_dos(math.pi / 2, theta) == pytest.approx(math.sqrt(2) / (2 * math.pi))


def test_clean_dos_diverges_at_band_edges():
    assert math.isinf(clean_dos(0.0, 0.0))
    assert math.isinf(clean_dos(math.pi, 0.0))


def test_clean_dos_integrates_to_one():
    theta = 0.9
    edge = math.acos(math.cos(theta))
    half, _ = integrate.quad(lambda w: clean_dos(w, theta), edge, math.pi - edge, limit=200)
    assert 2 * half == pytest.approx(1.0, abs=1e-4)


def test_integrated_dos_is_a_cumulative_distribution():
    theta = math.pi / 4
    grid = np.linspace(-math.pi, math.pi, 2001)
    cdf = clean_integrated_dos(grid, theta)
    assert cdf[0] == 0.0
    assert cdf[-1] == 1.0
    assert np.all(np.diff(cdf) >= -1e-15)
    assert clean_integrated_dos(0.0, theta) == pytest.approx(0.5)


def test_flat_band_integrated_dos():
    assert clean_integrated_dos(0.0, math.pi / 2) == 0.5
    assert clean_integrated_dos(2.0, math.pi / 2) == 1.0


def test_bin_average_integrates_to_one():
    edges = np.linspace(-math.pi, math.pi, 257)
    averaged = clean_dos_bin_average(edges, 0.6)
    assert np.sum(averaged * np.diff(edges)) == pytest.approx(1.0, abs=1e-12)


def test_pick_solver():
    assert pick_solver("auto", 500) is Solver.DENSE
    assert pick_solver("auto", 2000) is Solver.FOLDED
    assert pick_solver(Solver.DENSE, 5000) is Solver.DENSE


def test_clean_histogram_matches_the_closed_form():
    histogram = dos_ensemble(math.pi / 4, 0.0, 500, 1, bins=16, wall=None)
    assert histogram.integral() == pytest.approx(1.0, abs=1e-12)
    reference = clean_dos_bin_average(histogram.edges, math.pi / 4)
    # Bins away from the van Hove edges agree to the level of finite-size quantization.
    centers = histogram.centers
    interior = np.abs(np.abs(centers) - math.pi / 2) < 0.5
    np.testing.assert_allclose(histogram.density[interior], reference[interior], rtol=0.1)
    assert histogram.edge_weight == 0.0


def test_wall_edge_states_are_removed_from_the_bins():
    histogram = dos_ensemble(math.pi / 4, 0.0, 200, 1, bins=32, wall="-")
    assert histogram.edge_weight == pytest.approx(4 / 400)
    assert histogram.edge_summary()["mode"] == [2, 2]
    assert histogram.metadata["wall"] == "-"


def test_dense_and_folded_histograms_agree():
    kwargs = dict(bins=40, seed=3, wall="-")
    dense = dos_ensemble(math.pi / 4, math.pi / 2, 60, 4, solver="dense", **kwargs)
    folded = dos_ensemble(math.pi / 4, math.pi / 2, 60, 4, solver="folded", **kwargs)
    assert folded.metadata["solver"] == "folded"
    np.testing.assert_allclose(folded.density, dense.density, atol=2.0 / (8 * 60 * np.diff(dense.edges)[0]))
    assert folded.integral() == pytest.approx(1.0)


def test_histogram_is_independent_of_workers_and_chunking():
    configure(chunk_size=2)
    serial = dos_ensemble(0.5, 1.0, 30, 5, bins=20, seed=1, workers=1)
    configure(chunk_size=3)
    threaded = dos_ensemble(0.5, 1.0, 30, 5, bins=20, seed=1, workers=3)
    np.testing.assert_allclose(serial.density, threaded.density, rtol=0, atol=1e-12)
    np.testing.assert_array_equal(serial.edge_counts, threaded.edge_counts)


def test_on_chunk_counts_samples():
    configure(chunk_size=2)
    seen = []
    dos_ensemble(0.5, 1.0, 20, 5, bins=10, on_chunk=seen.append)
    assert seen == [2, 2, 1]


def test_disorder_piles_states_up_near_half_pi():
    clean = dos_ensemble(math.pi / 4, 0.0, 200, 1, bins=100, wall="-")
    disordered = dos_ensemble(math.pi / 4, math.pi, 200, 20, bins=100, wall="-", seed=5)
    near = np.abs(np.abs(clean.centers) - math.pi / 2) < 0.05
    assert disordered.density[near].mean() > clean.density[near].mean()


def test_dos_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        dos_ensemble(0.3, 0.1, 20, 0)
    with pytest.raises(InvalidArgumentError):
        dos_ensemble(0.3, 0.1, 20, 1, bins=0)


def test_critical_points_average_the_four_images():
    centers = np.linspace(-math.pi, math.pi, 401)[:-1] + math.pi / 400
    density = 1.0 + np.cos(centers) ** 2
    offsets, rho = critical_points(centers, density)
    assert np.all(offsets > 0)
    assert offsets.max() <= math.pi / 4
    np.testing.assert_allclose(rho, 1.0 + np.sin(offsets) ** 2, rtol=1e-3)


def test_dos_near_critical_uses_histogram_bins():
    histogram = dos_ensemble(math.pi / 4, math.pi, 40, 2, bins=50, seed=2)
    offsets, rho = dos_near_critical(histogram)
    assert offsets.size == rho.size
    assert np.all(rho > 0)


@pytest.mark.parametrize(
    "counts, closed",
    [
        ([[2, 2], [2, 2], [2, 2]], False),
        ([[0, 0], [0, 0]], False),
        ([[2, 2], [3, 2], [1, 2]], False),
        ([[16, 2], [14, 2], [18, 2]], True),
        ([[2, 15], [2, 17]], True),
    ],
)
def test_gap_closed_flags_counts_a_wall_cannot_bind(counts, closed):
    edges = np.linspace(-math.pi, math.pi, 5)
    histogram = DosHistogram(
        edges=edges,
        density=np.full(4, 1 / (2 * math.pi)),
        samples=len(counts),
        n_sites=100,
        edge_counts=np.array(counts, dtype=np.int64),
    )
    assert histogram.gap_closed is closed
    assert histogram.edge_summary()["gap_closed"] is closed


def test_empty_edge_counts_report_an_open_gap():
    histogram = DosHistogram(edges=np.linspace(-math.pi, math.pi, 3), density=np.zeros(2), samples=0, n_sites=10)
    assert histogram.edge_summary() == {"mode": None, "mean": None, "samples": 0, "gap_closed": False}


def test_critical_peak_takes_the_highest_bin_on_each_side():
    edges = np.linspace(-math.pi, math.pi, 1025)
    histogram = DosHistogram(edges=edges, density=np.ones(1024), samples=1, n_sites=512)
    centers = histogram.centers
    density = histogram.density.copy()
    density[np.argmin(np.abs(centers - math.pi / 2))] = 5.0
    density[np.argmin(np.abs(centers + math.pi / 2))] = 3.0
    # Outside the window; must be ignored.
    density[np.argmin(np.abs(centers - (math.pi / 2 + 0.1)))] = 50.0
    spiked = DosHistogram(edges=edges, density=density, samples=1, n_sites=512)
    assert critical_peak(spiked) == pytest.approx(4.0)
    assert critical_peak(histogram) == pytest.approx(1.0)


def test_critical_peak_needs_a_bin_in_the_window():
    histogram = DosHistogram(edges=np.linspace(-math.pi, math.pi, 5), density=np.ones(4), samples=1, n_sites=4)
    with pytest.raises(InvalidArgumentError):
        critical_peak(histogram, window=0.01)
