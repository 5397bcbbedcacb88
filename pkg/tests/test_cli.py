"""Tests for the CLI interface.

Exit codes: 0 success, 1 numerical failure, 2 validation / IO / usage error.
main() returns the int code; argparse raises SystemExit(2) for usage errors.
Every test runs inside its own tmp_path (see conftest), so relative output
paths land there.
"""

import importlib.metadata
import json
import math
from pathlib import Path

import numpy as np
import pytest

import chiralwalk
from chiralwalk import __main__ as cli
from chiralwalk.output import read_table, write_table
from chiralwalk.scaling import eval_xi_model

SMALL_EVOLVE = [
    "evolve", "--mode", "spatial", "--theta", "pi/4", "--dtheta", "pi/2",
    "--wall", "minus", "--N", "40", "--steps", "15", "--samples", "3", "--seed", "2",
]
SMALL_DOS = ["dos", "--dtheta-s", "pi", "--N", "40", "--samples", "3", "--bins", "32", "--seed", "1"]


def _lyapunov_table(path: Path, xi0: float = 2.0, tau: float = 0.8) -> Path:
    deltas = np.logspace(-12, -3, 10)
    xi = eval_xi_model(deltas, xi0, tau)
    rows = [
        (math.pi / 2 - d, d, math.pi, 1 / x, x, 0.01 / x, 0.01 * x, 10_000, 0)
        for d, x in zip(deltas, xi)
    ]
    columns = ["omega", "delta_omega", "dtheta_s", "gamma", "xi", "stderr", "xi_stderr", "N", "seed"]
    return write_table(path, "lyapunov", {"dtheta_s": [math.pi]}, columns, rows)


def test_cli_no_args_prints_help_returns_zero(capsys):
    assert cli.main([]) == 0
    out = capsys.readouterr().out
    assert "usage: chiralwalk" in out
    for cmd in ("evolve", "dos", "lyapunov", "fit", "replay"):
        assert cmd in out


def test_cli_version_matches_metadata(capsys):
    assert cli.main(["--version"]) == 0
    printed = capsys.readouterr().out.strip()
    assert printed == importlib.metadata.version("chiralwalk")
    assert printed == chiralwalk.__version__


def test_cli_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["teleport"])
    assert exc.value.code == 2


def test_cli_bad_angle_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["evolve", "--theta", "quarter"])
    assert exc.value.code == 2


def test_cli_evolve_clean(capsys):
    assert cli.main(["evolve", "--steps", "20", "--N", "48", "-o", "clean.csv"]) == 0
    out = capsys.readouterr().out
    assert "wrote clean.csv" in out
    table = read_table(Path("clean.csv"))
    assert table.command == "evolve"
    table.require("t", "P0", "P0_stderr", "v", "v_stderr", "v_of_mean")
    assert table.columns["t"][0] == 0
    assert table.columns["t"][-1] == 20
    assert table.columns["P0"][0] == pytest.approx(1.0)
    assert np.all(table.columns["P0_stderr"] == 0)
    dist = read_table(Path("clean.distribution.csv"))
    assert dist.columns["n"].tolist() == list(range(-24, 24))
    assert dist.columns["P"].sum() == pytest.approx(1.0)
    assert dist.comments == ["distribution at t = 20"]


def test_cli_evolve_ensemble_and_distribution_step():
    assert cli.main([*SMALL_EVOLVE, "--distribution-at", "7", "-o", "ens.csv"]) == 0
    table = read_table(Path("ens.csv"))
    assert table.config["samples"] == 3
    assert table.config["seed"] == 2
    assert "output" not in table.config
    assert np.any(table.columns["P0_stderr"] > 0)
    dist = read_table(Path("ens.distribution.csv"))
    assert dist.comments == ["distribution at t = 7"]


def test_cli_evolve_invalid_sites_is_validation_error(capsys):
    assert cli.main(["evolve", "--N", "7"]) == 2
    assert "Error: invalid configuration" in capsys.readouterr().err


def test_cli_replay_evolve_is_byte_identical():
    assert cli.main([*SMALL_EVOLVE, "-o", "first.csv"]) == 0
    assert cli.main(["replay", "first.csv", "-o", "second.csv"]) == 0
    assert Path("first.csv").read_bytes() == Path("second.csv").read_bytes()
    assert Path("first.distribution.csv").read_bytes() == Path("second.distribution.csv").read_bytes()


def test_cli_replay_from_a_sidecar_targets_the_main_file(capsys):
    assert cli.main([*SMALL_EVOLVE, "-o", "run.csv"]) == 0
    original = Path("run.csv").read_bytes()
    capsys.readouterr()
    assert cli.main(["replay", "run.distribution.csv"]) == 0
    assert "wrote run.csv" in capsys.readouterr().out
    assert Path("run.csv").read_bytes() == original


def test_cli_dos_writes_table_and_edges(capsys):
    assert cli.main([*SMALL_DOS, "-o", "d.csv"]) == 0
    table = read_table(Path("d.csv"))
    table.require("omega", "rho", "rho_clean")
    assert len(table) == 32
    widths = np.diff(np.linspace(-math.pi, math.pi, 33))
    assert np.sum(table.columns["rho"] * widths) == pytest.approx(1.0)
    edges = json.loads(Path("d.edges.json").read_text())
    assert edges["config"] == table.config
    assert edges["solver"] == "dense"
    assert set(edges["edge_counts"]) >= {"mode", "gap_closed"}
    assert edges["gap_closed"] is edges["edge_counts"]["gap_closed"]


def test_cli_dos_is_independent_of_workers():
    assert cli.main(["--workers", "1", *SMALL_DOS, "-o", "serial.csv"]) == 0
    assert cli.main(["--workers", "3", *SMALL_DOS, "-o", "threaded.csv"]) == 0
    assert Path("serial.csv").read_bytes() == Path("threaded.csv").read_bytes()


def test_cli_replay_dos_is_byte_identical():
    assert cli.main([*SMALL_DOS, "-o", "a.csv"]) == 0
    assert cli.main(["replay", "a.csv", "-o", "b.csv"]) == 0
    assert Path("a.csv").read_bytes() == Path("b.csv").read_bytes()
    assert Path("a.edges.json").read_bytes() == Path("b.edges.json").read_bytes()


def test_cli_lyapunov_rows():
    argv = ["lyapunov", "--delta-omega", "1e-4", "1e-2", "--dtheta-s", "pi", "--N", "10000", "-o", "l.csv"]
    assert cli.main(argv) == 0
    table = read_table(Path("l.csv"))
    assert table.columns["delta_omega"].tolist() == [1e-4, 1e-2]
    assert np.all(table.columns["dtheta_s"] == math.pi)
    np.testing.assert_allclose(table.columns["xi"], 1 / table.columns["gamma"])
    assert np.all(table.columns["N"] == 10_000)
    assert cli.main(["replay", "l.csv", "-o", "l2.csv"]) == 0
    assert Path("l.csv").read_bytes() == Path("l2.csv").read_bytes()


def test_cli_lyapunov_pair_and_sweep():
    argv = [
        "lyapunov", "--omega", "0.3", "--sweep-dtheta-s", "pi/2..pi", "--sweep-points", "2",
        "--N", "10000", "--pair", "-o", "p.csv",
    ]
    assert cli.main(argv) == 0
    table = read_table(Path("p.csv"))
    assert table.columns["dtheta_s"].tolist() == [math.pi / 2, math.pi]
    assert np.all(np.isnan(table.columns["delta_omega"]))
    np.testing.assert_allclose(table.columns["gamma"] + table.columns["gamma_second"], 0.0, atol=1e-6)


def test_cli_lyapunov_short_chain_is_validation_error():
    assert cli.main(["lyapunov", "--N", "100"]) == 2


def test_cli_fit_xi_and_replay():
    _lyapunov_table(Path("lyap.csv"))
    assert cli.main(["fit", "lyap.csv"]) == 0
    report = json.loads(Path("lyap.fit.json").read_text())
    assert report["model"] == "xi"
    (group,) = report["groups"]
    assert group["dtheta_s"] == math.pi
    assert group["parameters"]["xi0"] == pytest.approx(2.0, rel=1e-6)
    assert group["parameters"]["tau"] == pytest.approx(0.8, rel=1e-6)
    assert report["collapse_scatter"] == 0.0
    collapse = read_table(Path("lyap.fit.collapse.csv"))
    np.testing.assert_allclose(collapse.columns["y"], collapse.columns["reference"], rtol=1e-6)

    original = Path("lyap.fit.json").read_bytes()
    assert cli.main(["replay", "lyap.fit.collapse.csv"]) == 0
    assert Path("lyap.fit.json").read_bytes() == original


def test_cli_fit_model_must_match_tables(capsys):
    _lyapunov_table(Path("lyap.csv"))
    assert cli.main(["fit", "lyap.csv", "--model", "dos"]) == 2
    assert "cannot use lyapunov tables" in capsys.readouterr().err


def test_cli_fit_rejects_mixed_tables():
    _lyapunov_table(Path("lyap.csv"))
    assert cli.main([*SMALL_DOS, "-o", "d.csv"]) == 0
    assert cli.main(["fit", "lyap.csv", "d.csv"]) == 2


def test_cli_fit_failure_is_numerical_error(capsys):
    deltas = np.logspace(-12, -3, 10)
    columns = ["omega", "delta_omega", "dtheta_s", "gamma", "xi", "stderr", "xi_stderr", "N", "seed"]
    # xi shrinking toward the critical energy cannot follow the critical form.
    rows = [(math.pi / 2 - d, d, 1.0, 1.0, 20 + math.log10(d), 0.1, 0.1, 10_000, 0) for d in deltas]
    write_table(Path("bad.csv"), "lyapunov", {}, columns, rows)
    assert cli.main(["fit", "bad.csv"]) == 1
    assert "Error:" in capsys.readouterr().err


def test_cli_replay_of_malformed_file_is_usage_error(capsys):
    Path("broken.csv").write_text("omega,rho\n1,2\n")
    assert cli.main(["replay", "broken.csv"]) == 2
    assert "Error:" in capsys.readouterr().err


def test_cli_replay_of_missing_file_is_usage_error():
    assert cli.main(["replay", "nowhere.csv"]) == 2


def test_cli_replay_rejects_a_tampered_config():
    assert cli.main([*SMALL_DOS, "-o", "t.csv"]) == 0
    text = Path("t.csv").read_text().replace('"n_sites":40', '"n_sites":41')
    Path("t.csv").write_text(text)
    assert cli.main(["replay", "t.csv"]) == 2
