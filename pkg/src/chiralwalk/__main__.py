"""Command-line interface for chiralwalk.

Exit codes: 0 success, 1 numerical failure, 2 validation / IO / usage error.
Every output file starts with ``#`` header lines holding the command and its
resolved config; ``chiralwalk replay <file>`` reruns from them.
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import ValidationError

import chiralwalk
from chiralwalk.config import configure, settings
from chiralwalk.core.coins import Wall
from chiralwalk.core.disorder import DisorderMode
from chiralwalk.core.lattice import Topology
from chiralwalk.dynamics import WalkConfig, run_ensemble, run_trajectory
from chiralwalk.exceptions import (
    CapacityError,
    ConfigError,
    InvalidArgumentError,
    NumericalError,
)
from chiralwalk.experiments import (
    DosConfig,
    EvolveConfig,
    ExperimentConfig,
    FitConfig,
    LyapunovConfig,
    config_for,
    parse_angle,
    parse_angle_range,
)
from chiralwalk.output import read_table, sidecar_path, write_json, write_table
from chiralwalk.parallel import map_ordered
from chiralwalk.scaling import (
    ScalingModel,
    collapse_curve,
    collapse_scatter,
    fit_dos,
    fit_xi,
    reference_curve,
)
from chiralwalk.scaling.fits import DOS_WINDOW, XI_WINDOW
from chiralwalk.spectral import clean_dos_bin_average, critical_points, dos_ensemble
from chiralwalk.spectral.dos import EDGE_WINDOW
from chiralwalk.transfer import inverse_xi_vs_disorder, lyapunov_pair, xi_vs_energy
from chiralwalk.ui import progress

_SIDECARS = (".distribution", ".collapse")


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _angle_range(text: str) -> tuple[float, float]:
    try:
        return parse_angle_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _emit_error(msg: str) -> None:
    print(f"Error: {msg}", file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralwalk", description="Disordered chiral quantum walk experiments"
    )
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="task-pool size (default: $CHIRALWALK_WORKERS or 1); never changes results",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("--no-progress", action="store_true", help="hide progress bars")
    sub = parser.add_subparsers(dest="command")

    p_evolve = sub.add_parser("evolve", help="walk observables P_n(t), P_0(t), v(t)")
    p_evolve.add_argument("--mode", choices=[m.value for m in DisorderMode], default="clean")
    p_evolve.add_argument("--theta", type=_angle, default=math.pi / 4, help="mean coin angle")
    p_evolve.add_argument("--dtheta", type=_angle, default=0.0, help="disorder width")
    p_evolve.add_argument("--wall", choices=["minus", "plus", "none"], default="none")
    p_evolve.add_argument(
        "--topology", choices=[t.value for t in Topology], default=Topology.RING.value
    )
    p_evolve.add_argument("--N", dest="n_sites", type=int, default=None, help="lattice sites")
    p_evolve.add_argument("--steps", type=int, default=100)
    p_evolve.add_argument("--samples", type=int, default=1)
    p_evolve.add_argument("--seed", type=int, default=None)
    p_evolve.add_argument("--stride", type=int, default=None)
    p_evolve.add_argument(
        "--distribution-at", type=int, default=None, help="step whose P_n is written (default: last)"
    )
    p_evolve.add_argument("-o", "--output", type=Path, default=Path("evolve.csv"))

    p_dos = sub.add_parser("dos", help="disorder-averaged density of states")
    p_dos.add_argument("--theta", type=_angle, default=math.pi / 4)
    p_dos.add_argument("--dtheta-s", type=_angle, default=0.0)
    p_dos.add_argument("--N", dest="n_sites", type=int, default=500)
    p_dos.add_argument("--samples", type=int, default=1)
    p_dos.add_argument("--bins", type=int, default=None)
    p_dos.add_argument("--seed", type=int, default=None)
    p_dos.add_argument("--wall", choices=["minus", "plus", "none"], default="minus")
    p_dos.add_argument("--solver", choices=["auto", "dense", "folded"], default="auto")
    p_dos.add_argument("-o", "--output", type=Path, default=Path("dos.csv"))

    p_lyap = sub.add_parser("lyapunov", help="localization length from transfer matrices")
    p_lyap.add_argument("--theta", type=_angle, default=math.pi / 4)
    p_lyap.add_argument("--omega", type=_angle, default=None, help="absolute quasi-energy")
    p_lyap.add_argument(
        "--delta-omega", type=float, nargs="+", default=None, help="offsets below pi/2"
    )
    p_lyap.add_argument("--dtheta-s", type=_angle, nargs="+", default=None)
    p_lyap.add_argument("--sweep-dtheta-s", type=_angle_range, default=None, metavar="A..B")
    p_lyap.add_argument("--sweep-points", type=int, default=9)
    p_lyap.add_argument("--N", dest="n_sites", type=int, default=1_000_000)
    p_lyap.add_argument("--seed", type=int, default=None)
    p_lyap.add_argument("--pair", action="store_true", help="also report the second exponent")
    p_lyap.add_argument("-o", "--output", type=Path, default=Path("lyapunov.csv"))

    p_fit = sub.add_parser("fit", help="fit the critical forms to lyapunov or dos tables")
    p_fit.add_argument("inputs", type=Path, nargs="+")
    p_fit.add_argument("--model", choices=[m.value for m in ScalingModel], default=None)
    p_fit.add_argument("--window", type=_window, default=None, metavar="LO,HI")
    p_fit.add_argument("--tau-guess", type=float, default=None)
    p_fit.add_argument("-o", "--output", type=Path, default=None)

    p_replay = sub.add_parser("replay", help="rerun the command recorded in a result file")
    p_replay.add_argument("file", type=Path)
    p_replay.add_argument("-o", "--output", type=Path, default=None)
    return parser


# -- config resolution --------------------------------------------------------


def _seed(args: argparse.Namespace) -> int:
    return settings.seed if args.seed is None else args.seed


def _resolve(args: argparse.Namespace) -> ExperimentConfig:
    if args.command == "evolve":
        return EvolveConfig(
            output=args.output,
            mode=args.mode,
            theta=args.theta,
            dtheta=args.dtheta,
            n_sites=args.n_sites,
            steps=args.steps,
            samples=args.samples,
            wall=args.wall,
            topology=args.topology,
            seed=_seed(args),
            stride=args.stride,
            distribution_at=args.distribution_at,
        )
    if args.command == "dos":
        values: dict[str, Any] = {}
        if args.bins is not None:
            values["bins"] = args.bins
        return DosConfig(
            output=args.output,
            theta=args.theta,
            dtheta_s=args.dtheta_s,
            n_sites=args.n_sites,
            samples=args.samples,
            seed=_seed(args),
            wall=args.wall,
            solver=args.solver,
            **values,
        )
    if args.command == "lyapunov":
        strengths = list(args.dtheta_s or [])
        if args.sweep_dtheta_s is not None:
            lo, hi = args.sweep_dtheta_s
            strengths += np.linspace(lo, hi, args.sweep_points).tolist()
        values = {}
        if strengths:
            values["dtheta_s"] = strengths
        if args.delta_omega is not None:
            values["delta_omega"] = args.delta_omega
        return LyapunovConfig(
            output=args.output,
            theta=args.theta,
            omega=args.omega,
            n_sites=args.n_sites,
            seed=_seed(args),
            pair=args.pair,
            **values,
        )
    output = args.output or args.inputs[0].with_name(f"{args.inputs[0].stem}.fit.json")
    return FitConfig(
        output=output,
        inputs=args.inputs,
        model=args.model,
        window=args.window,
        tau_guess=args.tau_guess,
    )


# -- commands -----------------------------------------------------------------


def _wall(choice: str) -> Wall | None:
    return None if choice == "none" else Wall.parse(choice)


def _cmd_evolve(config: EvolveConfig) -> list[Path]:
    configure(chunk_size=config.chunk_size)
    walk = WalkConfig(
        mode=config.mode,
        mean_angle=config.theta,
        strength=config.dtheta,
        steps=config.steps,
        n_sites=config.n_sites,
        topology=config.topology,
        wall=_wall(config.wall),
        seed=config.seed,
        stride=config.stride,
        extra_times=() if config.distribution_at is None else (config.distribution_at,),
    )
    if config.samples == 1:
        trajectory = run_trajectory(walk)
        times, dist, survival, variance = (
            trajectory.times,
            trajectory.distributions,
            trajectory.survival,
            trajectory.variance,
        )
        zeros = np.zeros_like(survival)
        dist_err, survival_err, variance_err, v_of_mean = np.zeros_like(dist), zeros, zeros, variance
    else:
        with progress("evolve", total=config.samples) as advance:
            result = run_ensemble(walk, config.samples, on_chunk=advance)
        times, dist, survival, variance = (
            result.times,
            result.distributions,
            result.survival,
            result.v_mean,
        )
        dist_err, survival_err = result.distribution_stderr, result.survival_stderr
        variance_err, v_of_mean = result.v_mean_stderr, result.v_of_mean

    header = config.header()
    observables = write_table(
        config.output,
        "evolve",
        header,
        ["t", "P0", "P0_stderr", "v", "v_stderr", "v_of_mean"],
        zip(times.tolist(), survival, survival_err, variance, variance_err, v_of_mean),
    )
    at = config.steps if config.distribution_at is None else config.distribution_at
    row = int(np.flatnonzero(times == at)[0])
    n_sites = dist.shape[1]
    sites = np.arange(-(n_sites // 2), n_sites // 2)
    distribution = write_table(
        sidecar_path(config.output, "distribution.csv"),
        "evolve",
        header,
        ["n", "P", "P_stderr"],
        zip(sites.tolist(), dist[row], dist_err[row]),
        comments=[f"distribution at t = {at}"],
    )
    return [observables, distribution]


def _cmd_dos(config: DosConfig) -> list[Path]:
    configure(chunk_size=config.chunk_size)
    with progress("dos", total=config.samples) as advance:
        histogram = dos_ensemble(
            config.theta,
            config.dtheta_s,
            config.n_sites,
            config.samples,
            bins=config.bins,
            seed=config.seed,
            wall=_wall(config.wall),
            solver=config.solver,
            on_chunk=advance,
        )
    if histogram.gap_closed:
        logger.warning(
            "dos: bulk states fill the gap at 0 or pi (mean counts {}); edge counts are not edge states",
            histogram.edge_summary()["mean"],
        )
    header = config.header()
    reference = clean_dos_bin_average(histogram.edges, config.theta)
    table = write_table(
        config.output,
        "dos",
        header,
        ["omega", "rho", "rho_clean"],
        zip(histogram.centers, histogram.density, reference),
        comments=[f"edge weight {histogram.edge_weight!r} removed from the bins"],
    )
    edges = write_json(
        sidecar_path(config.output, "edges.json"),
        {
            "command": "dos",
            "config": header,
            "edge_counts": histogram.edge_summary(),
            "gap_closed": histogram.gap_closed,
            "edge_weight": histogram.edge_weight,
            "edge_window": EDGE_WINDOW,
            "integral": histogram.integral(),
            "solver": histogram.metadata["solver"],
        },
    )
    return [table, edges]


def _lyapunov_rows(config: LyapunovConfig) -> tuple[list[str], list[list[Any]]]:
    columns = ["omega", "delta_omega", "dtheta_s", "gamma", "xi", "stderr", "xi_stderr", "N", "seed"]
    options = {"renorm_interval": config.renorm_interval, "blocks": config.blocks}
    if config.omega is not None:
        points = [(config.omega, s, None) for s in config.dtheta_s]
    else:
        points = [(math.pi / 2 - d, s, d) for s in config.dtheta_s for d in config.delta_omega]

    rows: list[list[Any]] = []
    with progress("lyapunov", total=len(points)) as advance:
        if config.pair:
            columns += ["gamma_second", "gamma_second_stderr"]

            def pair_at(point: tuple[float, float, float | None]) -> Any:
                omega, strength, _ = point
                return lyapunov_pair(omega, config.theta, strength, config.n_sites, config.seed, **options)

            for point, (first, second) in zip(points, map_ordered(pair_at, points)):
                advance(1)
                rows.append(
                    [point[0], point[2], point[1], first.gamma, first.xi, first.stderr,
                     first.xi_stderr, config.n_sites, config.seed, second.gamma, second.stderr]
                )
            return columns, rows

        results = []
        if config.omega is not None:
            results = inverse_xi_vs_disorder(
                config.omega, config.theta, config.dtheta_s, config.n_sites, config.seed,
                on_point=advance, **options,
            )
        else:
            for strength in config.dtheta_s:
                results += xi_vs_energy(
                    config.delta_omega, config.theta, strength, config.n_sites, config.seed,
                    on_point=advance, **options,
                )
    for r in results:
        rows.append(
            [r.omega, r.delta_omega, r.strength, r.gamma, r.xi, r.stderr, r.xi_stderr,
             r.n_sites, r.seed]
        )
    return columns, rows


def _cmd_lyapunov(config: LyapunovConfig) -> list[Path]:
    columns, rows = _lyapunov_rows(config)
    return [write_table(config.output, "lyapunov", config.header(), columns, rows)]


def _fit_groups(config: FitConfig) -> tuple[ScalingModel, list[tuple[float, np.ndarray, np.ndarray, np.ndarray | None]]]:
    tables = [read_table(path) for path in config.inputs]
    commands = {t.command for t in tables}
    if len(commands) != 1 or not commands <= {"lyapunov", "dos"}:
        raise ConfigError(f"fit needs lyapunov or dos tables of one kind, got {sorted(commands)}")
    inferred = ScalingModel.XI if commands == {"lyapunov"} else ScalingModel.DOS
    model = config.model or inferred
    if model is not inferred:
        raise ConfigError(f"a {model.value} fit cannot use {commands.pop()} tables")

    groups = []
    for table in tables:
        if model is ScalingModel.XI:
            table.require("delta_omega", "dtheta_s", "xi", "xi_stderr")
            cols = table.columns
            for strength in np.unique(cols["dtheta_s"]):
                mask = (cols["dtheta_s"] == strength) & np.isfinite(cols["delta_omega"])
                if not np.any(mask):
                    raise ConfigError("lyapunov table has no delta_omega values to fit")
                groups.append(
                    (float(strength), cols["delta_omega"][mask], cols["xi"][mask], cols["xi_stderr"][mask])
                )
        else:
            table.require("omega", "rho")
            offsets, rho = critical_points(table.columns["omega"], table.columns["rho"])
            groups.append((float(table.config.get("dtheta_s", math.nan)), offsets, rho, None))
    return model, groups


def _cmd_fit(config: FitConfig) -> list[Path]:
    model, groups = _fit_groups(config)
    window = config.window or (XI_WINDOW if model is ScalingModel.XI else DOS_WINDOW)
    reports, curves, rows = [], [], []
    for strength, offsets, values, errors in groups:
        if model is ScalingModel.XI:
            fit = fit_xi(offsets, values, errors, window=window)
        else:
            fit = fit_dos(offsets, values, tau_guess=config.tau_guess, window=window)
        keep = (offsets >= fit.window[0]) & (offsets <= fit.window[1])
        x, y = collapse_curve(fit, offsets[keep], values[keep])
        curves.append((x, y))
        rows += zip([strength] * x.size, x, y, reference_curve(model, x))
        reports.append({"dtheta_s": strength, **fit.to_dict()})

    header = config.header()
    scatter = collapse_scatter(curves)
    report = write_json(
        config.output,
        {
            "command": "fit",
            "config": header,
            "model": model.value,
            "groups": reports,
            "collapse_scatter": scatter,
        },
    )
    collapse = write_table(
        sidecar_path(config.output, "collapse.csv"),
        "fit",
        header,
        ["dtheta_s", "x", "y", "reference"],
        rows,
        comments=[f"collapse scatter {scatter!r}"],
    )
    return [report, collapse]


_COMMANDS: dict[str, Callable[[Any], list[Path]]] = {
    "evolve": _cmd_evolve,
    "dos": _cmd_dos,
    "lyapunov": _cmd_lyapunov,
    "fit": _cmd_fit,
}


def _replay_output(path: Path, command: str) -> Path:
    """Primary output path a replayed file belongs to."""
    stem = path.stem
    for suffix in _SIDECARS:
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
            break
    return path.with_name(f"{stem}.json" if command == "fit" else f"{stem}{path.suffix}")


def _cmd_replay(file: Path, output: Path | None) -> list[Path]:
    table = read_table(file)
    config = config_for(table.command, table.config, output or _replay_output(file, table.command))
    logger.info("replaying {} from {}", table.command, file)
    return _run(config)


def _run(config: ExperimentConfig) -> list[Path]:
    return _COMMANDS[config.command](config)


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point. Returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)  # argparse exits 2 on usage errors

    if args.version:
        print(chiralwalk.__version__)
        return 0
    if args.command is None:
        parser.print_help()
        return 0

    try:
        configure(
            workers=args.workers,
            log_level=args.log_level,
            progress=False if args.no_progress else None,
        )
        if args.command == "replay":
            written = _cmd_replay(args.file, args.output)
        else:
            written = _run(_resolve(args))
    except ValidationError as exc:
        _emit_error(f"invalid configuration:\n{exc}")
        return 2
    except (ConfigError, InvalidArgumentError, CapacityError, OSError, ValueError) as exc:
        _emit_error(str(exc))
        return 2
    except NumericalError as exc:
        details = f" {exc.diagnostics}" if exc.diagnostics else ""
        _emit_error(f"{exc}{details}")
        return 1

    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
