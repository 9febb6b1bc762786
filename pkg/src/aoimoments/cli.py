"""Command-line front end: ``aoimoments {exact,bounds,simulate,sweep}``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import experiments, simulator
from .analysis import aoi_bounds, exact_average_aoi, solve_alpha
from .channel import ChannelModel
from .distributions import DiscretePMF, empirical_moments, make_degenerate, make_geometric, make_two_point
from .errors import InvalidParameterError

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _csv_list(cast):
    def parse(text: str):
        try:
            return tuple(cast(t) for t in text.split(",") if t.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _add_dist_args(sp: argparse.ArgumentParser, channel: bool = True) -> None:
    sp.add_argument("--dist", choices=["degenerate", "two-point", "geometric"], default="geometric")
    sp.add_argument("--p", type=float, default=0.125, help="arrival rate 1/E(X)")
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--b", type=int, default=15)
    sp.add_argument("--q", type=float, default=0.5, help="Pr{X=a} for two-point arrivals")
    if channel:
        sp.add_argument("--mu", type=float, help="per-block success probability")
        sp.add_argument("--snr", type=float, help="mean SNR (linear)")
        sp.add_argument("--threshold", type=float, help="decoding SNR threshold (linear)")


def _dist(args) -> DiscretePMF:
    if args.dist == "geometric":
        return make_geometric(args.p)
    if args.dist == "two-point":
        return make_two_point(args.a, args.b, args.q)
    d = 1.0 / args.p
    if abs(d - round(d)) > 1e-9:
        raise _UsageError(f"degenerate arrivals need 1/p to be an integer, got {d}")
    return make_degenerate(round(d))


def _mu(args) -> float:
    if args.mu is not None:
        if args.snr is not None or args.threshold is not None:
            raise _UsageError("use either --mu or --snr/--threshold, not both")
        return ChannelModel.from_mu(args.mu).mu
    if args.snr is None or args.threshold is None:
        raise _UsageError("need --mu or both --snr and --threshold")
    return ChannelModel.from_snr(args.snr, args.threshold).mu


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoimoments",
        description="Average AoI of a discrete-time FCFS queue with geometric service, and moment-based bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exact", help="exact average AoI")
    _add_dist_args(sp)

    sp = sub.add_parser("bounds", help="moment-based AoI bounds")
    _add_dist_args(sp)
    sp.add_argument("--orders", type=_csv_list(int), default=(2,), help="moment order(s) K, comma separated")
    sp.add_argument("--moment-source", choices=["exact", "empirical"], default="exact")
    sp.add_argument("--samples", type=int, default=experiments.EMPIRICAL_DRAWS)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("simulate", help="slot-level simulation")
    _add_dist_args(sp)
    sp.add_argument("--blocks", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--warmup", type=float, default=0.01)
    sp.add_argument("--trace", metavar="PATH", help="write the per-packet trace as CSV")

    sp = sub.add_parser("sweep", help="traffic-intensity sweep to CSV")
    sp.add_argument("--p", type=float, default=0.125)
    sp.add_argument("--dists", type=_csv_list(str), default=experiments.DIST_KINDS)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--b", type=int, default=15)
    sp.add_argument("--q", type=float, default=0.5)
    sp.add_argument("--rho-grid", type=_csv_list(float), default=experiments.default_rho_grid())
    sp.add_argument("--orders", type=_csv_list(int), default=(2, 7))
    sp.add_argument("--mode", choices=["analytic", "simulate", "both"], default="analytic")
    sp.add_argument("--moment-source", choices=["exact", "empirical"], default="exact")
    sp.add_argument("--blocks", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", metavar="PATH", help="CSV path (default: standard output)")
    return parser


def _cmd_exact(args) -> None:
    dist, mu = _dist(args), _mu(args)
    print(f"{exact_average_aoi(dist, mu):.12g}")


def _cmd_bounds(args) -> None:
    dist, mu = _dist(args), _mu(args)
    sol = solve_alpha(dist, mu)
    k_max = max(args.orders)
    if args.moment_source == "empirical":
        import numpy as np

        draws = dist.sample_many(np.random.default_rng(args.seed), args.samples)
        moments = empirical_moments(draws, k_max)
    else:
        moments = dist.moments(k_max)
    print(f"rho={sol.rho:.12g} alpha={sol.alpha:.12g} lambda={sol.lam:.12g}")
    print(f"exact={exact_average_aoi(dist, mu, sol):.12g}")
    for K in args.orders:
        b = aoi_bounds(moments, mu, sol.lam, sol.alpha, K)
        print(
            f"K={K} lower={b.lower:.12g} ({b.lower_source}) upper={b.upper:.12g} ({b.upper_source})"
            f" diverging={str(b.diverging).lower()}"
        )


def _cmd_simulate(args) -> None:
    dist, mu = _dist(args), _mu(args)
    cfg = simulator.SimConfig(dist, mu, args.blocks, args.seed, args.warmup)
    res = simulator.run(cfg)
    print(f"avg_aoi={res.avg_aoi:.12g}")
    print(f"avg_aoi_by_area={res.avg_aoi_by_area:.12g}")
    print(f"packets_delivered={res.packets_delivered} arrivals={res.arrivals}")
    print(f"lambda_hat={res.lambda_hat:.12g} waiting_time_mean={res.waiting_time_mean:.12g}")
    print(f"idle_blocks={res.idle_time_total} busy_blocks={res.busy_blocks}")
    print(f"seed={cfg.seed} generator={res.generator}")
    if args.trace:
        simulator.write_trace(res, args.trace)


def _cmd_sweep(args) -> None:
    spec = experiments.SweepSpec(
        p=args.p, dists=tuple(d.replace("-", "_") for d in args.dists),
        two_point=(args.a, args.b, args.q), rho_grid=tuple(args.rho_grid), orders=tuple(args.orders),
        sim_blocks=args.blocks, seed=args.seed, mode=args.mode, moment_source=args.moment_source,
    )
    rows = experiments.run_sweep(spec)
    if args.out:
        experiments.emit_csv(rows, args.out)
    else:
        sys.stdout.write(experiments.rows_to_csv(rows))


COMMANDS = {"exact": _cmd_exact, "bounds": _cmd_bounds, "simulate": _cmd_simulate, "sweep": _cmd_sweep}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except (_UsageError, InvalidParameterError) as exc:
        print(f"aoimoments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError, ValueError, OSError) as exc:
        print(f"aoimoments: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
