"""Command-line entry point: network generation, power-law fitting,
simulation, sweeps, game classification, ingestion, and fixture generation.

All randomness flows from a single --seed; omitting it selects the fixed
default so repeated invocations are byte-identical.  Usage errors exit 2,
data/parameter errors exit 1, progress goes to stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dynamics, ingest, network, powerlaw, sim
from .errors import AmbiguousGame, EvotaxError
from .game import GameParams, classify_game, payoff_quad

PARAM_FLAGS = {
    # flag dest -> GameParams field
    "reward": "R",
    "gamma_cost": "Gamma",
    "fine": "phi",
    "alpha": "alpha",
    "d_low": "d_low",
    "d_high": "d_high",
    "prob_high": "prob_high",
    "theta_low": "theta_low",
    "theta_high": "theta_high",
    "beta": "beta",
    "mu": "mu",
}

SIM_FLAGS = {
    "z": "Z",
    "steps": "steps",
    "runs": "runs",
    "init_coop_freq": "init_coop_freq",
    "measure_fraction": "measure_fraction",
    "sigma": "diversity_sigma",
}


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reward", type=float, help="social reward R for correct declaration")
    p.add_argument("--gamma-cost", type=float, help="inspection cost")
    p.add_argument("--fine", type=float, help="fine multiplier on the evaded amount")
    p.add_argument("--alpha", type=float, help="undeclared fraction in [0,1]")
    p.add_argument("--d-low", type=float, help="low-volume tax debt")
    p.add_argument("--d-high", type=float, help="high-volume tax debt")
    p.add_argument("--prob-high", type=float, help="probability an edge is high-volume")
    p.add_argument("--theta-low", type=float, help="audit anchor at 2*alpha*d_low")
    p.add_argument("--theta-high", type=float, help="audit anchor at 2*alpha*d_high")
    p.add_argument("--beta", type=float, help="selection intensity")
    p.add_argument("--mu", type=float, help="mutation probability per step")


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat TOML config file")
    p.add_argument("--seed", type=int, help="master seed (fixed default if omitted)")
    p.add_argument("--z", type=int, help="population size")
    p.add_argument("--steps", type=int, help="time steps per run")
    p.add_argument("--runs", type=int, help="Monte Carlo runs")
    p.add_argument("--init-coop-freq", type=float, help="initial cooperator frequency")
    p.add_argument("--measure-fraction", type=float,
                   help="final fraction of steps averaged into the summary")
    p.add_argument("--sigma", type=float, help="std dev of per-agent audit anchors")
    p.add_argument("--topology", help="well_mixed[:k] | ba[:m] | xbs[:m:p:mode] | "
                                      "powerlaw[:gamma:kmin:kmax] | file:PATH")
    p.add_argument("--n-partners", type=int, help="well-mixed partners per step")
    p.add_argument("--full-scale", action="store_true",
                   help="Z=10,000 and 50 runs instead of the desk-scale defaults")
    _add_param_flags(p)


def _config_from_args(args) -> sim.SimConfig:
    config = sim.load_config(args.config) if args.config else sim.SimConfig()
    if args.full_scale:
        config = config.replace(Z=sim.FULL_Z, runs=sim.FULL_RUNS)
    if args.seed is not None:
        config = config.replace(master_seed=args.seed)
    for dest, field in SIM_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            config = config.replace(**{field: value})
    if args.topology is not None:
        config = config.replace(topology=sim.parse_topology(args.topology))
    if args.n_partners is not None:
        config = sim.with_axis_value(config, "n_partners", args.n_partners)
    updates = {}
    for dest, field in PARAM_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            updates[field] = value
    if updates:
        config = config.replace(params=config.params.replace(**updates))
    return config


def parse_axes(spec: str):
    """Axis grammar: name:lo..hi:n for ranges, name:v1|v2|... for lists;
    two axes separated by a comma."""
    axes = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise EvotaxError(f"bad axis {chunk!r}: expected name:range-or-list")
        name, rest = chunk.split(":", 1)
        if ".." in rest:
            span, _, count = rest.rpartition(":")
            lo_s, _, hi_s = span.partition("..")
            try:
                lo, hi, n = float(lo_s), float(hi_s), int(count)
            except ValueError:
                raise EvotaxError(f"bad axis range {chunk!r}") from None
            if n < 1:
                raise EvotaxError(f"axis {name!r} needs at least one point")
            values = tuple(float(v) for v in np.linspace(lo, hi, n))
        else:
            raw = [v for v in rest.split("|") if v]
            if not raw:
                raise EvotaxError(f"axis {name!r} has no values")
            values = []
            for v in raw:
                try:
                    values.append(float(v))
                except ValueError:
                    values.append(v)
            values = tuple(values)
        axes.append((name, values))
    if not axes:
        raise EvotaxError("no axes given")
    return axes


def _progress(done: int, total: int) -> None:
    print(f"cell {done}/{total}", file=sys.stderr, flush=True)


def cmd_generate(args) -> int:
    topo = sim.parse_topology(args.topology)
    seed = args.seed if args.seed is not None else sim.DEFAULT_MASTER_SEED
    params = GameParams(prob_high=args.prob_high, d_low=args.d_low, d_high=args.d_high)
    config = sim.SimConfig(params=params, topology=topo, Z=args.z)
    ss = np.random.SeedSequence(seed)
    net_ss, weight_ss = ss.spawn(2)
    net = sim.build_network(config, net_ss, weight_ss)
    network.write_edge_list(net, args.out)
    print(f"wrote {args.out}: Z={net.Z} edges={net.edge_count} "
          f"avg_degree={2 * net.edge_count / net.Z:.4f}")
    return 0


def cmd_fit(args) -> int:
    samples = powerlaw.read_samples(args.samples)
    fit = powerlaw.fit_powerlaw(samples)
    print(f"gamma_hat={fit.gamma_hat!r} x_min_hat={fit.x_min_hat} "
          f"ks_statistic={fit.ks_statistic!r} n_tail={fit.n_tail}")
    return 0


def cmd_simulate(args) -> int:
    config = _config_from_args(args)
    stats, trajectories = sim.monte_carlo(config, return_trajectories=True)
    if args.out:
        if config.runs == 1:
            dynamics.write_trajectory(args.out, trajectories[0])
        else:
            with open(args.out, "w", newline="\n") as f:
                sim.write_trajectory_stats(f, trajectories)
    print(f"mean_coop={stats.mean_coop!r} min_coop={stats.min_coop!r} "
          f"max_coop={stats.max_coop!r} runs={config.runs}")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    axes = parse_axes(args.axes)
    result = sim.sweep(config, axes, jobs=args.jobs, progress=_progress)
    with open(args.out, "w", newline="\n") as f:
        result.to_csv(f)
    print(f"wrote {args.out}: {len(result.cells)} cells "
          f"({' x '.join(str(len(v)) for v in result.axis_values)})")
    return 0


def cmd_classify(args) -> int:
    params = GameParams(R=args.reward, Gamma=args.gamma_cost, phi=args.fine,
                        alpha=args.alpha, d_low=args.d_low, d_high=args.d_high,
                        theta_low=args.theta_low, theta_high=args.theta_high)
    quad = payoff_quad(args.d, params)
    print(f"quad: ({quad.r!r}, {quad.s!r}, {quad.t!r}, {quad.p!r})")
    try:
        result = classify_game(quad)
    except AmbiguousGame as exc:
        print(f"ambiguous: exact ties {sorted(exc.ties)}")
        return 0
    rp, d1, d2, d3 = result.conditions
    print(f"label: {result.label.name.lower()}")
    print(f"conditions: R>P={rp} D1(T>R)={d1} D2(P>S)={d2} D3(T>S)={d3}")
    return 0


def cmd_ingest(args) -> int:
    sales = ingest.read_declarations(args.sales, ingest.SIDE_SALE)
    purchases = ingest.read_declarations(args.purchases, ingest.SIDE_PURCHASE)
    matched = ingest.merge_declarations(sales, purchases,
                                        drop_exact_matches=args.drop_exact_matches)
    if args.matched_out:
        ingest.write_matched_csv(args.matched_out, matched)
    summary = ingest.calibration_summary(matched, high_quantile=args.high_quantile)
    if args.summary_out:
        with open(args.summary_out, "w", newline="\n") as f:
            ingest.write_summary(f, summary)
    ingest.write_summary(sys.stdout, summary)
    return 0


def cmd_fixtures(args) -> int:
    import os

    os.makedirs(args.out_dir, exist_ok=True)
    sales, purchases = ingest.make_fixture(n_pairs=args.pairs, seed=args.seed)
    sales_path = os.path.join(args.out_dir, "sales.csv")
    purchases_path = os.path.join(args.out_dir, "purchases.csv")
    ingest.write_declarations(sales_path, sales)
    ingest.write_declarations(purchases_path, purchases)
    rng = np.random.default_rng(args.seed)
    tail_seed, noise_seed = rng.integers(2 ** 63, size=2)
    n_tail = args.degree_samples // 4
    tail = powerlaw.sample_powerlaw(3.04, 88, 100000, n_tail, tail_seed)
    noise = np.random.default_rng(noise_seed).integers(1, 88,
                                                       size=args.degree_samples - n_tail)
    degrees = np.concatenate((noise, tail))
    degrees_path = os.path.join(args.out_dir, "degrees.txt")
    with open(degrees_path, "w", newline="\n") as f:
        for v in degrees:
            f.write(f"{int(v)}\n")
    print(f"wrote {sales_path}, {purchases_path}, {degrees_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evotax",
        description="Evolutionary tax-compliance game: simulate, sweep, and calibrate.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a weighted network edge list")
    p.add_argument("--topology", default="ba:2")
    p.add_argument("--z", type=int, default=sim.DESK_Z)
    p.add_argument("--seed", type=int)
    p.add_argument("--prob-high", type=float, default=0.02)
    p.add_argument("--d-low", type=float, default=10.0)
    p.add_argument("--d-high", type=float, default=457.59)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="fit a power law to degree samples")
    p.add_argument("samples", help="text file, one positive integer per line")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="run a Monte Carlo simulation")
    _add_sim_flags(p)
    p.add_argument("--out", help="trajectory CSV (step,coop_freq for runs=1, "
                                 "step,mean_coop,min_coop,max_coop otherwise)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="full-grid Monte Carlo over 1-2 parameter axes")
    _add_sim_flags(p)
    p.add_argument("--axes", required=True,
                   help="name:lo..hi:n or name:v1|v2|..., two axes comma-separated")
    p.add_argument("--jobs", type=int, default=1, help="parallel cell workers")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="classify the 2x2 game at a given tax debt")
    p.add_argument("--d", type=float, required=True, help="tax debt of the pair")
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--theta-low", type=float, default=0.5)
    p.add_argument("--theta-high", type=float, default=0.5)
    p.add_argument("--gamma-cost", type=float, default=1.0)
    p.add_argument("--fine", type=float, default=1.5)
    p.add_argument("--reward", type=float, default=1.0)
    p.add_argument("--d-low", type=float, default=10.0)
    p.add_argument("--d-high", type=float, default=457.59)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ingest", help="merge declaration files and calibrate")
    p.add_argument("--sales", required=True)
    p.add_argument("--purchases", required=True)
    p.add_argument("--drop-exact-matches", action="store_true")
    p.add_argument("--high-quantile", type=float, default=0.98)
    p.add_argument("--matched-out")
    p.add_argument("--summary-out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fixtures", help="write synthetic declaration and degree files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--pairs", type=int, default=5000)
    p.add_argument("--degree-samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EvotaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
