"""Monte Carlo harness: run protocol, parameter sweeps, and the named
experiment drivers.

Seeding: run r of any cell uses ``SeedSequence([master_seed, r])``, from which
four child sequences drive topology, weights, initialization, and dynamics.
Seeds depend only on (master_seed, run index), never on draw order or
scheduling, so sweep cells may execute in any order or in parallel with
results identical to the serial order, and different cells share common
random numbers (paired comparisons).  A fresh network is built for every run.
"""

from __future__ import annotations

import dataclasses
import io
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .dynamics import PopulationState, make_state, step, step_well_mixed
from .errors import ConfigError, InvalidParams, UnknownAxis
from .game import GameParams
from .network import (RewireMode, WeightedNetwork, assign_weights, generate_ba,
                      generate_powerlaw_config, read_edge_list, rewire_xbs)

DEFAULT_MASTER_SEED = 20220914

DESK_Z = 1000
DESK_RUNS = 10
FULL_Z = 10000
FULL_RUNS = 50


@dataclass(frozen=True)
class Topology:
    """Population structure descriptor.

    kinds: well_mixed | ba | xbs | powerlaw | file.  The default simulation
    topology is the data-calibrated surrogate: a configuration-model graph
    with a truncated power-law degree distribution (gamma=3.04 from k_min=1).
    """

    kind: str = "powerlaw"
    m: int = 2
    p: float = 1.0
    mode: str = "assortative"
    gamma: float = 3.04
    k_min: int = 1
    k_max: int = 100
    path: str | None = None
    n_partners: int = 4

    def __post_init__(self):
        if self.kind not in ("well_mixed", "ba", "xbs", "powerlaw", "file"):
            raise InvalidParams(f"unknown topology kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise InvalidParams("file topology needs a path")

    def spec_string(self) -> str:
        if self.kind == "well_mixed":
            return f"well_mixed:{self.n_partners}"
        if self.kind == "ba":
            return f"ba:{self.m}"
        if self.kind == "xbs":
            return f"xbs:{self.m}:{self.p}:{self.mode}"
        if self.kind == "powerlaw":
            return f"powerlaw:{self.gamma}:{self.k_min}:{self.k_max}"
        return f"file:{self.path}"


def parse_topology(spec: str) -> Topology:
    """Parse colon-separated topology specs, e.g. "ba:2", "well_mixed",
    "xbs:2:1.0:assortative", "powerlaw:3.04:1:100", "file:edges.csv"."""
    parts = str(spec).strip().split(":")
    kind = parts[0].lower()
    rest = parts[1:]
    try:
        if kind == "well_mixed":
            return Topology(kind=kind, n_partners=int(rest[0]) if rest else 4)
        if kind == "ba":
            return Topology(kind=kind, m=int(rest[0]) if rest else 2)
        if kind == "xbs":
            return Topology(kind=kind,
                            m=int(rest[0]) if len(rest) > 0 else 2,
                            p=float(rest[1]) if len(rest) > 1 else 1.0,
                            mode=rest[2].lower() if len(rest) > 2 else "assortative")
        if kind == "powerlaw":
            return Topology(kind=kind,
                            gamma=float(rest[0]) if len(rest) > 0 else 3.04,
                            k_min=int(rest[1]) if len(rest) > 1 else 1,
                            k_max=int(rest[2]) if len(rest) > 2 else 100)
        if kind == "file":
            return Topology(kind=kind, path=":".join(rest))
    except (ValueError, IndexError) as exc:
        raise InvalidParams(f"bad topology spec {spec!r}: {exc}") from None
    raise InvalidParams(f"unknown topology kind {kind!r}")


@dataclass(frozen=True)
class SimConfig:
    params: GameParams = field(default_factory=GameParams)
    topology: Topology = field(default_factory=Topology)
    Z: int = DESK_Z
    steps: int = 1000
    runs: int = DESK_RUNS
    init_coop_freq: float = 0.5
    measure_fraction: float = 0.25
    diversity_sigma: float = 0.0
    master_seed: int = DEFAULT_MASTER_SEED

    def __post_init__(self):
        if self.Z < 2:
            raise InvalidParams("Z must be >= 2")
        if self.steps < 1:
            raise InvalidParams("steps must be >= 1")
        if self.runs < 1:
            raise InvalidParams("runs must be >= 1")
        if not (0.0 < self.measure_fraction <= 1.0):
            raise InvalidParams("measure_fraction must lie in (0, 1]")
        if not (0.0 <= self.init_coop_freq <= 1.0):
            raise InvalidParams("init_coop_freq must lie in [0, 1]")
        if self.diversity_sigma < 0.0:
            raise InvalidParams("diversity_sigma must be >= 0")
        if self.topology.kind == "well_mixed" and self.topology.n_partners >= self.Z:
            raise InvalidParams("n_partners must be < Z")

    def replace(self, **kw) -> "SimConfig":
        return dataclasses.replace(self, **kw)


@dataclass
class RunResult:
    trajectory: np.ndarray  # cooperator frequency, length steps+1 (index 0 = initial)
    summary: float          # mean over the final measure_fraction of steps


@dataclass
class SummaryStats:
    mean_coop: float
    min_coop: float
    max_coop: float
    per_run: tuple[float, ...]


def build_network(config: SimConfig, net_seed, weight_seed) -> WeightedNetwork:
    topo = config.topology
    if topo.kind == "well_mixed":
        raise InvalidParams("well-mixed populations have no network")
    if topo.kind == "ba":
        net = generate_ba(config.Z, topo.m, net_seed)
    elif topo.kind == "xbs":
        rng = np.random.default_rng(net_seed)
        base_seed, rewire_seed = rng.integers(2 ** 63, size=2)
        base = generate_ba(config.Z, topo.m, base_seed)
        net = rewire_xbs(base, topo.p, RewireMode(topo.mode),
                         attempts=10 * base.edge_count, seed=rewire_seed)
    elif topo.kind == "powerlaw":
        k_max = min(topo.k_max, config.Z - 1)
        net = generate_powerlaw_config(config.Z, topo.gamma, topo.k_min, k_max, net_seed)
    elif topo.kind == "file":
        net = read_edge_list(topo.path)
        if net.Z != config.Z:
            raise InvalidParams(
                f"edge file has {net.Z} nodes but config.Z={config.Z}")
    else:  # pragma: no cover
        raise InvalidParams(f"unknown topology {topo.kind!r}")
    if topo.kind != "file" or net.weights is None:
        net = assign_weights(net, config.params.prob_high, config.params.d_low,
                             config.params.d_high, weight_seed)
    return net


def measure_window(steps: int, measure_fraction: float) -> int:
    return max(1, int(round(measure_fraction * steps)))


def run_once(config: SimConfig, run_seed) -> RunResult:
    """One realization: fresh topology, fresh weights, fresh initial strategies,
    then `steps` synchronous updates."""
    ss = run_seed if isinstance(run_seed, np.random.SeedSequence) \
        else np.random.SeedSequence(run_seed)
    net_ss, weight_ss, init_ss, dyn_ss = ss.spawn(4)
    well_mixed = config.topology.kind == "well_mixed"
    net = None if well_mixed else build_network(config, net_ss, weight_ss)
    state = make_state(config.Z, config.init_coop_freq, config.params,
                       sigma=config.diversity_sigma,
                       rng=np.random.default_rng(init_ss))
    rng = np.random.default_rng(dyn_ss)
    traj = np.empty(config.steps + 1, dtype=np.float64)
    traj[0] = state.coop_frequency()
    for t in range(1, config.steps + 1):
        if well_mixed:
            state = step_well_mixed(state, config.params, rng,
                                    n_partners=config.topology.n_partners)
        else:
            state = step(state, net, config.params, rng)
        traj[t] = state.coop_frequency()
    k = measure_window(config.steps, config.measure_fraction)
    return RunResult(trajectory=traj, summary=float(traj[-k:].mean()))


def run_seed_for(master_seed: int, run_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, run_index])


def monte_carlo(config: SimConfig, return_trajectories: bool = False):
    """`runs` independent realizations with seeds derived from master_seed."""
    results = [run_once(config, run_seed_for(config.master_seed, r))
               for r in range(config.runs)]
    per_run = tuple(r.summary for r in results)
    stats = SummaryStats(mean_coop=float(np.mean(per_run)),
                         min_coop=float(np.min(per_run)),
                         max_coop=float(np.max(per_run)),
                         per_run=per_run)
    if return_trajectories:
        return stats, [r.trajectory for r in results]
    return stats


_GAME_FIELDS = {f.name for f in dataclasses.fields(GameParams)}
_SIM_FIELDS = {"Z", "steps", "runs", "init_coop_freq", "measure_fraction",
               "diversity_sigma", "master_seed"}


def with_axis_value(config: SimConfig, name: str, value) -> SimConfig:
    """Return a config with one named parameter replaced; raises UnknownAxis."""
    if name == "sigma":
        name = "diversity_sigma"
    if name in _GAME_FIELDS:
        if name in ("R", "Gamma", "phi", "alpha", "d_low", "d_high", "prob_high",
                    "theta_low", "theta_high", "beta", "mu"):
            value = float(value)
        return config.replace(params=config.params.replace(**{name: value}))
    if name in _SIM_FIELDS:
        caster = int if name in ("Z", "steps", "runs", "master_seed") else float
        return config.replace(**{name: caster(value)})
    if name == "topology":
        topo = value if isinstance(value, Topology) else parse_topology(value)
        return config.replace(topology=topo)
    if name == "n_partners":
        return config.replace(topology=dataclasses.replace(config.topology,
                                                           n_partners=int(value)))
    raise UnknownAxis(f"unknown sweep axis {name!r}")


@dataclass
class SweepResult:
    """Full-grid Monte Carlo summaries, cells in row-major axis order."""

    axis_names: tuple[str, ...]
    axis_values: tuple[tuple, ...]
    cells: tuple[SummaryStats, ...]
    runs: int

    def __post_init__(self):
        want = 1
        for vals in self.axis_values:
            want *= len(vals)
        if len(self.cells) != want:
            raise InvalidParams(f"expected {want} cells, got {len(self.cells)}")

    def cell(self, *coords) -> SummaryStats:
        idx = 0
        for axis, value in enumerate(coords):
            vals = self.axis_values[axis]
            pos = vals.index(value)
            idx = idx * len(vals) + pos
        return self.cells[idx]

    def to_csv(self, f) -> None:
        """Header axis1[,axis2],mean_coop,min_coop,max_coop,runs."""
        n_axes = len(self.axis_names)
        axis_cols = ",".join(f"axis{i + 1}" for i in range(n_axes))
        f.write(f"{axis_cols},mean_coop,min_coop,max_coop,runs\n")
        grids = [self.axis_values[i] for i in range(n_axes)]
        for idx, stats in enumerate(self.cells):
            coords = []
            rem = idx
            for vals in reversed(grids):
                rem, pos = divmod(rem, len(vals))
                coords.append(vals[pos])
            coords.reverse()
            cells = [_fmt(c) for c in coords]
            f.write(",".join(cells + [repr(stats.mean_coop), repr(stats.min_coop),
                                      repr(stats.max_coop), str(self.runs)]) + "\n")

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _cell_job(args):
    config, names, values = args
    for name, value in zip(names, values):
        config = with_axis_value(config, name, value)
    return monte_carlo(config)


def sweep(config: SimConfig, axes, jobs: int = 1, progress=None) -> SweepResult:
    """Full-grid Monte Carlo over one or two named parameter axes.

    Cell seeds derive only from (master_seed, run index), so serial and
    parallel execution produce identical results.
    """
    axes = list(axes)
    if not (1 <= len(axes) <= 2):
        raise InvalidParams("sweep takes one or two axes")
    names = tuple(name for name, _ in axes)
    grids = tuple(tuple(values) for _, values in axes)
    for name, vals in zip(names, grids):
        if not vals:
            raise InvalidParams(f"axis {name!r} has no values")
        with_axis_value(config, name, vals[0])  # validate the axis name early
    coords = [()]
    for vals in grids:
        coords = [c + (v,) for c in coords for v in vals]
    tasks = [(config, names, c) for c in coords]
    if jobs > 1 and len(tasks) > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            cells = list(pool.map(_cell_job, tasks))
    else:
        cells = []
        for i, task in enumerate(tasks):
            cells.append(_cell_job(task))
            if progress:
                progress(i + 1, len(tasks))
    return SweepResult(axis_names=names, axis_values=grids,
                       cells=tuple(cells), runs=config.runs)


def diversity_experiment(config: SimConfig, sigma_list, alphas=None,
                         jobs: int = 1, progress=None) -> SweepResult:
    """Anchor-diversity experiment: grid over sigma and game difficulty."""
    if any(s < 0 for s in sigma_list):
        raise InvalidParams("sigma values must be >= 0")
    if alphas is None:
        alphas = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
    return sweep(config, [("diversity_sigma", tuple(sigma_list)),
                          ("alpha", tuple(alphas))], jobs=jobs, progress=progress)


DEFAULT_SCENARIOS = ((0.8, 0.2), (0.5, 0.5), (0.2, 0.8))


def policy_experiment(config: SimConfig, rewards, fines, scenarios=None,
                      alphas=None, jobs: int = 1, progress=None) -> dict:
    """Reward-vs-fine comparison per audit-probability scenario.

    Returns {scenario: {"reward": SweepResult over (R, alpha) at the base fine,
    "fine": SweepResult over (phi, alpha) at the base reward}}.
    """
    if scenarios is None:
        scenarios = DEFAULT_SCENARIOS
    if alphas is None:
        alphas = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
    out = {}
    for theta_low, theta_high in scenarios:
        scenario_cfg = config.replace(params=config.params.replace(
            theta_low=theta_low, theta_high=theta_high))
        out[(theta_low, theta_high)] = {
            "reward": sweep(scenario_cfg, [("R", tuple(rewards)),
                                           ("alpha", tuple(alphas))],
                            jobs=jobs, progress=progress),
            "fine": sweep(scenario_cfg, [("phi", tuple(fines)),
                                         ("alpha", tuple(alphas))],
                          jobs=jobs, progress=progress),
        }
    return out


def write_policy_csv(f, result_for_scenario: dict) -> None:
    """Per-scenario CSV: family,param_value,alpha,mean_coop,min_coop,max_coop,runs."""
    f.write("family,param_value,alpha,mean_coop,min_coop,max_coop,runs\n")
    for family in ("reward", "fine"):
        res = result_for_scenario[family]
        params_axis, alpha_axis = res.axis_values
        for i, pv in enumerate(params_axis):
            for j, a in enumerate(alpha_axis):
                stats = res.cells[i * len(alpha_axis) + j]
                f.write(f"{family},{_fmt(pv)},{_fmt(a)},{stats.mean_coop!r},"
                        f"{stats.min_coop!r},{stats.max_coop!r},{res.runs}\n")


def write_trajectory_stats(f, trajectories) -> None:
    """Aggregate trajectory CSV: step,mean_coop,min_coop,max_coop."""
    arr = np.vstack(trajectories)
    f.write("step,mean_coop,min_coop,max_coop\n")
    for t in range(arr.shape[1]):
        col = arr[:, t]
        f.write(f"{t},{float(col.mean())!r},{float(col.min())!r},{float(col.max())!r}\n")


_CONFIG_KEYS = sorted(_GAME_FIELDS | _SIM_FIELDS | {"topology", "n_partners"})


def load_config(path) -> SimConfig:
    """Flat TOML config mirroring SimConfig/GameParams fields.

    Unknown keys and nested tables are errors.
    """
    with open(path, "rb") as f:
        try:
            data = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    config = SimConfig()
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"{path}: nested tables are not allowed ({key!r})")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}: unknown key {key!r} "
                              f"(known: {', '.join(_CONFIG_KEYS)})")
        try:
            config = with_axis_value(config, key, value)
        except (InvalidParams, UnknownAxis) as exc:
            raise ConfigError(f"{path}: bad value for {key!r}: {exc}") from None
    return config
