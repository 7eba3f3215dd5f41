"""Population graphs: generation, rewiring, edge weighting, and measurement.

Graphs are undirected and simple; every edge carries a tax-debt weight in
{d_low, d_high} once weights are assigned.  Generators are deterministic for a
given seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .errors import EmptyGraph, InvalidParams, ParseError


class RewireMode(Enum):
    ASSORTATIVE = "assortative"
    DISASSORTATIVE = "disassortative"


@dataclass
class WeightedNetwork:
    """Simple undirected graph with optional per-edge weights.

    ``edges`` is an (E, 2) int64 array with rows (u, v), u < v, sorted
    lexicographically; ``weights`` aligns with ``edges`` or is None for a
    not-yet-weighted topology.
    """

    Z: int
    edges: np.ndarray
    weights: np.ndarray | None = None
    _csr: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.Z:
                raise InvalidParams("edge endpoint out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise InvalidParams("self-loops are not allowed")
            u = np.minimum(edges[:, 0], edges[:, 1])
            v = np.maximum(edges[:, 0], edges[:, 1])
            order = np.lexsort((v, u))
            edges = np.column_stack((u[order], v[order]))
            if len(edges) > 1:
                dup = (np.diff(edges[:, 0]) == 0) & (np.diff(edges[:, 1]) == 0)
                if dup.any():
                    raise InvalidParams("multi-edges are not allowed")
            if self.weights is not None:
                self.weights = np.asarray(self.weights, dtype=np.float64)[order]
        self.edges = edges
        if self.weights is not None and len(self.weights) != len(edges):
            raise InvalidParams("weights must align with edges")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.Z).astype(np.int64)

    def csr(self):
        """(indptr, indices, half_edge_weights); neighbor lists sorted by id."""
        if self._csr is None:
            e = self.edges
            src = np.concatenate((e[:, 0], e[:, 1]))
            dst = np.concatenate((e[:, 1], e[:, 0]))
            if self.weights is not None:
                w2 = np.concatenate((self.weights, self.weights))
            else:
                w2 = np.ones(2 * len(e), dtype=np.float64)
            order = np.lexsort((dst, src))
            indices = dst[order].astype(np.int64)
            eweight = w2[order]
            counts = np.bincount(src, minlength=self.Z)
            indptr = np.zeros(self.Z + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._csr = (indptr, indices, eweight)
        return self._csr

    def replace_weights(self, weights: np.ndarray) -> "WeightedNetwork":
        return WeightedNetwork(self.Z, self.edges.copy(), np.asarray(weights, dtype=np.float64))


@dataclass(frozen=True)
class NetworkMetrics:
    average_degree: float
    clustering: float
    diameter: int
    assortativity: float


def _ba_attachment_counts(Z: int, m: int) -> np.ndarray:
    """Edges attached by each node added after the seed clique.

    Counts alternate between ceil((m+1)/2) and floor((m+1)/2) so the mean
    degree converges to m+1, matching the generator this model family was
    calibrated against.
    """
    n_add = Z - (m + 1)
    if (m + 1) % 2 == 0:
        return np.full(n_add, (m + 1) // 2, dtype=np.int64)
    counts = np.full(n_add, m // 2, dtype=np.int64)
    counts[::2] += 1
    return counts


def ba_edge_count(Z: int, m: int) -> int:
    """Exact number of edges generate_ba(Z, m, ...) produces."""
    if Z <= m or m < 1:
        raise InvalidParams(f"need Z > m >= 1, got Z={Z}, m={m}")
    return m * (m + 1) // 2 + int(_ba_attachment_counts(Z, m).sum())


def generate_ba(Z: int, m: int, seed) -> WeightedNetwork:
    """Preferential-attachment scale-free graph with mean degree ~ m+1.

    Starts from a complete graph on m+1 nodes; each subsequent node attaches
    to distinct existing nodes chosen with probability proportional to their
    current degree.  Unweighted until assign_weights is applied.
    """
    if m < 1 or Z <= m:
        raise InvalidParams(f"need Z > m >= 1, got Z={Z}, m={m}")
    rng = np.random.default_rng(seed)
    edges_u = []
    edges_v = []
    # complete seed clique
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            edges_u.append(i)
            edges_v.append(j)
    # degree-proportional sampling via the repeated-endpoints list
    repeated = []
    for i in range(m + 1):
        repeated.extend([i] * m)
    counts = _ba_attachment_counts(Z, m)
    for idx, n_attach in enumerate(counts):
        node = m + 1 + idx
        targets = set()
        while len(targets) < n_attach:
            targets.add(repeated[rng.integers(len(repeated))])
        for t in sorted(targets):
            edges_u.append(t)
            edges_v.append(node)
            repeated.append(t)
        repeated.extend([node] * n_attach)
    edges = np.column_stack((np.asarray(edges_u, dtype=np.int64),
                             np.asarray(edges_v, dtype=np.int64)))
    return WeightedNetwork(Z, edges)


def rewire_xbs(net: WeightedNetwork, p: float, mode: RewireMode,
               attempts: int, seed) -> WeightedNetwork:
    """Degree-preserving two-edge rewiring that tunes assortativity.

    Each attempt draws two edges with four distinct endpoints.  With
    probability ``p`` the endpoints, ordered by degree, are re-linked
    according to ``mode`` (assortative: top pair together and bottom pair
    together; disassortative: extremes together and middle pair together);
    otherwise one of the three perfect matchings of the four nodes is chosen
    uniformly.  Attempts that would duplicate an existing edge are discarded.

    Returns an unweighted topology: rewiring invalidates the edge-to-weight
    map, so weights must be assigned afterwards.
    """
    if not (0.0 <= p <= 1.0):
        raise InvalidParams(f"p={p} must lie in [0, 1]")
    if attempts < 0:
        raise InvalidParams("attempts must be >= 0")
    if isinstance(mode, str):
        mode = RewireMode(mode.lower())
    rng = np.random.default_rng(seed)
    n_edges = net.edge_count
    if n_edges < 2 or attempts == 0:
        return WeightedNetwork(net.Z, net.edges.copy())
    deg = net.degrees()
    edge_u = net.edges[:, 0].tolist()
    edge_v = net.edges[:, 1].tolist()
    present = set(zip(edge_u, edge_v))

    def key(n):
        return (deg[n], n)

    for _ in range(attempts):
        e1 = int(rng.integers(n_edges))
        e2 = int(rng.integers(n_edges))
        if e1 == e2:
            continue
        a, b = edge_u[e1], edge_v[e1]
        c, d = edge_u[e2], edge_v[e2]
        if len({a, b, c, d}) < 4:
            continue
        nodes = sorted((a, b, c, d), key=key, reverse=True)
        if rng.random() < p:
            if mode is RewireMode.ASSORTATIVE:
                pairs = ((nodes[0], nodes[1]), (nodes[2], nodes[3]))
            else:
                pairs = ((nodes[0], nodes[3]), (nodes[1], nodes[2]))
        else:
            w, x, y, z = a, b, c, d
            matchings = (((w, x), (y, z)), ((w, y), (x, z)), ((w, z), (x, y)))
            pairs = matchings[rng.integers(3)]
        new = tuple((min(s, t), max(s, t)) for s, t in pairs)
        old = ((min(a, b), max(a, b)), (min(c, d), max(c, d)))
        if set(new) == set(old):
            continue
        if any((pair in present and pair not in old) for pair in new):
            continue
        present.discard(old[0])
        present.discard(old[1])
        present.add(new[0])
        present.add(new[1])
        edge_u[e1], edge_v[e1] = new[0]
        edge_u[e2], edge_v[e2] = new[1]

    edges = np.column_stack((np.asarray(edge_u, dtype=np.int64),
                             np.asarray(edge_v, dtype=np.int64)))
    return WeightedNetwork(net.Z, edges)


def generate_powerlaw_config(Z: int, gamma: float, k_min: int, k_max: int,
                             seed) -> WeightedNetwork:
    """Configuration-model graph with degrees from a truncated power law.

    Degrees are i.i.d. from p(k) proportional to k^(-gamma) on [k_min, k_max]
    (the last degree is resampled until the total is even); stubs are matched
    uniformly; self-loops and duplicate edges are then removed, which distorts
    the degree sequence by O(<k^2>/Z).
    """
    from .powerlaw import sample_powerlaw

    if gamma <= 2.0:
        raise InvalidParams(f"gamma={gamma} must be > 2 for a usable mean degree")
    if not (1 <= k_min <= k_max <= Z - 1):
        raise InvalidParams(f"need 1 <= k_min <= k_max <= Z-1, got [{k_min}, {k_max}]")
    if k_min == k_max and (Z * k_min) % 2 == 1:
        raise InvalidParams("forced degree sequence has odd total stub count")
    rng = np.random.default_rng(seed)
    deg_seed, match_seed = rng.integers(2 ** 63, size=2)
    degrees = sample_powerlaw(gamma, k_min, k_max, Z, deg_seed).astype(np.int64)
    resample_rng = np.random.default_rng(match_seed)
    while degrees.sum() % 2 == 1:
        degrees[-1] = sample_powerlaw(gamma, k_min, k_max, 1,
                                      resample_rng.integers(2 ** 63))[0]
    stubs = np.repeat(np.arange(Z, dtype=np.int64), degrees)
    perm = resample_rng.permutation(len(stubs))
    stubs = stubs[perm]
    u = stubs[0::2]
    v = stubs[1::2]
    keep = u != v
    u, v = u[keep], v[keep]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    edges = np.unique(np.column_stack((lo, hi)), axis=0)
    return WeightedNetwork(Z, edges)


def assign_weights(net: WeightedNetwork, prob_high: float, d_low: float,
                   d_high: float, seed) -> WeightedNetwork:
    """Independently mark each edge high-volume with probability prob_high.

    Weights are static for the lifetime of a run.
    """
    if not (0.0 <= prob_high <= 1.0):
        raise InvalidParams(f"prob_high={prob_high} must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    w = np.where(rng.random(net.edge_count) < prob_high, d_high, d_low)
    return net.replace_weights(w)


def degree_assortativity(net: WeightedNetwork) -> float:
    """Pearson correlation of endpoint degrees over all half-edges.

    NaN for degree-regular graphs (zero variance).
    """
    if net.edge_count == 0:
        raise EmptyGraph("assortativity needs at least one edge")
    deg = net.degrees().astype(np.float64)
    du = deg[net.edges[:, 0]]
    dv = deg[net.edges[:, 1]]
    x = np.concatenate((du, dv))
    y = np.concatenate((dv, du))
    sx = x.std()
    if sx == 0.0:
        return float("nan")
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * y.std()))


def metrics(net: WeightedNetwork) -> NetworkMetrics:
    """Average degree (exact), mean local clustering, exact diameter of the
    largest connected component, and degree assortativity."""
    if net.Z < 1:
        raise InvalidParams("Z must be >= 1")
    if net.edge_count == 0:
        raise EmptyGraph("metrics need at least one edge")
    indptr, indices, _ = net.csr()
    avg_degree = 2.0 * net.edge_count / net.Z
    clustering = float(_kernels.local_clustering_sum(indptr, indices) / net.Z)
    labels = np.empty(net.Z, dtype=np.int32)
    n_comp = _kernels.component_labels(indptr, indices, labels)
    sizes = np.bincount(labels, minlength=n_comp)
    members = np.flatnonzero(labels == sizes.argmax()).astype(np.int32)
    diameter = int(_kernels.diameter_of_component(indptr, indices, members))
    return NetworkMetrics(average_degree=avg_degree, clustering=clustering,
                          diameter=diameter, assortativity=degree_assortativity(net))


EDGE_HEADER = "src,dst,weight"


def write_edge_list(net: WeightedNetwork, path) -> None:
    """CSV edge list: header src,dst,weight, 0-based ids, LF endings."""
    if net.weights is None:
        raise InvalidParams("cannot write an unweighted network")
    with open(path, "w", newline="\n") as f:
        f.write(EDGE_HEADER + "\n")
        for (u, v), w in zip(net.edges, net.weights):
            f.write(f"{u},{v},{float(w)!r}\n")


def read_edge_list(path, Z: int | None = None) -> WeightedNetwork:
    """Inverse of write_edge_list; Z defaults to max node id + 1."""
    us, vs, ws = [], [], []
    with open(path, "r") as f:
        header = f.readline().strip()
        if header != EDGE_HEADER:
            raise ParseError(f"expected header {EDGE_HEADER!r}, got {header!r}", line_no=1)
        for ln, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(f"expected 3 fields, got {len(parts)}", line_no=ln)
            try:
                u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ParseError(str(exc), line_no=ln) from None
            if u < 0 or v < 0:
                raise ParseError("node ids must be >= 0", line_no=ln)
            us.append(u)
            vs.append(v)
            ws.append(w)
    if not us:
        raise ParseError("edge list contains no edges")
    max_id = max(max(us), max(vs))
    if Z is None:
        Z = max_id + 1
    elif Z <= max_id:
        raise InvalidParams(f"Z={Z} smaller than max node id {max_id}")
    edges = np.column_stack((np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)))
    return WeightedNetwork(Z, edges, np.asarray(ws, dtype=np.float64))
