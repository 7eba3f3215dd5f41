"""Hot inner loops: fitness accumulation, imitation, and graph traversals.

Every kernel is JIT-compiled with numba when available.  Setting the
environment variable ``EVOTAX_NO_NUMBA=1`` (or uninstalling numba) selects the
pure-Python fallback: the identical source runs undecorated, so both paths
produce bitwise-identical results, just at very different speeds (see
``benchmarks/bench_kernels.py``).

All randomness is consumed from pre-drawn uniform arrays indexed by agent id,
never from a shared stream inside the loops.  Decisions therefore depend only
on the pre-step snapshot and each agent's own draws, which makes a step
invariant under agent iteration order and safe to parallelize.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("EVOTAX_NO_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


def _load_njit():
    if _numba_requested():
        try:
            from numba import njit

            return njit, True
        except ImportError:
            pass

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

    return njit, False


njit, NUMBA_ENABLED = _load_njit()


@njit(cache=True)
def _clamp01(v):
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


@njit(cache=True)
def _pair_payoff(si, sj, d, slope_i, inter_i, R, Gamma, phi, alpha):
    """Focal payoff for one interaction, priced by the focal agent's own
    audit-probability line."""
    ad = alpha * d
    if si == 0:
        if sj == 0:
            return R
        return R - _clamp01(slope_i * ad + inter_i) * Gamma
    penalty = Gamma + phi * ad
    if sj == 0:
        return ad - _clamp01(slope_i * ad + inter_i) * penalty
    return ad - _clamp01(slope_i * 2.0 * ad + inter_i) * penalty


@njit(cache=True)
def fitness_network(strategies, indptr, indices, eweight, slope, inter,
                    R, Gamma, phi, alpha, out):
    """Degree-averaged payoff of every agent against its network neighbors.

    Isolated agents get fitness 0.
    """
    n = strategies.shape[0]
    for i in range(n):
        lo = indptr[i]
        hi = indptr[i + 1]
        k = hi - lo
        if k == 0:
            out[i] = 0.0
            continue
        acc = 0.0
        si = strategies[i]
        for e in range(lo, hi):
            acc += _pair_payoff(si, strategies[indices[e]], eweight[e],
                                slope[i], inter[i], R, Gamma, phi, alpha)
        out[i] = acc / k
    return out


@njit(cache=True)
def _fermi(fi, fj, beta):
    # 1/(1+exp(-z)). The z<0 branch returns the exact complement of the z>0
    # branch (1-p is exact for p in [0.5, 1]), so swapping arguments always
    # sums to exactly 1; both branches saturate without overflow.
    z = beta * (fj - fi)
    if z >= 0.0:
        return 1.0 / (1.0 + np.exp(-z))
    return 1.0 - 1.0 / (1.0 + np.exp(z))


@njit(cache=True)
def imitate_network(strategies, fitness, indptr, indices, beta, mu,
                    u_pick, u_imit, u_mut, u_mutstrat, out):
    """Synchronous Fermi imitation against one uniformly random neighbor,
    followed by uniform mutation.  Reads only the pre-step snapshot."""
    n = strategies.shape[0]
    for i in range(n):
        s = strategies[i]
        lo = indptr[i]
        k = indptr[i + 1] - lo
        if k > 0:
            e = lo + int(u_pick[i] * k)
            if e >= indptr[i + 1]:
                e = indptr[i + 1] - 1
            j = indices[e]
            if u_imit[i] < _fermi(fitness[i], fitness[j], beta):
                s = strategies[j]
        if u_mut[i] < mu:
            s = 0 if u_mutstrat[i] < 0.5 else 1
        out[i] = s
    return out


@njit(cache=True)
def fitness_well_mixed(strategies, u_partner, u_weight, prob_high,
                       d_low, d_high, slope, inter, R, Gamma, phi, alpha, out):
    """Average payoff against n_partners distinct random agents.

    Partners are drawn by Floyd's subset sampling over the population minus
    the focal agent (exactly one uniform per partner slot); each interaction
    carries an independently drawn tax debt.
    """
    n = strategies.shape[0]
    n_partners = u_partner.shape[1]
    m = n - 1
    chosen = np.empty(n_partners, np.int64)
    for i in range(n):
        acc = 0.0
        si = strategies[i]
        for t in range(n_partners):
            size = m - n_partners + t + 1
            v = int(u_partner[i, t] * size)
            if v >= size:
                v = size - 1
            for q in range(t):
                if chosen[q] == v:
                    v = size - 1
                    break
            chosen[t] = v
            j = v + 1 if v >= i else v
            d = d_high if u_weight[i, t] < prob_high else d_low
            acc += _pair_payoff(si, strategies[j], d, slope[i], inter[i],
                                R, Gamma, phi, alpha)
        out[i] = acc / n_partners
    return out


@njit(cache=True)
def imitate_well_mixed(strategies, fitness, beta, mu,
                       u_pick, u_imit, u_mut, u_mutstrat, out):
    """Fermi imitation against one uniformly random other agent."""
    n = strategies.shape[0]
    for i in range(n):
        s = strategies[i]
        v = int(u_pick[i] * (n - 1))
        if v >= n - 1:
            v = n - 2
        j = v + 1 if v >= i else v
        if u_imit[i] < _fermi(fitness[i], fitness[j], beta):
            s = strategies[j]
        if u_mut[i] < mu:
            s = 0 if u_mutstrat[i] < 0.5 else 1
        out[i] = s
    return out


@njit(cache=True)
def bfs_eccentricity(indptr, indices, source, dist, queue):
    """Largest BFS distance from ``source`` among reachable nodes.

    ``dist`` and ``queue`` are scratch int32 arrays of length n.
    """
    n = indptr.shape[0] - 1
    for i in range(n):
        dist[i] = -1
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    ecc = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if du > ecc:
            ecc = du
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
    return ecc


@njit(cache=True)
def component_labels(indptr, indices, labels):
    """Label connected components; returns the number of components."""
    n = indptr.shape[0] - 1
    for i in range(n):
        labels[i] = -1
    queue = np.empty(n, np.int32)
    comp = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = comp
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if labels[v] < 0:
                    labels[v] = comp
                    queue[tail] = v
                    tail += 1
        comp += 1
    return comp


@njit(cache=True)
def diameter_of_component(indptr, indices, members):
    """Exact diameter via BFS from every member of one component."""
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    best = 0
    for idx in range(members.shape[0]):
        ecc = bfs_eccentricity(indptr, indices, members[idx], dist, queue)
        if ecc > best:
            best = ecc
    return best


@njit(cache=True)
def local_clustering_sum(indptr, indices_sorted):
    """Sum over nodes of the local clustering coefficient.

    Neighbor lists must be sorted so edge lookups can binary-search.
    Nodes of degree < 2 contribute 0.
    """
    n = indptr.shape[0] - 1
    total = 0.0
    for i in range(n):
        lo = indptr[i]
        hi = indptr[i + 1]
        k = hi - lo
        if k < 2:
            continue
        links = 0
        for a in range(lo, hi):
            u = indices_sorted[a]
            for b in range(a + 1, hi):
                v = indices_sorted[b]
                # binary search for v in u's sorted neighbor list
                s = indptr[u]
                e = indptr[u + 1]
                while s < e:
                    mid = (s + e) // 2
                    w = indices_sorted[mid]
                    if w == v:
                        links += 1
                        break
                    elif w < v:
                        s = mid + 1
                    else:
                        e = mid
        total += 2.0 * links / (k * (k - 1))
    return total
