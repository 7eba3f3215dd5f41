"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Everything runs at desk scale (Z=1,000, 10 runs, fixed seeds) with the
default master seed, so every number below is reproducible bit for bit.
Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
"""

import math

import numpy as np
import pytest

from evotax.cli import main as cli_main
from evotax.dynamics import fermi_prob
from evotax.game import GameParams, PayoffQuad, classify_game, payoff_quad
from evotax.errors import AmbiguousGame
from evotax.ingest import calibration_summary, make_fixture, merge_declarations, mismatch_ratio
from evotax.network import (RewireMode, degree_assortativity, generate_ba,
                            rewire_xbs)
from evotax.powerlaw import fit_powerlaw, sample_powerlaw
from evotax.sim import (SimConfig, Topology, monte_carlo, policy_experiment,
                        run_once, run_seed_for, sweep)

DESK = dict(Z=1000, steps=1000, runs=10)
DEFAULT_TOPO = Topology()  # powerlaw surrogate, gamma=3.04, k_min=1
BA2 = Topology(kind="ba", m=2)
WELL_MIXED = Topology(kind="well_mixed")


def report(num, ok, detail):
    print(f"[criterion {num:>2}] {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


# ------------------------------------------------------------------ 1

def _oracle_quad(R, G, phi, alpha, d_low, d_high, tl, th, d):
    """Independent, literal transcription of the payoff table."""
    x1, x2 = 2.0 * alpha * d_low, 2.0 * alpha * d_high
    slope = (th - tl) / (x2 - x1)
    b = tl - slope * x1

    def theta(x):
        return min(1.0, max(0.0, slope * x + b))

    ad = alpha * d
    return (R,
            R - theta(ad) * G,
            ad - theta(ad) * (G + phi * ad),
            ad - theta(2.0 * ad) * (G + phi * ad))


def test_criterion_01_payoff_oracle():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(10000):
        R = rng.uniform(0.0, 2.0)
        G = rng.uniform(0.0, 3.0)
        phi = rng.uniform(0.0, 3.0)
        alpha = rng.uniform(0.01, 1.0)
        d_low = rng.uniform(1.0, 50.0)
        d_high = d_low * rng.uniform(1.001, 50.0)
        tl, th = rng.uniform(0.0, 1.0, size=2)
        d = d_high if rng.random() < 0.5 else d_low
        params = GameParams(R=R, Gamma=G, phi=phi, alpha=alpha, d_low=d_low,
                            d_high=d_high, theta_low=tl, theta_high=th)
        got = payoff_quad(d, params).astuple()
        want = _oracle_quad(R, G, phi, alpha, d_low, d_high, tl, th, d)
        worst = max(worst, max(abs(g - w) for g, w in zip(got, want)))
    report(1, worst <= 1e-12,
           f"payoff_quad vs brute-force table on 10^4 random params, "
           f"max abs err {worst:.2e} (tol 1e-12)")


# ------------------------------------------------------------------ 2

def _bisect(fn, lo, hi, tol=1e-9):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_criterion_02_game_region_anchors():
    theta, phi, R, G = 0.5, 1.5, 1.0, 1.0

    def quad(ad, th_one, th_both):
        pen = G + phi * ad
        return PayoffQuad(r=R, s=R - th_one * G, t=ad - th_one * pen,
                          p=ad - th_both * pen)

    def left_harmony(ad):
        try:
            return classify_game(quad(ad, theta, theta + 1e-9)).label.value != "harmony"
        except AmbiguousGame:
            return True

    exit_point = _bisect(left_harmony, 0.1, 10.0)
    want_exit = R / (1.0 - theta * phi)

    def p_beats_r(ad):
        return quad(ad, 0.4, theta).p > R

    cross = _bisect(p_beats_r, 0.1, 20.0)
    want_cross = (R + theta * G) / (1.0 - theta * phi)

    ok = abs(exit_point - want_exit) < 1e-6 and abs(cross - want_cross) < 1e-6
    report(2, ok, f"harmony exit at {exit_point:.8f} (want {want_exit}), "
                  f"P>R at {cross:.8f} (want {want_cross}), tol 1e-6")


# ------------------------------------------------------------------ 3

def test_criterion_03_fermi_values():
    exact_half = fermi_prob(0.0, 0.0, 0.7) == 0.5
    direct = abs(fermi_prob(0.0, 2.0, 0.5) - 0.731059) <= 1e-6
    rng = np.random.default_rng(303)
    anti = True
    for _ in range(100000):
        a, b = rng.normal(scale=100.0, size=2)
        if fermi_prob(a, b, 0.5) + fermi_prob(b, a, 0.5) != 1.0:
            anti = False
            break
    report(3, exact_half and direct and anti,
           f"fermi(0,0)=0.5 exact: {exact_half}, fermi(0,2,.5)~0.731059: {direct}, "
           f"antisymmetry exact on 10^5 pairs: {anti}")


# ------------------------------------------------------------------ 4

def test_criterion_04_well_mixed_regime():
    coop = {}
    for alpha in (0.1, 0.4):
        cfg = SimConfig(params=GameParams(alpha=alpha), topology=WELL_MIXED, **DESK)
        coop[alpha] = monte_carlo(cfg).mean_coop
    ok = coop[0.1] > 0.9 and coop[0.4] < 0.1
    report(4, ok, f"well-mixed mean_coop(alpha=0.1)={coop[0.1]:.4f} (>0.9), "
                  f"mean_coop(alpha=0.4)={coop[0.4]:.4f} (<0.1)")


# ------------------------------------------------------------------ 5

def test_criterion_05_convergence_and_init_independence():
    base = SimConfig(params=GameParams(alpha=0.3), topology=BA2, **DESK)
    s_full = monte_carlo(base).mean_coop
    s_half = monte_carlo(base.replace(steps=500)).mean_coop
    i_lo = monte_carlo(base.replace(init_coop_freq=0.1)).mean_coop
    i_hi = monte_carlo(base.replace(init_coop_freq=0.9)).mean_coop
    ok = abs(s_full - s_half) < 0.05 and abs(i_lo - i_hi) < 0.05
    report(5, ok, f"|steps500-steps1000|={abs(s_full - s_half):.4f} (<0.05), "
                  f"|init0.1-init0.9|={abs(i_lo - i_hi):.4f} (<0.05)")


# ------------------------------------------------------------------ 6

def test_criterion_06_theta_balance():
    base = SimConfig(params=GameParams(alpha=0.4), topology=DEFAULT_TOPO, **DESK)

    def coop(tl, th, ph):
        cfg = base.replace(params=base.params.replace(
            theta_low=tl, theta_high=th, prob_high=ph))
        return monte_carlo(cfg).mean_coop

    gap_real = coop(0.8, 0.2, 0.02) - coop(0.2, 0.8, 0.02)
    gap_even = abs(coop(0.8, 0.2, 0.5) - coop(0.2, 0.8, 0.5))
    ok = gap_real >= 0.2 and gap_even < 0.1
    report(6, ok, f"prob_high=0.02 gap={gap_real:.4f} (>=0.2), "
                  f"prob_high=0.5 |gap|={gap_even:.4f} (<0.1)")


# ------------------------------------------------------------------ 7

def test_criterion_07_inspection_cost_band():
    base = SimConfig(topology=BA2, **DESK)

    def gap(alpha):
        lo = monte_carlo(base.replace(params=base.params.replace(
            alpha=alpha, Gamma=0.5))).mean_coop
        hi = monte_carlo(base.replace(params=base.params.replace(
            alpha=alpha, Gamma=2.0))).mean_coop
        return abs(hi - lo)

    g_low, g_mid, g_high = gap(0.1), gap(0.4), gap(0.8)
    ok = g_low < 0.05 and g_high < 0.05 and g_mid > 0.1
    report(7, ok, f"|coop(G=2)-coop(G=0.5)|: alpha=0.1 -> {g_low:.4f} (<0.05), "
                  f"alpha=0.4 -> {g_mid:.4f} (>0.1), alpha=0.8 -> {g_high:.4f} (<0.05)")


# ------------------------------------------------------------------ 8

def test_criterion_08_diversity_polarization():
    base = SimConfig(topology=DEFAULT_TOPO, **DESK)

    def coop(alpha, sigma):
        cfg = base.replace(diversity_sigma=sigma,
                           params=base.params.replace(alpha=alpha))
        return monte_carlo(cfg).mean_coop

    hard0, hard4 = coop(0.6, 0.0), coop(0.6, 0.4)
    easy0, easy4 = coop(0.1, 0.0), coop(0.1, 0.4)
    ok = hard4 > hard0 and abs(easy4 - 0.5) < abs(easy0 - 0.5)
    report(8, ok, f"alpha=0.6: coop {hard0:.4f}->{hard4:.4f} (must rise); "
                  f"alpha=0.1: |coop-0.5| {abs(easy0 - 0.5):.4f}->{abs(easy4 - 0.5):.4f} "
                  f"(must shrink)")


# ------------------------------------------------------------------ 9

def test_criterion_09_policy_scenarios():
    base = SimConfig(params=GameParams(alpha=0.3), topology=DEFAULT_TOPO, **DESK)
    out = policy_experiment(base, rewards=(1.0, 1.5, 2.0), fines=(1.0, 1.5, 2.0),
                            alphas=(0.3,))

    def cell(scenario, family, value):
        return out[scenario][family].cell(value, 0.3).mean_coop

    # scenario (0.2, 0.8): reward gain beats fine gain
    d_r = cell((0.2, 0.8), "reward", 2.0) - cell((0.2, 0.8), "reward", 1.0)
    d_f = cell((0.2, 0.8), "fine", 2.0) - cell((0.2, 0.8), "fine", 1.5)
    part1 = d_r > d_f
    # scenario (0.5, 0.5): fine increase dominates
    d_f2 = cell((0.5, 0.5), "fine", 2.0) - cell((0.5, 0.5), "fine", 1.0)
    d_r2 = cell((0.5, 0.5), "reward", 2.0) - cell((0.5, 0.5), "reward", 1.0)
    part2 = d_f2 > d_r2
    # scenario (0.8, 0.2): reward is nearly irrelevant
    r_vals = [cell((0.8, 0.2), "reward", v) for v in (1.0, 1.5, 2.0)]
    variation = max(r_vals) - min(r_vals)
    part3 = variation < 0.05
    ok = part1 and part2 and part3
    report(9, ok,
           f"(0.2,0.8): dR={d_r:+.4f} > dphi={d_f:+.4f}: {part1}; "
           f"(0.5,0.5): dphi={d_f2:+.4f} > dR={d_r2:+.4f}: {part2}; "
           f"(0.8,0.2): R-grid variation {variation:.4f} < 0.05: {part3}")


# ------------------------------------------------------------------ 10

def test_criterion_10_network_generators():
    degs = {}
    for m, want in ((2, 3.01), (4, 5.01), (8, 9.02)):
        net = generate_ba(10000, m, seed=run_seed_for(1000 + m, 0))
        degs[m] = 2.0 * net.edge_count / net.Z
        assert abs(degs[m] - want) <= 0.1, (m, degs[m])
    net = generate_ba(10000, 2, seed=17)
    base_r = degree_assortativity(net)
    up = rewire_xbs(net, 1.0, RewireMode.ASSORTATIVE, 10 * net.edge_count, seed=18)
    down = rewire_xbs(net, 1.0, RewireMode.DISASSORTATIVE, 10 * net.edge_count, seed=18)
    same_degrees = (np.array_equal(np.sort(up.degrees()), np.sort(net.degrees()))
                    and np.array_equal(np.sort(down.degrees()), np.sort(net.degrees())))
    r_up, r_down = degree_assortativity(up), degree_assortativity(down)
    ok = r_up > base_r and r_down < base_r and same_degrees
    report(10, ok,
           f"BA mean degrees m=2/4/8: {degs[2]:.4f}/{degs[4]:.4f}/{degs[8]:.4f} "
           f"(want 3.01/5.01/9.02 +-0.1); assortativity {base_r:+.4f} -> "
           f"up {r_up:+.4f} / down {r_down:+.4f}; degree sequences preserved: {same_degrees}")


# ------------------------------------------------------------------ 11

def test_criterion_11_power_law_recovery():
    rng = np.random.default_rng(1111)
    tail = sample_powerlaw(3.04, 88, 100000, 5000, seed=rng.integers(2 ** 63))
    noise = rng.integers(1, 88, size=5000)
    fit_main = fit_powerlaw(np.concatenate((noise, tail)))
    clean = sample_powerlaw(2.5, 1, 100000, 10000, seed=rng.integers(2 ** 63))
    fit_25 = fit_powerlaw(clean)
    ok = 2.89 <= fit_main.gamma_hat <= 3.19 and abs(fit_25.gamma_hat - 2.5) <= 0.1
    report(11, ok,
           f"gamma_hat={fit_main.gamma_hat:.4f} (want [2.89, 3.19], "
           f"x_min_hat={fit_main.x_min_hat}); gamma=2.5 refit -> {fit_25.gamma_hat:.4f} (+-0.1)")


# ------------------------------------------------------------------ 12

def test_criterion_12_ingestion_identities():
    rng = np.random.default_rng(1212)
    ok_props = True
    for _ in range(100000):
        s, b = rng.uniform(0.0, 1e6, size=2)
        r = mismatch_ratio(s, b)
        if not (0.0 <= r <= 1.0):
            ok_props = False
            break
        c = rng.uniform(0.01, 100.0)
        if abs(mismatch_ratio(c * s, c * b) - r) > 1e-9:
            ok_props = False
            break
    alphas = rng.uniform(0.0, 1.0, size=1000)
    ds = rng.uniform(0.01, 1e6, size=1000)
    ident = max(abs(mismatch_ratio((1 - a) * d, (1 + a) * d) - a)
                for a, d in zip(alphas, ds))
    sales, purchases = make_fixture(n_pairs=5000, seed=7)
    summary = calibration_summary(merge_declarations(sales, purchases))
    fixture_ok = (summary.prob_high == pytest.approx(0.02, abs=1e-12)
                  and abs(summary.ratio_r - 45.759) <= 0.001)
    ok = ok_props and ident <= 1e-9 and fixture_ok
    report(12, ok,
           f"range+scale invariance on 10^5 pairs: {ok_props}; constant-fraud "
           f"identity max err {ident:.2e}; fixture prob_high={summary.prob_high}, "
           f"ratio_r={summary.ratio_r:.6f} (want 45.759 +-0.001)")


# ------------------------------------------------------------------ 13

def test_criterion_13_determinism(tmp_path):
    args = ["sweep", "--axes", "alpha:0.2|0.4,Gamma:0.5|2.0", "--z", "150",
            "--steps", "80", "--runs", "3", "--topology", "ba:2", "--seed", "99"]
    paths = [tmp_path / f"s{i}.csv" for i in range(3)]
    assert cli_main(args + ["--out", str(paths[0])]) == 0
    assert cli_main(args + ["--out", str(paths[1])]) == 0
    assert cli_main(args + ["--jobs", "8", "--out", str(paths[2])]) == 0
    twice = paths[0].read_bytes() == paths[1].read_bytes()
    jobs = paths[0].read_bytes() == paths[2].read_bytes()
    ok = twice and jobs
    report(13, ok, f"repeated sweep byte-identical: {twice}; "
                   f"--jobs 1 vs --jobs 8 identical: {jobs}")
