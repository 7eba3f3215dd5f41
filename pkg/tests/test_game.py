import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evotax.errors import AmbiguousGame, DegenerateAnchors, InvalidParams
from evotax.game import (GameLabel, GameParams, PayoffQuad, Strategy, build_theta,
                         classify_game, payoff, payoff_quad)

BASE = GameParams()  # R=1, Gamma=1, phi=1.5, theta'=0.5 everywhere


# ---------------------------------------------------------------- theta

def test_equal_anchors_give_constant_function():
    th = build_theta(BASE)
    for x in (0.0, 1.0, 10.0, 457.59, 1e6):
        assert th(x) == 0.5


def test_line_through_both_anchor_points():
    p = GameParams(alpha=0.5, theta_low=0.2, theta_high=0.8)
    th = build_theta(p)
    assert th(2 * 0.5 * 10.0) == pytest.approx(0.2, abs=1e-12)
    assert th(2 * 0.5 * 457.59) == pytest.approx(0.8, abs=1e-12)
    # hand arithmetic: f(5) = 0.2 + 0.6/447.59 * (5 - 10)
    assert th(5.0) == pytest.approx(0.2 - 3.0 / 447.59, abs=1e-12)
    assert th(5.0) == pytest.approx(0.1933, abs=1e-4)


def test_extrapolation_clamps_to_unit_interval():
    p = GameParams(alpha=0.5, theta_low=0.9, theta_high=0.1)
    th = build_theta(p)
    assert th(1000.0) == 0.0  # extrapolated value is negative
    assert th(-1000.0) == 1.0


def test_degenerate_anchors_raise():
    with pytest.raises(DegenerateAnchors):
        build_theta(GameParams(alpha=0.0, theta_low=0.2, theta_high=0.8))
    with pytest.raises(DegenerateAnchors):
        build_theta(GameParams(d_low=5.0, d_high=5.0, theta_low=0.2, theta_high=0.8))
    # equal anchors are fine even at alpha=0
    th = build_theta(GameParams(alpha=0.0, theta_low=0.3, theta_high=0.3))
    assert th(123.0) == 0.3


def test_param_validation():
    with pytest.raises(InvalidParams):
        GameParams(alpha=1.5)
    with pytest.raises(InvalidParams):
        GameParams(d_low=0.0)
    with pytest.raises(InvalidParams):
        GameParams(d_high=5.0)  # below d_low=10
    with pytest.raises(InvalidParams):
        GameParams(beta=0.0)
    with pytest.raises(InvalidParams):
        GameParams(mu=-0.1)


# ---------------------------------------------------------------- payoff

def test_payoff_table_base_values():
    # CC pays the social reward
    assert payoff(Strategy.C, Strategy.C, 10.0, BASE) == 1.0
    # DC at alpha=0.4, d=10: 4 - 0.5*(1 + 1.5*4) = 0.5
    p = BASE.replace(alpha=0.4)
    assert payoff(Strategy.D, Strategy.C, 10.0, p) == pytest.approx(0.5, abs=1e-12)
    # DD at alpha=0: only the inspection term survives
    p0 = BASE.replace(alpha=0.0)
    assert payoff(Strategy.D, Strategy.D, 10.0, p0) == pytest.approx(-0.5, abs=1e-12)


def test_payoff_quad_examples():
    q = payoff_quad(10.0, BASE.replace(alpha=0.4))
    assert q.astuple() == pytest.approx((1.0, 0.5, 0.5, 0.5), abs=1e-12)

    q0 = payoff_quad(10.0, BASE.replace(alpha=0.0))
    assert q0.astuple() == pytest.approx((1.0, 0.5, -0.5, -0.5), abs=1e-12)

    q1 = payoff_quad(457.59, BASE.replace(alpha=1.0))
    # t = 457.59 - 0.5*(1 + 1.5*457.59) = 113.8975
    assert q1.t == pytest.approx(113.8975, abs=1e-10)


@settings(max_examples=200)
@given(alpha=st.floats(0.01, 1.0), gamma_cost=st.floats(0.0, 3.0),
       phi=st.floats(0.0, 3.0), tl=st.floats(0.0, 1.0), th=st.floats(0.0, 1.0),
       high=st.booleans())
def test_cooperation_premium_identity(alpha, gamma_cost, phi, tl, th, high):
    # payoff(C,C) - payoff(C,D) == theta(alpha d) * Gamma >= 0
    p = GameParams(Gamma=gamma_cost, phi=phi, alpha=alpha,
                   theta_low=tl, theta_high=th)
    d = p.d_high if high else p.d_low
    theta = build_theta(p)
    gap = payoff(Strategy.C, Strategy.C, d, p) - payoff(Strategy.C, Strategy.D, d, p)
    assert gap == pytest.approx(theta(alpha * d) * gamma_cost, abs=1e-12)
    assert gap >= 0.0


def test_defection_monotone_in_evaded_amount():
    # constant theta, theta*phi < 1: payoff(D, .) strictly increasing in alpha*d
    p = BASE.replace(phi=1.5)  # theta*phi = 0.75
    lo = payoff(Strategy.D, Strategy.C, 10.0, p.replace(alpha=0.2))
    hi = payoff(Strategy.D, Strategy.C, 10.0, p.replace(alpha=0.6))
    assert hi > lo
    # theta*phi > 1: strictly decreasing
    p2 = BASE.replace(phi=2.5)  # theta*phi = 1.25
    lo2 = payoff(Strategy.D, Strategy.C, 10.0, p2.replace(alpha=0.2))
    hi2 = payoff(Strategy.D, Strategy.C, 10.0, p2.replace(alpha=0.6))
    assert hi2 < lo2


# ---------------------------------------------------------------- classify

def oracle_label(r, s, t, p):
    """Independent transcription of the region taxonomy for the test oracle.

    Returns None for orderings outside the taxonomy (cannot arise from valid
    game parameters, where s <= r always holds).
    """
    rp, d1, d2, d3 = r > p, t > r, p > s, t > s
    if rp:
        if d1:
            return "prisoners_dilemma" if d2 else "snowdrift"
        if not d2:
            return "harmony"
        return "stag_hunt" if d3 else "rp_d2"
    if d1 and d2 and d3:
        return "defection_d123"
    if d2 and d3:
        return "defection_d23"
    if d2 and not d1 and not d3:
        return "defection_d2"
    return None


def test_classify_examples():
    got = classify_game(PayoffQuad(1.0, 0.5, -0.5, -0.5))
    assert got.label is GameLabel.HARMONY
    assert got.conditions == (True, False, False, False)

    with pytest.raises(AmbiguousGame) as exc:
        classify_game(PayoffQuad(1.0, 0.0, 2.0, 1.0))  # R == P exactly
    assert "R=P" in exc.value.ties

    # base-parameter quad is a quadruple tie away from harmony
    with pytest.raises(AmbiguousGame):
        classify_game(payoff_quad(10.0, BASE.replace(alpha=0.4)))


def test_coordination_alias():
    assert GameLabel.COORDINATION is GameLabel.STAG_HUNT


def test_harmony_region_below_threshold():
    # constant theta, theta*phi<1: cooperation prevails while
    # alpha*d < R / (1 - theta*phi)
    theta_phi = 0.5 * 1.5
    bound = 1.0 / (1.0 - theta_phi)  # = 4
    for ad, want_harmony in ((0.5, True), (3.9, True), (4.1, False)):
        p = GameParams(alpha=1.0, d_low=ad, d_high=ad)
        got = classify_game(payoff_quad(ad, p))
        assert (got.label is GameLabel.HARMONY) == want_harmony, (ad, got.label)
    assert bound == 4.0


def _quad_const_theta(ad, gamma_cost, theta, phi=1.5, reward=1.0):
    penalty = gamma_cost + phi * ad
    return PayoffQuad(r=reward, s=reward - theta * gamma_cost,
                      t=ad - theta * penalty, p=ad - theta * penalty)


def _quad_theta_pair(ad, theta, theta_prime, gamma_cost=1.0, phi=1.5, reward=1.0):
    penalty = gamma_cost + phi * ad
    return PayoffQuad(r=reward, s=reward - theta * gamma_cost,
                      t=ad - theta * penalty, p=ad - theta_prime * penalty)


def test_classifier_against_oracle_on_grids():
    rng = np.random.default_rng(1234)
    # grid of (Gamma, alpha*d) with constant theta
    for gamma_cost in np.linspace(0.05, 3.0, 50):
        for ad in np.linspace(0.05, 8.0, 50):
            theta = 0.5
            q = _quad_theta_pair(ad, theta, theta + 1e-9, gamma_cost)
            try:
                got = classify_game(q)
            except AmbiguousGame:
                continue
            assert got.label.value == oracle_label(*q.astuple()), (gamma_cost, ad)
    # grid of (theta, alpha*d) with fixed theta'
    for theta in np.linspace(0.02, 0.98, 50):
        for ad in np.linspace(0.05, 12.0, 50):
            q = _quad_theta_pair(ad, theta, 0.5)
            try:
                got = classify_game(q)
            except AmbiguousGame:
                continue
            assert got.label.value == oracle_label(*q.astuple()), (theta, ad)
    # random quads exercise the defection branches and the rejection path
    from evotax.errors import UnclassifiedGame

    for _ in range(2000):
        q = PayoffQuad(*rng.normal(size=4))
        want = oracle_label(*q.astuple())
        try:
            got = classify_game(q)
        except AmbiguousGame:
            continue
        except UnclassifiedGame:
            assert want is None
            continue
        assert got.label.value == want


def _bisect(fn, lo, hi, tol=1e-9):
    """Smallest x in [lo, hi] where fn flips from False to True."""
    assert not fn(lo) and fn(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_harmony_exit_threshold_by_bisection():
    # D2/D3 switch on at alpha*d = R/(1 - theta*phi) under constant theta
    theta, phi, reward, gamma_cost = 0.5, 1.5, 1.0, 1.0

    def not_harmony(ad):
        q = _quad_theta_pair(ad, theta, theta + 1e-9, gamma_cost, phi, reward)
        try:
            return classify_game(q).label is not GameLabel.HARMONY
        except AmbiguousGame:
            return True

    got = _bisect(not_harmony, 0.1, 10.0)
    assert got == pytest.approx(reward / (1.0 - theta * phi), abs=1e-6)


def test_mutual_defection_threshold_by_bisection():
    # P > R exactly when alpha*d > (R + theta'*Gamma)/(1 - theta'*phi)
    theta_prime, phi, reward, gamma_cost = 0.5, 1.5, 1.0, 1.0

    def p_exceeds_r(ad):
        q = _quad_theta_pair(ad, 0.4, theta_prime, gamma_cost, phi, reward)
        return q.p > q.r

    got = _bisect(p_exceeds_r, 0.1, 20.0)
    want = (reward + theta_prime * gamma_cost) / (1.0 - theta_prime * phi)
    assert got == pytest.approx(want, abs=1e-6)
