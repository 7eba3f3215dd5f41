"""Mixed-game payoff matrix, subjective audit probability, and 2x2 game taxonomy.

Two strategies: declare the transaction tax correctly (C) or under-declare a
fraction ``alpha`` of it (D).  Each pair of linked agents plays a 2x2 game whose
entries depend on the tax debt ``d`` carried by their edge, so different edges
host different games.  The perceived audit probability is a clamped linear
function of the declaration mismatch amount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum, Enum

from .errors import AmbiguousGame, DegenerateAnchors, InvalidParams, UnclassifiedGame


class Strategy(IntEnum):
    C = 0
    D = 1


@dataclass(frozen=True)
class GameParams:
    """Scalar parameters of the tax-compliance game.

    R: social/reputational reward for correct declaration.
    Gamma: inspection cost paid when audited, regardless of own behavior.
    phi: fine multiplier applied to the evaded amount upon inspection.
    alpha: undeclared fraction of the tax debt, in [0, 1].
    d_low / d_high: tax debt on low/high-volume edges.
    prob_high: probability that an edge carries d_high.
    theta_low / theta_high: audit-probability anchors at mismatch amounts
        2*alpha*d_low and 2*alpha*d_high.
    beta: selection intensity of the imitation rule.
    mu: per-agent mutation probability per step.
    """

    R: float = 1.0
    Gamma: float = 1.0
    phi: float = 1.5
    alpha: float = 0.3
    d_low: float = 10.0
    d_high: float = 457.59
    prob_high: float = 0.02
    theta_low: float = 0.5
    theta_high: float = 0.5
    beta: float = 0.5
    mu: float = 0.01

    def __post_init__(self):
        for name in ("alpha", "prob_high", "theta_low", "theta_high", "mu"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidParams(f"{name}={v} must lie in [0, 1]")
        if self.d_low <= 0.0:
            raise InvalidParams(f"d_low={self.d_low} must be > 0")
        if self.d_high < self.d_low:
            raise InvalidParams(f"d_high={self.d_high} must be >= d_low={self.d_low}")
        if self.beta <= 0.0:
            raise InvalidParams(f"beta={self.beta} must be > 0")
        if self.phi < 0.0:
            raise InvalidParams(f"phi={self.phi} must be >= 0")
        for name in ("R", "Gamma"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")

    def replace(self, **kw) -> "GameParams":
        from dataclasses import replace

        return replace(self, **kw)


def theta_line(alpha: float, d_low: float, d_high: float,
               theta_low: float, theta_high: float) -> tuple[float, float]:
    """Slope and intercept of the line through (2*alpha*d_low, theta_low) and
    (2*alpha*d_high, theta_high).

    When the anchor x-values coincide (alpha == 0 or d_low == d_high) the line
    is only defined if both anchors agree, in which case it is the constant
    function.
    """
    x_lo = 2.0 * alpha * d_low
    x_hi = 2.0 * alpha * d_high
    if x_lo == x_hi:
        if theta_low != theta_high:
            raise DegenerateAnchors(
                f"anchor x-values coincide at {x_lo} but theta_low={theta_low} "
                f"!= theta_high={theta_high}")
        return 0.0, theta_low
    slope = (theta_high - theta_low) / (x_hi - x_lo)
    intercept = theta_low - slope * x_lo
    return slope, intercept


@dataclass(frozen=True)
class AuditProbabilityFunction:
    """Linear perceived audit probability, clamped to [0, 1] on evaluation."""

    slope: float
    intercept: float

    def __call__(self, x: float) -> float:
        v = self.slope * x + self.intercept
        if v < 0.0:
            return 0.0
        if v > 1.0:
            return 1.0
        return v


def build_theta(params: GameParams) -> AuditProbabilityFunction:
    """Audit-probability function anchored at the both-defect mismatch amounts."""
    slope, intercept = theta_line(params.alpha, params.d_low, params.d_high,
                                  params.theta_low, params.theta_high)
    return AuditProbabilityFunction(slope, intercept)


def payoff(s_focal: int, s_other: int, d: float, params: GameParams,
           theta: AuditProbabilityFunction | None = None) -> float:
    """Single-interaction payoff of the focal agent against one partner.

    CC -> R; CD -> R - theta(alpha*d)*Gamma;
    DC -> alpha*d - theta(alpha*d)*(Gamma + phi*alpha*d);
    DD -> alpha*d - theta(2*alpha*d)*(Gamma + phi*alpha*d).
    """
    if theta is None:
        theta = build_theta(params)
    ad = params.alpha * d
    if s_focal == Strategy.C:
        if s_other == Strategy.C:
            return params.R
        return params.R - theta(ad) * params.Gamma
    penalty = params.Gamma + params.phi * ad
    if s_other == Strategy.C:
        return ad - theta(ad) * penalty
    return ad - theta(2.0 * ad) * penalty


@dataclass(frozen=True)
class PayoffQuad:
    """The four entries of a 2x2 matrix, focal row player: (CC, CD, DC, DD)."""

    r: float
    s: float
    t: float
    p: float

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.r, self.s, self.t, self.p)


def payoff_quad(d: float, params: GameParams,
                theta: AuditProbabilityFunction | None = None) -> PayoffQuad:
    if theta is None:
        theta = build_theta(params)
    return PayoffQuad(
        r=payoff(Strategy.C, Strategy.C, d, params, theta),
        s=payoff(Strategy.C, Strategy.D, d, params, theta),
        t=payoff(Strategy.D, Strategy.C, d, params, theta),
        p=payoff(Strategy.D, Strategy.D, d, params, theta),
    )


class GameLabel(Enum):
    HARMONY = "harmony"
    STAG_HUNT = "stag_hunt"
    # The intermediate coordination region coincides with the stag hunt here.
    COORDINATION = "stag_hunt"
    PRISONERS_DILEMMA = "prisoners_dilemma"
    SNOWDRIFT = "snowdrift"
    DEFECTION_D123 = "defection_d123"
    DEFECTION_D23 = "defection_d23"
    DEFECTION_D2 = "defection_d2"
    RP_D2 = "rp_d2"


@dataclass(frozen=True)
class GameClass:
    """Classification outcome: label plus the defining boolean conditions.

    conditions = (R>P, D1: T>R, D2: P>S, D3: T>S), all strict.
    """

    label: GameLabel
    conditions: tuple[bool, bool, bool, bool]


def classify_game(quad: PayoffQuad) -> GameClass:
    """Map a payoff quad onto the dilemma taxonomy.

    A social dilemma needs R>P plus at least one temptation condition; with
    R<=P the defection games are distinguished by which conditions hold.
    Exact ties in any defining comparison raise AmbiguousGame (the regions
    are open sets; boundaries carry no label).
    """
    r, s, t, p = quad.astuple()
    for v in (r, s, t, p):
        if not math.isfinite(v):
            raise InvalidParams(f"payoff quad must be finite, got {quad}")
    ties = set()
    if r == p:
        ties.add("R=P")
    if t == r:
        ties.add("T=R")
    if p == s:
        ties.add("P=S")
    if t == s:
        ties.add("T=S")
    if ties:
        raise AmbiguousGame(ties)

    rp = r > p
    d1 = t > r
    d2 = p > s
    d3 = t > s
    conds = (rp, d1, d2, d3)
    if rp:
        if not d1 and not d2:
            label = GameLabel.HARMONY
        elif not d1 and d2 and d3:
            label = GameLabel.STAG_HUNT
        elif d1 and d2:
            label = GameLabel.PRISONERS_DILEMMA
        elif d1 and not d2:
            label = GameLabel.SNOWDRIFT
        elif d2 and not d3:
            label = GameLabel.RP_D2
        else:  # pragma: no cover - exhausted above
            raise UnclassifiedGame(f"unmapped conditions {conds}")
    else:
        if d1 and d2 and d3:
            label = GameLabel.DEFECTION_D123
        elif not d1 and d2 and d3:
            label = GameLabel.DEFECTION_D23
        elif not d1 and d2 and not d3:
            label = GameLabel.DEFECTION_D2
        else:
            raise UnclassifiedGame(f"R<=P with conditions {conds} is outside the taxonomy")
    return GameClass(label=label, conditions=conds)
