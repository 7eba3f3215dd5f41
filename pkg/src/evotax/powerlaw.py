"""Discrete power-law fitting (MLE + KS minimization) and sampling.

The fit follows the standard recipe: for every candidate lower cutoff the
exponent is estimated with the discrete maximum-likelihood approximation

    gamma_hat = 1 + n * [ sum ln(x_i / (x_min - 1/2)) ]^(-1)

and the candidate minimizing the Kolmogorov-Smirnov distance between the
empirical tail and the fitted tail wins.  The KS distance uses the matching
continuous half-integer approximation of the tail function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, NonPositiveSample, ParseError, TooFewDistinct, TooFewSamples

MIN_SAMPLES = 50


@dataclass(frozen=True)
class PowerLawFit:
    gamma_hat: float
    x_min_hat: int
    ks_statistic: float
    n_tail: int


def sample_powerlaw(gamma: float, x_min: int, x_max: int, n: int, seed) -> np.ndarray:
    """n i.i.d. draws from p(k) proportional to k^(-gamma) on [x_min, x_max],
    via inverse transform on the normalized mass function."""
    if gamma <= 1.0:
        raise InvalidParams(f"gamma={gamma} must be > 1")
    if x_min < 1:
        raise InvalidParams(f"x_min={x_min} must be >= 1")
    if x_max < x_min:
        raise InvalidParams(f"x_max={x_max} must be >= x_min={x_min}")
    if n < 1:
        raise InvalidParams(f"n={n} must be >= 1")
    rng = np.random.default_rng(seed)
    support = np.arange(x_min, x_max + 1, dtype=np.int64)
    pmf = support.astype(np.float64) ** (-gamma)
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    u = rng.random(n)
    return support[np.searchsorted(cdf, u, side="right")]


def truncated_pmf(gamma: float, x_min: int, x_max: int) -> np.ndarray:
    """Normalized mass function on [x_min, x_max]; the sampler's distribution."""
    support = np.arange(x_min, x_max + 1, dtype=np.float64)
    pmf = support ** (-gamma)
    return pmf / pmf.sum()


def _fitted_tail(values: np.ndarray, gamma_hat: float, x_min: int) -> np.ndarray:
    return ((values - 0.5) / (x_min - 0.5)) ** (1.0 - gamma_hat)


def fit_powerlaw(samples, x_min_candidates=None) -> PowerLawFit:
    """Fit exponent and lower cutoff by KS-minimizing over candidate cutoffs.

    Candidates default to the distinct sample values between the 1st and 99th
    percentiles.  Candidates whose tail has fewer than two distinct values are
    skipped.
    """
    xs = np.asarray(samples, dtype=np.int64)
    if xs.ndim != 1:
        xs = xs.ravel()
    if len(xs) < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {len(xs)}")
    if xs.min() <= 0:
        raise NonPositiveSample("all samples must be positive integers")
    xs = np.sort(xs)
    distinct = np.unique(xs)
    if len(distinct) < 2:
        raise TooFewDistinct("samples are all equal; no tail to fit")

    if x_min_candidates is None:
        p1, p99 = np.percentile(xs, [1.0, 99.0])
        candidates = distinct[(distinct >= p1) & (distinct <= p99)]
        if len(candidates) == 0:
            candidates = distinct[:-1]
    else:
        candidates = np.unique(np.asarray(list(x_min_candidates), dtype=np.int64))
        if len(candidates) == 0:
            raise InvalidParams("x_min_candidates is empty")

    n = len(xs)
    log_xs = np.log(xs)
    suffix_log = np.concatenate((np.cumsum(log_xs[::-1])[::-1], [0.0]))

    best = None
    for xm in candidates:
        i = np.searchsorted(xs, xm, side="left")
        n_tail = n - i
        if n_tail < 2:
            continue
        tail = xs[i:]
        tail_values, first_idx = np.unique(tail, return_index=True)
        if len(tail_values) < 2:
            continue
        denom = suffix_log[i] - n_tail * np.log(xm - 0.5)
        gamma_hat = 1.0 + n_tail / denom
        emp_tail = (n_tail - first_idx) / n_tail  # P_emp(X >= value)
        fit_tail = _fitted_tail(tail_values.astype(np.float64), gamma_hat, int(xm))
        ks = float(np.abs(emp_tail - fit_tail).max())
        if best is None or ks < best[0]:
            best = (ks, int(xm), float(gamma_hat), int(n_tail))

    if best is None:
        raise TooFewDistinct("no candidate cutoff leaves a fit-able tail")
    ks, x_min_hat, gamma_hat, n_tail = best
    return PowerLawFit(gamma_hat=gamma_hat, x_min_hat=x_min_hat,
                       ks_statistic=ks, n_tail=n_tail)


def read_samples(path) -> np.ndarray:
    """Plain-text degree file: one positive integer per line."""
    values = []
    with open(path, "r") as f:
        for ln, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                v = int(line)
            except ValueError:
                raise ParseError(f"not an integer: {line!r}", line_no=ln) from None
            if v <= 0:
                raise NonPositiveSample(f"line {ln}: sample {v} must be positive")
            values.append(v)
    return np.asarray(values, dtype=np.int64)
