"""Declaration-data pipeline: merge seller/buyer files, mismatch ratios, and
calibration quantities (prob_high, volume ratio, mismatch CDF).

Transactions are declared twice, once per side.  Pairs are matched on
(seller_id, buyer_id) after summing duplicate rows per side; pairs missing a
counterpart are dropped.  The mismatch ratio of a matched pair is

    (B - S) / (B + S)   if B >= S else 0,

keeping only the mismatches that benefit the seller; with symmetric fraud
fractions S=(1-a)d, B=(1+a)d this equals a exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import BothZero, EmptyInput, InvalidParams, NegativeAmount, ParseError

SIDE_SALE = "sale"
SIDE_PURCHASE = "purchase"
DECLARATION_HEADER = ("seller_id", "buyer_id", "amount")


@dataclass(frozen=True)
class DeclarationRecord:
    seller_id: str
    buyer_id: str
    amount: float
    side: str

    def __post_init__(self):
        if self.amount < 0:
            raise NegativeAmount(f"amount {self.amount} for "
                                 f"({self.seller_id}, {self.buyer_id})")
        if self.seller_id == self.buyer_id:
            raise InvalidParams(f"seller and buyer coincide: {self.seller_id}")
        if self.side not in (SIDE_SALE, SIDE_PURCHASE):
            raise InvalidParams(f"side must be sale or purchase, got {self.side!r}")


@dataclass(frozen=True)
class MatchedTransaction:
    seller_id: str
    buyer_id: str
    seller_declared: float
    buyer_declared: float
    mismatch_ratio: float

    @property
    def volume(self) -> float:
        """Best single estimate of the pair's true tax debt: the mean of both
        declarations (exact under symmetric fraud fractions)."""
        return 0.5 * (self.seller_declared + self.buyer_declared)


def mismatch_ratio(seller_declared: float, buyer_declared: float) -> float:
    """Normalized declaration divergence in [0, 1]; only seller-benefiting
    mismatches count, so B < S maps to 0."""
    if seller_declared < 0 or buyer_declared < 0:
        raise NegativeAmount("declared amounts must be >= 0")
    if seller_declared == 0 and buyer_declared == 0:
        raise BothZero("mismatch ratio undefined for two zero declarations")
    if buyer_declared <= seller_declared:
        return 0.0
    return (buyer_declared - seller_declared) / (buyer_declared + seller_declared)


def read_declarations(path, side: str) -> list[DeclarationRecord]:
    """CSV with header seller_id,buyer_id,amount."""
    records = []
    with open(path, "r", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", line_no=1) from None
        if tuple(h.strip() for h in header) != DECLARATION_HEADER:
            raise ParseError(f"expected header {','.join(DECLARATION_HEADER)}, "
                             f"got {','.join(header)}", line_no=1)
        for ln, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line_no=ln)
            try:
                amount = float(row[2])
            except ValueError:
                raise ParseError(f"bad amount {row[2]!r}", line_no=ln) from None
            if amount < 0:
                raise NegativeAmount(f"line {ln}: amount {amount} is negative")
            records.append(DeclarationRecord(seller_id=row[0].strip(),
                                             buyer_id=row[1].strip(),
                                             amount=amount, side=side))
    return records


def merge_declarations(sales, purchases,
                       drop_exact_matches: bool = False) -> list[MatchedTransaction]:
    """Pair sales and purchases on (seller_id, buyer_id).

    Duplicate rows per pair per side are summed first.  Pairs without a
    counterpart are dropped; pairs where both sides declare zero are dropped
    as well (no transaction volume).  With drop_exact_matches, pairs whose
    declarations agree exactly are also removed.  Output is sorted by
    (seller_id, buyer_id), so row order of the inputs is irrelevant.
    """
    sold: dict[tuple[str, str], float] = {}
    for rec in sales:
        key = (rec.seller_id, rec.buyer_id)
        sold[key] = sold.get(key, 0.0) + rec.amount
    bought: dict[tuple[str, str], float] = {}
    for rec in purchases:
        key = (rec.seller_id, rec.buyer_id)
        bought[key] = bought.get(key, 0.0) + rec.amount
    matched = []
    for key in sorted(sold.keys() & bought.keys()):
        s = sold[key]
        b = bought[key]
        if s == 0.0 and b == 0.0:
            continue
        if drop_exact_matches and s == b:
            continue
        matched.append(MatchedTransaction(seller_id=key[0], buyer_id=key[1],
                                          seller_declared=s, buyer_declared=b,
                                          mismatch_ratio=mismatch_ratio(s, b)))
    return matched


class EmpiricalCdf:
    """Right-continuous empirical CDF: cdf(x) = fraction of values <= x."""

    def __init__(self, values):
        self.values = np.sort(np.asarray(values, dtype=np.float64))
        if len(self.values) == 0:
            raise EmptyInput("empirical CDF needs at least one value")

    def __call__(self, x: float) -> float:
        return float(np.searchsorted(self.values, x, side="right") / len(self.values))


@dataclass(frozen=True)
class CalibrationSummary:
    prob_high: float
    ratio_r: float
    alpha_cdf: EmpiricalCdf
    threshold: float
    n_pairs: int


def calibration_summary(matched, high_quantile: float = 0.98) -> CalibrationSummary:
    """prob_high = fraction of pair volumes above the high_quantile threshold;
    ratio_r = mean(high volumes) / mean(rest); alpha_cdf = empirical CDF of
    mismatch ratios.  Degenerate case (nothing above the threshold, e.g. all
    volumes equal): prob_high = 0 and ratio_r = 1."""
    matched = list(matched)
    if not matched:
        raise EmptyInput("calibration needs at least one matched pair")
    if not (0.0 < high_quantile < 1.0):
        raise InvalidParams("high_quantile must lie in (0, 1)")
    volumes = np.array([m.volume for m in matched], dtype=np.float64)
    threshold = float(np.quantile(volumes, high_quantile))
    high = volumes > threshold
    if high.any():
        prob_high = float(high.mean())
        ratio_r = float(volumes[high].mean() / volumes[~high].mean())
    else:
        prob_high = 0.0
        ratio_r = 1.0
    ratios = [m.mismatch_ratio for m in matched]
    return CalibrationSummary(prob_high=prob_high, ratio_r=ratio_r,
                              alpha_cdf=EmpiricalCdf(ratios),
                              threshold=threshold, n_pairs=len(matched))


def write_matched_csv(path, matched) -> None:
    with open(path, "w", newline="\n") as f:
        f.write("seller_id,buyer_id,seller_declared,buyer_declared,mismatch_ratio\n")
        for m in matched:
            f.write(f"{m.seller_id},{m.buyer_id},{m.seller_declared!r},"
                    f"{m.buyer_declared!r},{m.mismatch_ratio!r}\n")


def write_summary(f, summary: CalibrationSummary) -> None:
    """Flat key/value text report."""
    f.write(f"n_pairs={summary.n_pairs}\n")
    f.write(f"prob_high={summary.prob_high!r}\n")
    f.write(f"ratio_r={summary.ratio_r!r}\n")
    f.write(f"volume_threshold={summary.threshold!r}\n")
    f.write(f"alpha_cdf_at_0={summary.alpha_cdf(0.0)!r}\n")
    f.write(f"alpha_cdf_at_0.5={summary.alpha_cdf(0.5)!r}\n")


def make_fixture(n_pairs: int = 5000, seed=7, d_low: float = 10.0,
                 d_high: float = 457.59, prob_high: float = 0.02,
                 zero_fraction: float = 0.75, below_half_fraction: float = 0.9906,
                 n_orphans: int = 10):
    """Synthetic declaration files mirroring the calibration summary of the
    source data: an exact share of high-volume pairs, 75% exact matches, and
    99.06% of mismatch ratios below 0.5.

    Returns (sales, purchases) record lists.  Orphan rows (no counterpart)
    exercise the elimination rule and never affect matched-pair statistics.
    """
    if n_pairs < 1:
        raise InvalidParams("n_pairs must be >= 1")
    rng = np.random.default_rng(seed)
    n_high = int(round(prob_high * n_pairs))
    volumes = np.full(n_pairs, d_low)
    volumes[:n_high] = d_high
    volumes = volumes[rng.permutation(n_pairs)]

    n_zero = int(round(zero_fraction * n_pairs))
    n_mid = int(round((below_half_fraction - zero_fraction) * n_pairs))
    n_tail = n_pairs - n_zero - n_mid
    ratios = np.concatenate((np.zeros(n_zero),
                             rng.uniform(0.0, 0.5, size=n_mid),
                             rng.uniform(0.5, 0.98, size=max(0, n_tail))))
    ratios = ratios[rng.permutation(n_pairs)]

    sales, purchases = [], []
    for i in range(n_pairs):
        seller = f"F{2 * i:06d}"
        buyer = f"F{2 * i + 1:06d}"
        d = volumes[i]
        a = ratios[i]
        sales.append(DeclarationRecord(seller, buyer, float((1.0 - a) * d), SIDE_SALE))
        purchases.append(DeclarationRecord(seller, buyer, float((1.0 + a) * d), SIDE_PURCHASE))
    for i in range(n_orphans):
        seller = f"O{2 * i:06d}"
        buyer = f"O{2 * i + 1:06d}"
        if i % 2 == 0:
            sales.append(DeclarationRecord(seller, buyer, float(d_low), SIDE_SALE))
        else:
            purchases.append(DeclarationRecord(seller, buyer, float(d_low), SIDE_PURCHASE))
    return sales, purchases


def write_declarations(path, records) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(",".join(DECLARATION_HEADER) + "\n")
        for rec in records:
            f.write(f"{rec.seller_id},{rec.buyer_id},{rec.amount!r}\n")
