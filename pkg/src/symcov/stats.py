"""Sample symbolic covariance and correlation matrices for interval data.

Eight covariance definitions are supported, indexed k = 1..8. Writing each
cell as (center c, range r), every definition has the shape

    var_k(X_j)        = var(c_j)        + var_weight_k  * mean(r_j^2)
    cov_k(X_j, X_l)   = cov(c_j, c_l)   + cov_weight_k  * mean(r_j * r_l)

with the weight pairs (var_weight, cov_weight):

    k=1: (0, 0)        centers only
    k=2: (1/4, 1/4)    endpoints-based variance and covariance
    k=3: (1/12, 1/12)  uniform-within-interval variance and covariance
    k=4: (1/4, 0)      k=2 variance combined with k=1 covariance
    k=5: (1/12, 0)     k=3 variance combined with k=1 covariance
    k=6: (1/8, 0)      inverse-triangular micro-data weight
    k=7: (1/24, 0)     triangular micro-data weight
    k=8: (d8, 0)       truncated-normal micro-data weight, with
                       d8 = 1/36 - pdf(3) / (6 * (2*cdf(3) - 1))
                       computed from the standard normal pdf/cdf.

The k = 6, 7, 8 sample matrices extend the center/range scheme of k = 4, 5
with the corresponding micro-data weight variances; only their diagonal
corrections differ (off-diagonal weight is 0 for every k >= 4).

All sample moments use the 1/n divisor (population style), never 1/(n-1);
this is not configurable. Two-pass (mean, then centered sums) accumulation
is used throughout; the raw-moment single-pass formulas live only in
``limits_form_oracle``, which evaluates the limits-parameterized formulas
verbatim as an independent cross-check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .intervals import IntervalDataset

#: Smallest admissible variance when forming correlations.
_ZERO_VARIANCE_MSG = "zero symbolic variance in column {name!r} (index {j}) for k={k}"


@dataclass(frozen=True)
class CovKind:
    """One of the eight covariance definitions: index plus its two weights."""

    k: int
    var_weight: float
    cov_weight: float


def _delta8() -> float:
    # Variance/4 of a N(0, 1/9) variable conditioned on [-1, 1].
    return 1.0 / 36.0 - norm.pdf(3.0) / (6.0 * (2.0 * norm.cdf(3.0) - 1.0))


COV_KINDS: dict[int, CovKind] = {
    1: CovKind(1, 0.0, 0.0),
    2: CovKind(2, 1.0 / 4.0, 1.0 / 4.0),
    3: CovKind(3, 1.0 / 12.0, 1.0 / 12.0),
    4: CovKind(4, 1.0 / 4.0, 0.0),
    5: CovKind(5, 1.0 / 12.0, 0.0),
    6: CovKind(6, 1.0 / 8.0, 0.0),
    7: CovKind(7, 1.0 / 24.0, 0.0),
    8: CovKind(8, _delta8(), 0.0),
}

ALL_KINDS: tuple[CovKind, ...] = tuple(COV_KINDS[k] for k in range(1, 9))


def cov_kind(kind: CovKind | int) -> CovKind:
    """Normalize an int 1..8 or a CovKind to a CovKind."""
    if isinstance(kind, CovKind):
        return kind
    try:
        return COV_KINDS[int(kind)]
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"covariance definition must be an integer 1..8, got {kind!r}")


@dataclass(frozen=True)
class SymmetricMatrix:
    """A symmetric p x p matrix with finite entries (read-only storage)."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must be finite")
        if not np.array_equal(arr, arr.T):
            raise ValueError("matrix must be exactly symmetric")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]


def sample_mean(d: IntervalDataset) -> np.ndarray:
    """Symbolic sample mean: the per-column mean of the interval centers."""
    return d.centers.mean(axis=0)


def _centered_pair(d: IntervalDataset, j: int, l: int, weight: float) -> float:
    """cov(centers_j, centers_l) + weight * mean(r_j * r_l), divisor 1/n."""
    n = d.n
    cj = d.centers[:, j]
    cl = d.centers[:, l]
    cov_c = float(np.dot(cj - cj.mean(), cl - cl.mean())) / n
    if weight == 0.0:
        return cov_c
    rr = float(np.dot(d.ranges[:, j], d.ranges[:, l])) / n
    return cov_c + weight * rr


def sample_cov_pair(d: IntervalDataset, j: int, l: int, kind: CovKind | int) -> float:
    """Sample symbolic covariance between columns j and l under definition k.

    For j == l this is the definition's variance (var_weight applies); for
    j != l the cross weight applies, which is zero for every k >= 4.
    """
    kd = cov_kind(kind)
    weight = kd.var_weight if j == l else kd.cov_weight
    return _centered_pair(d, j, l, weight)


def sample_cov_matrix(d: IntervalDataset, kind: CovKind | int) -> SymmetricMatrix:
    """Sample symbolic covariance matrix; entry (j, l) = sample_cov_pair(j, l)."""
    kd = cov_kind(kind)
    if d.n == 1:
        warnings.warn(
            "covariance of a single object: center variances are all zero, "
            "only the range terms contribute",
            stacklevel=2,
        )
    p = d.p
    out = np.zeros((p, p))
    for j in range(p):
        for l in range(j + 1):
            v = sample_cov_pair(d, j, l, kd)
            out[j, l] = v
            out[l, j] = v
    return SymmetricMatrix(out)


def sample_cor_matrix(d: IntervalDataset, kind: CovKind | int) -> SymmetricMatrix:
    """Sample symbolic correlation matrix under definition k.

    Entry (j, l) is cov_k(X_j, X_l) / sqrt(var_k(X_j) * var_k(X_l)) with the
    cross weight in the numerator, so the diagonal is exactly 1 for
    k = 1, 2, 3 but drops below 1 for k >= 4 whenever a column has non-zero
    ranges (the self-covariance then omits the range term the variance
    includes). Entries are clipped into [-1, 1] to absorb last-ulp
    floating-point excursions; mathematically they already lie there.
    """
    kd = cov_kind(kind)
    p = d.p
    variances = np.array([sample_cov_pair(d, j, j, kd) for j in range(p)])
    for j in range(p):
        if variances[j] <= 0.0:
            raise ValueError(
                _ZERO_VARIANCE_MSG.format(name=d.variable_names[j], j=j, k=kd.k)
            )
    out = np.empty((p, p))
    for j in range(p):
        for l in range(j + 1):
            num = _centered_pair(d, j, l, kd.cov_weight)
            v = num / np.sqrt(variances[j] * variances[l])
            out[j, l] = v
            out[l, j] = v
    np.clip(out, -1.0, 1.0, out=out)
    return SymmetricMatrix(out)


def limits_form_oracle(d: IntervalDataset, j: int, l: int, defn: int) -> float:
    """Evaluate definitions 1..3 directly from the interval limits.

    This is the independent cross-check path: the variance and covariance
    formulas are evaluated exactly as classically written in terms of the
    limits a, b (raw moments included), not via the center/range identities
    used by ``sample_cov_pair``. The two must agree to rounding error.
    """
    if defn not in (1, 2, 3):
        raise ValueError(f"limits-form oracle covers definitions 1..3, got {defn}")
    a, b = d.limits()
    n = d.n
    aj, bj = a[:, j], b[:, j]
    al, bl = a[:, l], b[:, l]
    xbar_j = float(np.sum((aj + bj) / 2)) / n
    xbar_l = float(np.sum((al + bl) / 2)) / n
    if j == l:
        if defn == 1:
            return float(np.sum(((aj + bj) / 2 - xbar_j) ** 2)) / n
        if defn == 2:
            return float(np.sum((aj - xbar_j) ** 2 + (bj - xbar_j) ** 2)) / (2 * n)
        return float(np.sum(bj**2 + bj * aj + aj**2)) / (3 * n) - (
            float(np.sum((bj + aj) / 2)) / n
        ) ** 2
    if defn == 1:
        return float(np.sum((bj + aj) * (bl + al))) / (4 * n) - xbar_j * xbar_l
    if defn == 2:
        return float(
            np.sum((aj - xbar_j) * (al - xbar_l) + (bj - xbar_j) * (bl - xbar_l))
        ) / (2 * n)
    return float(
        np.sum(
            (aj - xbar_j) * (bl - xbar_l)
            + (bj - xbar_j) * (al - xbar_l)
            + 2 * (aj - xbar_j) * (al - xbar_l)
            + 2 * (bj - xbar_j) * (bl - xbar_l)
        )
    ) / (6 * n)


def limits_form_mean(d: IntervalDataset, j: int) -> float:
    """Sample symbolic mean of column j evaluated from the limits."""
    a, b = d.limits()
    return float(np.sum((a[:, j] + b[:, j]) / 2)) / d.n
