"""Choosing the weight model (hence the covariance definition) from data.

Given recovered weights, each candidate family is scored two ways:

* an Anderson-Darling test whose p-value comes from parametric simulation
  (the candidate families have no published critical values), and
* a pointwise QQ envelope: the fraction of observed order statistics
  falling outside simulated acceptance bands.

The recommendation minimizes the pooled envelope exceedance; p-values only
break ties. Exceedance is the primary criterion because with many points
the AD test rejects even practically negligible departures.

Discrete families cannot be AD-tested; they are screened by an exact
support check instead (every value at 0, or every value at +/-1) and enter
the ranking through the fraction of points violating that support.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import InfeasibleError
from .microdata import (
    WeightFamily,
    WeightModel,
    WeightTable,
    covariance_kind,
    draw_weights,
)

#: CDF values are clamped into [CDF_FLOOR, 1 - CDF_FLOOR] before the logs.
CDF_FLOOR = 1e-15
#: Tolerance of the discrete-support screens.
SUPPORT_ATOL = 1e-9
#: Relative tolerance when flagging shared (scenario 2) weights.
SHARED_WEIGHT_RTOL = 1e-9

POOLED = "pooled"


def weight_cdf(family: WeightFamily | str):
    """Distribution function of a continuous weight family, vectorized."""
    family = WeightFamily(family)
    if family is WeightFamily.CONTINUOUS_UNIFORM:
        return lambda u: (np.asarray(u, dtype=float) + 1.0) / 2.0
    if family is WeightFamily.TRIANGULAR:

        def tri_cdf(u):
            u = np.asarray(u, dtype=float)
            return np.where(u < 0.0, (1.0 + u) ** 2 / 2.0, 1.0 - (1.0 - u) ** 2 / 2.0)

        return tri_cdf
    if family is WeightFamily.INVERSE_TRIANGULAR:

        def inv_tri_cdf(u):
            u = np.asarray(u, dtype=float)
            return np.where(u < 0.0, (1.0 - u**2) / 2.0, (1.0 + u**2) / 2.0)

        return inv_tri_cdf
    if family is WeightFamily.TRUNCATED_NORMAL:
        lo = norm.cdf(-3.0)
        mass = norm.cdf(3.0) - lo

        def trunc_cdf(u):
            u = np.asarray(u, dtype=float)
            return np.clip((norm.cdf(3.0 * u) - lo) / mass, 0.0, 1.0)

        return trunc_cdf
    raise ValueError(f"{family} is not a continuous family")


def _ad_batch(sorted_rows: np.ndarray, cdf) -> np.ndarray:
    """AD statistic per row; rows must be sorted ascending along axis -1."""
    n = sorted_rows.shape[-1]
    z = np.clip(cdf(sorted_rows), CDF_FLOOR, 1.0 - CDF_FLOOR)
    weights = 2.0 * np.arange(1, n + 1) - 1.0
    s = np.sum(weights * (np.log(z) + np.log1p(-z[..., ::-1])), axis=-1)
    return -n - s / n


def ad_statistic(sample, cdf, support: tuple[float, float] | None = None) -> float:
    """Anderson-Darling statistic of a sorted sample against a fixed CDF.

    A2 = -n - (1/n) * sum_i (2i-1) [ln F(u_(i)) + ln(1 - F(u_(n+1-i)))]
    """
    u = np.asarray(sample, dtype=float)
    if u.ndim != 1 or u.size < 1:
        raise ValueError("sample must be a non-empty 1-d array")
    if np.any(np.diff(u) < 0.0):
        raise ValueError("sample must be sorted ascending")
    if support is not None:
        lo, hi = support
        if u[0] < lo or u[-1] > hi:
            raise ValueError(f"sample values outside the support [{lo}, {hi}]")
    return float(_ad_batch(u[None, :], cdf)[0])


def _check_weight_sample(sample, model: WeightModel) -> np.ndarray:
    if not model.is_continuous:
        raise ValueError(
            f"{model.family} is not continuous; the Anderson-Darling test "
            "applies to continuous null distributions only"
        )
    u = np.sort(np.asarray(sample, dtype=float))
    if u.ndim != 1 or u.size < 1:
        raise ValueError("sample must be a non-empty 1-d array")
    if not np.isfinite(u).all():
        raise ValueError("sample contains non-finite values")
    if u[0] < -1.0 or u[-1] > 1.0:
        raise ValueError("weight sample values must lie in [-1, 1]")
    return u


def ad_test(
    sample,
    model: WeightModel,
    replicates: int = 10_000,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """AD test of a weight sample against a continuous candidate family.

    The p-value is the parametric-simulation tail probability with add-one
    smoothing: (1 + #{simulated A2 >= observed}) / (replicates + 1).
    """
    if rng is None:
        raise ValueError("an explicitly seeded generator is required")
    u = _check_weight_sample(sample, model)
    cdf = weight_cdf(model.family)
    observed = ad_statistic(u, cdf, support=(-1.0, 1.0))
    sims = np.sort(draw_weights(model.family, rng, (int(replicates), u.size)), axis=1)
    stats = _ad_batch(sims, cdf)
    p = (1 + int(np.count_nonzero(stats >= observed))) / (replicates + 1)
    return observed, p


@dataclass(frozen=True)
class QqEnvelope:
    """Pointwise acceptance bands for each order statistic, plus the verdict."""

    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    observed: np.ndarray = field(repr=False)
    exceedance: float
    level: float


def qq_envelope(
    sample,
    model: WeightModel,
    level: float = 0.95,
    replicates: int = 10_000,
    rng: np.random.Generator | None = None,
) -> QqEnvelope:
    """Simulated pointwise QQ envelope and the observed exceedance fraction.

    Band i holds the [(1-level)/2, (1+level)/2] empirical quantiles of the
    i-th order statistic over ``replicates`` simulated same-size samples.
    """
    if rng is None:
        raise ValueError("an explicitly seeded generator is required")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    u = _check_weight_sample(sample, model)
    if u.size < 10:
        raise ValueError(f"need at least 10 points for an envelope, got {u.size}")
    sims = np.sort(draw_weights(model.family, rng, (int(replicates), u.size)), axis=1)
    alpha = (1.0 - level) / 2.0
    lower = np.quantile(sims, alpha, axis=0)
    upper = np.quantile(sims, 1.0 - alpha, axis=0)
    outside = (u < lower) | (u > upper)
    return QqEnvelope(lower, upper, u, float(np.mean(outside)), level)


def _support_exceedance(u: np.ndarray, family: WeightFamily) -> float:
    """Fraction of points off the discrete family's support."""
    if family is WeightFamily.POINT_MASS_ZERO:
        return float(np.mean(np.abs(u) > SUPPORT_ATOL))
    return float(np.mean(np.abs(np.abs(u) - 1.0) > SUPPORT_ATOL))


@dataclass(frozen=True)
class CandidateFit:
    """Scores of one candidate family (AD entries are None for discrete ones)."""

    model: WeightModel
    ad_statistic: float | None
    p_value: float | None
    exceedance: dict[str, float]
    ad_by_sample: dict[str, float | None]
    p_by_sample: dict[str, float | None]


@dataclass(frozen=True)
class FitReport:
    """Per-candidate scores plus exactly one recommendation."""

    candidates: tuple[CandidateFit, ...]
    recommended: WeightModel
    recommended_kind: int | None
    scenario2_evidence: bool
    scenario_correlations: np.ndarray = field(repr=False)
    variable_names: tuple[str, ...] = ()

    def candidate(self, family: WeightFamily | str) -> CandidateFit:
        family = WeightFamily(family)
        for c in self.candidates:
            if c.model.family is family:
                return c
        raise KeyError(str(family))


def _thread_cap() -> int:
    env = os.environ.get("SYMCOV_THREADS")
    if env is not None:
        cap = int(env)
        if cap < 1:
            raise ValueError(f"SYMCOV_THREADS must be >= 1, got {env!r}")
        return cap
    return min(8, os.cpu_count() or 1)


def _fit_cell(args):
    u, model, replicates, level, rng = args
    if model.is_continuous:
        stat, p = ad_test(u, model, replicates=replicates, rng=rng)
        env = qq_envelope(u, model, level=level, replicates=replicates, rng=rng)
        return stat, p, env.exceedance
    return None, None, _support_exceedance(u, model.family)


def _weight_correlations(values: np.ndarray) -> np.ndarray:
    """Pairwise-complete correlations between weight columns (NaN if undefined)."""
    p = values.shape[1]
    out = np.full((p, p), np.nan)
    np.fill_diagonal(out, 1.0)
    for j in range(p):
        for l in range(j):
            both = ~np.isnan(values[:, j]) & ~np.isnan(values[:, l])
            if both.sum() < 2:
                continue
            x, y = values[both, j], values[both, l]
            sx, sy = x.std(), y.std()
            if sx == 0.0 or sy == 0.0:
                continue
            r = float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))
            out[j, l] = out[l, j] = r
    return out


def _shared_weight_evidence(values: np.ndarray) -> bool:
    """True when every micro row with >= 2 usable weights has equal entries."""
    if values.shape[1] < 2:
        return False
    rows = np.sum(~np.isnan(values), axis=1) >= 2
    if not rows.any():
        return False
    block = values[rows]
    lo = np.nanmin(block, axis=1)
    hi = np.nanmax(block, axis=1)
    scale = np.maximum(np.maximum(np.abs(lo), np.abs(hi)), 1.0)
    return bool(np.all(hi - lo <= SHARED_WEIGHT_RTOL * scale))


def select_model(
    u_table: WeightTable,
    candidates,
    rng: np.random.Generator | None = None,
    replicates: int = 10_000,
    level: float = 0.95,
) -> FitReport:
    """Score every candidate on the pooled and per-variable weight samples.

    The recommended candidate minimizes the pooled exceedance; ties go to
    the larger minimal p-value (discrete candidates, having none, lose
    ties). The candidate grid is evaluated in parallel with one spawned RNG
    stream per cell, so the report is identical for a given seed regardless
    of the thread count (capped by the SYMCOV_THREADS environment variable).
    """
    if rng is None:
        raise ValueError("an explicitly seeded generator is required")
    models = []
    for cand in candidates:
        if isinstance(cand, WeightModel):
            models.append(cand)
        else:
            models.append(WeightModel(WeightFamily(cand), scenario=1))
    if not models:
        raise ValueError("need at least one candidate model")
    if len({m.family for m in models}) != len(models):
        raise ValueError("duplicate candidate families")

    values = u_table.values
    if np.isnan(values).all():
        raise InfeasibleError("all weight cells are missing; nothing to fit")
    samples: dict[str, np.ndarray] = {POOLED: values[~np.isnan(values)]}
    for j, name in enumerate(u_table.variable_names):
        col = values[:, j]
        samples[name] = col[~np.isnan(col)]
    for name, s in samples.items():
        if s.size < 10:
            raise InfeasibleError(
                f"only {s.size} usable weight values for {name!r}; need >= 10"
            )

    cells = [(m, name) for m in models for name in samples]
    streams = rng.spawn(len(cells))
    jobs = [
        (samples[name], m, replicates, level, streams[i])
        for i, (m, name) in enumerate(cells)
    ]
    with ThreadPoolExecutor(max_workers=_thread_cap()) as pool:
        results = list(pool.map(_fit_cell, jobs))

    fits = []
    for ci, model in enumerate(models):
        ad_by, p_by, exc_by = {}, {}, {}
        for si, name in enumerate(samples):
            stat, p, exc = results[ci * len(samples) + si]
            ad_by[name], p_by[name], exc_by[name] = stat, p, exc
        fits.append(
            CandidateFit(
                model=model,
                ad_statistic=ad_by[POOLED],
                p_value=p_by[POOLED],
                exceedance=exc_by,
                ad_by_sample=ad_by,
                p_by_sample=p_by,
            )
        )

    def rank(fit: CandidateFit):
        ps = [p for p in fit.p_by_sample.values() if p is not None]
        min_p = min(ps) if ps else -1.0
        return (fit.exceedance[POOLED], -min_p)

    recommended = min(fits, key=rank)
    shared = _shared_weight_evidence(values)
    kind = covariance_kind(
        WeightModel(recommended.model.family, scenario=2 if shared else 1)
    )
    return FitReport(
        candidates=tuple(fits),
        recommended=recommended.model,
        recommended_kind=kind,
        scenario2_evidence=shared,
        scenario_correlations=_weight_correlations(values),
        variable_names=u_table.variable_names,
    )
