"""Generative micro-data models and latent-weight recovery.

A micro observation inside the interval (c, r) is modeled as

    a_j = c_j + u_j * r_j / 2

where the latent weights u_j live in [-1, 1], have zero mean, and are
independent of the macro-data. Two dependence structures are supported:

    scenario 1  independent weights per variable
    scenario 2  one shared weight per micro point (all variables equal)

Each (weight family, scenario) pair reproduces one of the eight covariance
definitions; ``covariance_kind`` gives the mapping. Inverting the model,
u_j = 2 (a_j - c_j) / r_j recovers the weights whenever both micro- and
macro-data are observed.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import InfeasibleError
from .intervals import IntervalDataset, MicroTable
from .population import PopulationParams

#: Tolerance (absolute) for micro values lying outside their macro interval.
CONTAINMENT_TOLERANCE = 1e-9
#: Relative tolerance for matching a micro value to its group min/max.
BOUNDARY_MATCH_RTOL = 1e-12


class WeightFamily(str, enum.Enum):
    """Distribution families for the latent weights, all supported on [-1, 1]."""

    POINT_MASS_ZERO = "point-mass-zero"
    DISCRETE_UNIFORM_PM1 = "discrete-uniform-pm1"
    CONTINUOUS_UNIFORM = "continuous-uniform"
    TRIANGULAR = "triangular"
    INVERSE_TRIANGULAR = "inverse-triangular"
    TRUNCATED_NORMAL = "truncated-normal"

    def __str__(self) -> str:
        return self.value


CONTINUOUS_FAMILIES = frozenset(
    {
        WeightFamily.CONTINUOUS_UNIFORM,
        WeightFamily.TRIANGULAR,
        WeightFamily.INVERSE_TRIANGULAR,
        WeightFamily.TRUNCATED_NORMAL,
    }
)


@dataclass(frozen=True)
class WeightModel:
    """A weight family plus the dependence scenario (1 or 2)."""

    family: WeightFamily
    scenario: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", WeightFamily(self.family))
        if self.scenario not in (1, 2):
            raise ValueError(f"scenario must be 1 or 2, got {self.scenario}")

    @property
    def is_continuous(self) -> bool:
        return self.family in CONTINUOUS_FAMILIES


def model_variance(m: WeightModel | WeightFamily) -> float:
    """Exact weight variance of the family (the scenario does not matter)."""
    family = m.family if isinstance(m, WeightModel) else WeightFamily(m)
    if family is WeightFamily.POINT_MASS_ZERO:
        return 0.0
    if family is WeightFamily.DISCRETE_UNIFORM_PM1:
        return 1.0
    if family is WeightFamily.CONTINUOUS_UNIFORM:
        return 1.0 / 3.0
    if family is WeightFamily.TRIANGULAR:
        return 1.0 / 6.0
    if family is WeightFamily.INVERSE_TRIANGULAR:
        return 1.0 / 2.0
    # N(0, 1/9) conditioned on [-1, 1]; evaluated, never hard-coded.
    return 1.0 / 9.0 - 2.0 * norm.pdf(3.0) / (3.0 * (2.0 * norm.cdf(3.0) - 1.0))


def covariance_kind(model: WeightModel) -> int | None:
    """Covariance definition k generated by this model, if any.

    Shared-weight (scenario 2) models map to k = 2, 3 and independent-weight
    (scenario 1) models to k = 4..8; the degenerate point mass gives k = 1
    under either scenario. Combinations outside the catalogue return None.
    """
    fam = model.family
    if fam is WeightFamily.POINT_MASS_ZERO:
        return 1
    if model.scenario == 2:
        if fam is WeightFamily.DISCRETE_UNIFORM_PM1:
            return 2
        if fam is WeightFamily.CONTINUOUS_UNIFORM:
            return 3
        return None
    return {
        WeightFamily.DISCRETE_UNIFORM_PM1: 4,
        WeightFamily.CONTINUOUS_UNIFORM: 5,
        WeightFamily.INVERSE_TRIANGULAR: 6,
        WeightFamily.TRIANGULAR: 7,
        WeightFamily.TRUNCATED_NORMAL: 8,
    }[fam]


def derive_rng(seed: int, *labels) -> np.random.Generator:
    """Deterministic substream for (seed, labels): same inputs, same draws.

    Labels (small ints or strings) select independent streams off one seed;
    strings are folded to stable integers so the derivation does not depend
    on the process hash seed.
    """
    key = [int.from_bytes(str(x).encode(), "big") % (2**32) for x in labels]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def draw_weights(family: WeightFamily | str, rng: np.random.Generator, shape) -> np.ndarray:
    """Vectorized i.i.d. draws from a weight family; every draw is in [-1, 1]."""
    family = WeightFamily(family)
    if family is WeightFamily.POINT_MASS_ZERO:
        return np.zeros(shape)
    if family is WeightFamily.DISCRETE_UNIFORM_PM1:
        return rng.integers(0, 2, size=shape) * 2.0 - 1.0
    if family is WeightFamily.CONTINUOUS_UNIFORM:
        return rng.uniform(-1.0, 1.0, size=shape)
    if family is WeightFamily.TRIANGULAR:
        # Difference of two independent uniforms on [0, 1].
        return rng.random(shape) - rng.random(shape)
    if family is WeightFamily.INVERSE_TRIANGULAR:
        # Inverse CDF of the density |u| on [-1, 1].
        v = rng.uniform(-1.0, 1.0, size=shape)
        return np.sign(v) * np.sqrt(np.abs(v))
    # Truncated normal: rejection from N(0, 1/9) until |z| <= 1.
    z = np.asarray(rng.normal(0.0, 1.0 / 3.0, size=shape))
    flat = z.reshape(-1)
    bad = np.abs(flat) > 1.0
    while bad.any():
        flat[bad] = rng.normal(0.0, 1.0 / 3.0, size=int(bad.sum()))
        bad = np.abs(flat) > 1.0
    return z


def sample_weight(m: WeightModel, rng: np.random.Generator) -> float:
    """One draw of the latent weight."""
    return float(draw_weights(m.family, rng, ()))


def simulate_macrodata(
    params: PopulationParams,
    n: int,
    rng: np.random.Generator,
    variable_names: tuple[str, ...] | None = None,
) -> IntervalDataset:
    """Draw n macro objects: (C, R) jointly normal, negative ranges redrawn.

    Whole vectors with any negative range are rejected and redrawn (clamping
    would distort the range covariance unpredictably). The rejection rate is
    reported via a warning above 1% and the simulation aborts above 50%.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 objects, got {n}")
    p = params.p
    mean = np.concatenate([params.mu_c, params.mu_r])
    cross = params.cross_cr if params.cross_cr is not None else np.zeros((p, p))
    cov = np.block([[params.sigma_cc, cross], [cross.T, params.sigma_rr]])
    w = np.linalg.eigvalsh(cov)
    if w[0] < -1e-8 * max(float(np.trace(cov)), 1.0):
        raise ValueError(
            "joint (C, R) covariance is not positive semidefinite: "
            f"min eigenvalue {w[0]:.3e}; check cross_cr"
        )

    accepted = np.empty((0, 2 * p))
    drawn = 0
    while accepted.shape[0] < n:
        need = n - accepted.shape[0]
        batch = rng.multivariate_normal(mean, cov, size=need, check_valid="ignore")
        drawn += need
        keep = (batch[:, p:] >= 0.0).all(axis=1)
        accepted = np.vstack([accepted, batch[keep]])
        rejected = drawn - accepted.shape[0]
        if drawn >= max(200, n) and rejected / drawn > 0.5:
            raise InfeasibleError(
                f"rejected {rejected} of {drawn} draws (> 50%): the parameters "
                "imply frequent negative ranges; reduce sigma_rr or raise mu_r"
            )
    rejected = drawn - n
    if drawn > 0 and rejected / drawn > 0.01:
        warnings.warn(
            f"negative-range rejection: redrew {rejected} of {drawn} draws "
            f"({rejected / drawn:.1%}); range moments are mildly truncated",
            stacklevel=2,
        )
    names = variable_names if variable_names is not None else tuple(f"x{j + 1}" for j in range(p))
    ids = tuple(f"o{i + 1}" for i in range(n))
    return IntervalDataset(ids, names, accepted[:, :p], accepted[:, p:])


def simulate_microdata(
    macro: IntervalDataset,
    model: WeightModel,
    points_per_object: int,
    rng: np.random.Generator,
) -> MicroTable:
    """Emit micro points a = c + u * r/2 for every object and replicate.

    Rows are grouped by object (replicates consecutive), so aggregating the
    result visits groups in macro order. Under scenario 2 one weight is
    shared by all variables of a micro point; under scenario 1 each variable
    draws its own. Every emitted point lies in its object's hyper-rectangle.
    """
    if points_per_object < 1:
        raise ValueError(f"need at least one point per object, got {points_per_object}")
    n, p = macro.n, macro.p
    reps = points_per_object
    if model.scenario == 2:
        u = draw_weights(model.family, rng, (n, reps, 1))
    else:
        u = draw_weights(model.family, rng, (n, reps, p))
    half = macro.ranges * 0.5
    values = macro.centers[:, None, :] + u * half[:, None, :]
    group_ids = tuple(np.repeat(macro.object_ids, reps))
    return MicroTable(group_ids, macro.variable_names, values.reshape(n * reps, p))


@dataclass(frozen=True)
class WeightTable:
    """Recovered weights per micro row; NaN marks a missing (unusable) cell."""

    group_ids: tuple[str, ...]
    variable_names: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "group_ids", tuple(self.group_ids))
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def recover_weights(
    micro: MicroTable,
    macro: IntervalDataset,
    exclude_boundary: bool = False,
) -> WeightTable:
    """Invert the micro-data model: u = 2 (a - c) / r per cell.

    Cells with zero range are marked missing (a degenerate interval carries
    no weight information). With ``exclude_boundary`` any micro value that
    matches its group/variable min or max (to relative tolerance) is also
    marked missing: when the macro limits were computed from the very same
    micro rows, those extremes are pinned at u = +/-1 by construction and
    would distort a distribution fit.
    """
    if micro.variable_names != macro.variable_names:
        raise ValueError(
            f"variable names differ: micro {micro.variable_names} "
            f"vs macro {macro.variable_names}"
        )
    row_of = {g: i for i, g in enumerate(macro.object_ids)}
    idx = np.empty(micro.m, dtype=np.intp)
    for i, g in enumerate(micro.group_ids):
        if g not in row_of:
            raise ValueError(f"unknown group id {g!r} at micro row {i}")
        idx[i] = row_of[g]
    centers = macro.centers[idx]
    ranges = macro.ranges[idx]
    lower = centers - ranges * 0.5
    upper = centers + ranges * 0.5
    a = micro.values
    out_low = a < lower - CONTAINMENT_TOLERANCE
    out_high = a > upper + CONTAINMENT_TOLERANCE
    bad = np.argwhere(out_low | out_high)
    if bad.size:
        i, j = bad[0]
        raise ValueError(
            f"micro value {a[i, j]} at row {i}, column {j} lies outside its "
            f"macro interval [{lower[i, j]}, {upper[i, j]}]"
        )
    u = np.full(a.shape, np.nan)
    ok = ranges > 0.0
    u[ok] = 2.0 * (a[ok] - centers[ok]) / ranges[ok]
    np.clip(u, -1.0, 1.0, out=u)
    if exclude_boundary:
        for rows in micro.group_rows().values():
            block = a[rows]
            for m_extreme in (block.min(axis=0), block.max(axis=0)):
                scale = np.maximum(np.abs(block), np.abs(m_extreme))
                hit_r, hit_c = np.nonzero(np.abs(block - m_extreme) <= BOUNDARY_MATCH_RTOL * scale)
                u[rows[hit_r], hit_c] = np.nan
    return WeightTable(micro.group_ids, micro.variable_names, u)
