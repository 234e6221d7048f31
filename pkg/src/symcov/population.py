"""Population-level symbolic covariance and correlation matrices.

The macro-data law is described by the first and second moments of the
center vector C and range vector R: mean vectors mu_c, mu_r and covariance
matrices sigma_cc, sigma_rr. The second raw moment matrix E[R R^t] =
sigma_rr + mu_r mu_r^t is the single conversion point feeding every range
term.

An optional cross-covariance block Cov(C, R) can be carried for simulation;
it never enters any symbolic covariance matrix. That is deliberate: none of
the eight definitions can detect center-range association.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stats import CovKind, SymmetricMatrix, cov_kind

#: Relative eigenvalue slack (times trace) accepted when checking PSD blocks.
PSD_TOLERANCE = 1e-10


def _check_psd(m: np.ndarray, name: str) -> None:
    tol = PSD_TOLERANCE * max(float(np.trace(m)), 1.0)
    w = np.linalg.eigvalsh(m)
    if w[0] < -tol:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {w[0]:.3e})")


@dataclass(frozen=True)
class PopulationParams:
    """Macro-data moments (mu_c, sigma_cc, mu_r, sigma_rr[, cross_cr]).

    cross_cr[i, j] = Cov(C_i, R_j); stored for simulation only.
    """

    mu_c: np.ndarray = field(repr=False)
    sigma_cc: np.ndarray = field(repr=False)
    mu_r: np.ndarray = field(repr=False)
    sigma_rr: np.ndarray = field(repr=False)
    cross_cr: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        mu_c = np.array(self.mu_c, dtype=np.float64).reshape(-1)
        mu_r = np.array(self.mu_r, dtype=np.float64).reshape(-1)
        sigma_cc = np.array(self.sigma_cc, dtype=np.float64)
        sigma_rr = np.array(self.sigma_rr, dtype=np.float64)
        p = mu_c.size
        if p < 1:
            raise ValueError("population must have p >= 1 variables")
        if mu_r.size != p:
            raise ValueError(f"mu_r has length {mu_r.size}, expected {p}")
        for name, m in (("sigma_cc", sigma_cc), ("sigma_rr", sigma_rr)):
            if m.shape != (p, p):
                raise ValueError(f"{name} must have shape ({p}, {p}), got {m.shape}")
            if not np.isfinite(m).all():
                raise ValueError(f"{name} has non-finite entries")
            if not np.allclose(m, m.T, rtol=0.0, atol=0.0):
                raise ValueError(f"{name} must be symmetric")
            _check_psd(m, name)
        if not (np.isfinite(mu_c).all() and np.isfinite(mu_r).all()):
            raise ValueError("mean vectors must be finite")
        cross = self.cross_cr
        if cross is not None:
            cross = np.array(cross, dtype=np.float64)
            if cross.shape != (p, p):
                raise ValueError(f"cross_cr must have shape ({p}, {p}), got {cross.shape}")
            if not np.isfinite(cross).all():
                raise ValueError("cross_cr has non-finite entries")
            cross.setflags(write=False)
        for arr in (mu_c, mu_r, sigma_cc, sigma_rr):
            arr.setflags(write=False)
        object.__setattr__(self, "mu_c", mu_c)
        object.__setattr__(self, "mu_r", mu_r)
        object.__setattr__(self, "sigma_cc", sigma_cc)
        object.__setattr__(self, "sigma_rr", sigma_rr)
        object.__setattr__(self, "cross_cr", cross)

    @property
    def p(self) -> int:
        return self.mu_c.size


def expected_rr(params: PopulationParams) -> SymmetricMatrix:
    """Second raw moment of the ranges: sigma_rr + mu_r mu_r^t."""
    return SymmetricMatrix(params.sigma_rr + np.outer(params.mu_r, params.mu_r))


def _cov_entries(params: PopulationParams, kd: CovKind) -> np.ndarray:
    err = expected_rr(params).entries
    out = params.sigma_cc + kd.cov_weight * err
    np.fill_diagonal(out, np.diagonal(params.sigma_cc) + kd.var_weight * np.diagonal(err))
    return out


def population_cov_matrix(params: PopulationParams, kind: CovKind | int) -> SymmetricMatrix:
    """Population symbolic covariance matrix for definition k.

    sigma_cc plus the weighted range second-moment matrix: the full matrix
    weighted by cov_weight off the diagonal, var_weight on it (so k = 1..3
    add a multiple of E[R R^t], while k = 4..8 only correct the diagonal).
    """
    return SymmetricMatrix(_cov_entries(params, cov_kind(kind)))


def population_cor_matrix(params: PopulationParams, kind: CovKind | int) -> SymmetricMatrix:
    """Population symbolic correlation matrix for definition k.

    Entry (j, l) is cov_k(X_j, X_l) / sqrt(var_k(X_j) var_k(X_l)) with the
    cross weight in the numerator; as in the sample version the diagonal is
    exactly 1 for k = 1, 2, 3 and at most 1 for k >= 4. Entries are clipped
    into [-1, 1] against floating-point excursions.
    """
    kd = cov_kind(kind)
    err = expected_rr(params).entries
    variances = np.diagonal(params.sigma_cc) + kd.var_weight * np.diagonal(err)
    for j, v in enumerate(variances):
        if v <= 0.0:
            raise ValueError(f"zero symbolic variance in coordinate {j} for k={kd.k}")
    num = params.sigma_cc + kd.cov_weight * err
    denom = np.sqrt(np.outer(variances, variances))
    return SymmetricMatrix(np.clip(num / denom, -1.0, 1.0))


def pairwise_cov(params: PopulationParams, j: int, l: int, kind: CovKind | int) -> float:
    """Scalar view: entry (j, l) of population_cov_matrix, bit-identical."""
    return float(population_cov_matrix(params, kind).entries[j, l])


def pairwise_cor(params: PopulationParams, j: int, l: int, kind: CovKind | int) -> float:
    """Scalar view: entry (j, l) of population_cor_matrix, bit-identical."""
    return float(population_cor_matrix(params, kind).entries[j, l])
