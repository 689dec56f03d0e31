"""Bidiagonal beta-Laguerre sampler and a bisection eigensolver for its hard edge.

The ensemble with joint eigenvalue density proportional to

.. math::

    \\prod_{i<j}|\\lambda_i - \\lambda_j|^\\beta
    \\prod_i \\lambda_i^{\\frac{\\beta}{2}(m-n+1)-1} e^{-\\frac{\\beta}{2}\\lambda_i}

is realised as the spectrum of :math:`BB^T/\\beta` for a lower bidiagonal ``B``
with independent chi entries, ``B[i, i] ~ chi_{beta (m - i + 1)}`` and
``B[i+1, i] ~ chi_{beta (n - i)}`` (1-indexed), where ``m = n + a`` may be real.

Singular values of ``B`` are computed by Sturm-sequence bisection on the
``2n x 2n`` Golub–Kahan matrix (zero diagonal, off-diagonal
``d_1, s_1, d_2, ..., d_n``), whose eigenvalues are ``+-sigma_i``.  Bisection on
this form determines small singular values to high relative accuracy, which is
what the hard edge needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .errors import DomainError, EigensolverError
from .noise import NoiseDriver, map_blocks
from .sde import CountSample, ModelParams

N_GUIDELINE = 40.0
_REL_TOL = 1e-13
_MAX_BISECT = 200


@dataclass
class BidiagonalEnsemble:
    """A sampled lower bidiagonal factor.

    ``diagonal[i]`` and ``subdiagonal[i]`` are 0-indexed from the top-left.
    """

    n: int
    m_param: float
    beta: float
    diagonal: np.ndarray
    subdiagonal: np.ndarray

    def __post_init__(self):
        self.diagonal = np.asarray(self.diagonal, dtype=float)
        self.subdiagonal = np.asarray(self.subdiagonal, dtype=float)
        if self.diagonal.shape != (self.n,) or self.subdiagonal.shape != (max(self.n - 1, 0),):
            raise DomainError("diagonal must have n entries and subdiagonal n - 1")
        if np.any(self.diagonal < 0) or np.any(self.subdiagonal < 0):
            raise DomainError("bidiagonal entries must be nonnegative")

    def dense(self) -> np.ndarray:
        """The ``n x n`` lower bidiagonal matrix."""
        return np.diag(self.diagonal) + np.diag(self.subdiagonal, -1)

    def golub_kahan_offdiagonal(self) -> np.ndarray:
        off = np.empty(2 * self.n - 1)
        off[0::2] = self.diagonal
        off[1::2] = self.subdiagonal
        return off


@dataclass
class OracleSpectrum:
    """Smallest eigenvalues of ``B B^T / beta`` and their hard-edge coordinates ``sqrt(n lambda)``."""

    eigenvalues: np.ndarray
    scaled_points: np.ndarray
    n: int = field(default=0)


def _validate(n, a, beta):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"beta must be positive, got {beta}")
    if not (math.isfinite(a) and a > -1):
        raise DomainError(f"a must exceed -1, got {a}")


def _chi_dofs(n, a, beta):
    """Chi parameters in draw order: bottom diagonal, then alternating sub/diagonal upwards."""
    dof = np.empty(2 * n - 1)
    j = np.arange(n)
    dof[0::2] = beta * (a + j + 1.0)
    dof[1::2] = beta * j[1:]
    return dof


def _draw_entries(gen, n, a, beta):
    x = np.sqrt(gen.chisquare(_chi_dofs(n, a, beta)))
    return x[0::2][::-1].copy(), x[1::2][::-1].copy()


def sample_beta_laguerre(n: int, a: float, beta: float, noise: NoiseDriver) -> BidiagonalEnsemble:
    """Sample the bidiagonal factor of an ``n``-point beta-Laguerre ensemble with ``m = n + a``.

    Entries are drawn from the bottom-right corner upwards, so the first
    ``2k - 1`` draws of a stream form the trailing ``k x k`` block for every
    ``n >= k``.  Ensembles of different sizes built from one stream therefore
    share their bottom-right corner.
    """
    _validate(n, a, beta)
    d, s = _draw_entries(noise.generator(), int(n), float(a), float(beta))
    return BidiagonalEnsemble(int(n), n + a, float(beta), d, s)


def _sigma_counts(off2, n, x):
    """``#{sigma < x}`` per row; ``off2`` is (B, 2n - 1) squared Golub–Kahan off-diagonals, ``x`` is (B, T)."""
    pivmin = np.finfo(float).tiny * np.maximum(1.0, off2.max(axis=1, initial=0.0))[:, None]
    q = -x
    cnt = (q < 0).astype(np.int64)
    for k in range(off2.shape[1]):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = -x - off2[:, k:k + 1] / q
        cnt += q < 0
    return cnt - n


def _smallest_sigmas(off, n, k):
    """Bisection for the ``k`` smallest singular values of each row's bidiagonal."""
    off = np.atleast_2d(off)
    off2 = off * off
    bound = 2.0 * np.sqrt(off2.max(axis=1, initial=0.0)) + 1.0
    lo = np.zeros((off.shape[0], k))
    hi = np.repeat(bound[:, None], k, axis=1)
    target = np.arange(1, k + 1)
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        c = _sigma_counts(off2, n, mid)
        below = c >= target
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all((hi - lo <= _REL_TOL * hi) | (hi <= 1e-300)):
            return 0.5 * (lo + hi)
    raise EigensolverError("bisection did not converge", [(float(l), float(h)) for l, h in zip(lo.ravel(), hi.ravel())])


def smallest_eigenvalues(ens: BidiagonalEnsemble, k: int) -> OracleSpectrum:
    """The ``k`` smallest eigenvalues of ``B B^T / beta`` and their scaled points ``sqrt(n lambda)``."""
    if int(k) != k or not 1 <= k <= ens.n:
        raise DomainError(f"k must lie in [1, n], got {k}")
    sig = _smallest_sigmas(ens.golub_kahan_offdiagonal(), ens.n, int(k))[0]
    lam = sig * sig / ens.beta
    return OracleSpectrum(lam, np.sqrt(ens.n * lam), ens.n)


def oracle_count(n: int, params: ModelParams, noise: NoiseDriver) -> CountSample:
    """Number of hard-edge scaled points ``sqrt(n lambda_k)`` in ``[0, params.lam]``.

    A single Sturm count at ``sigma = lam sqrt(beta / n)`` replaces a full
    eigenvalue computation.  Samples with ``n < 40 lam^2`` carry a warning.
    """
    _validate(n, params.a, params.beta)
    ens = sample_beta_laguerre(n, params.a, params.beta, noise)
    value = _count_at(ens.golub_kahan_offdiagonal()[None, :], int(n), params.beta, [params.lam])[0, 0]
    warnings = ()
    if n < N_GUIDELINE * params.lam ** 2:
        warnings = (f"n={n} below guideline {N_GUIDELINE:g} lambda^2 = {N_GUIDELINE * params.lam ** 2:g}",)
    return CountSample(int(value), "bess", params, "matrix_oracle", True, warnings=warnings)


def _count_at(off, n, beta, lams):
    x = np.asarray(lams, dtype=float)[None, :] * math.sqrt(beta / n)
    x = np.repeat(x, off.shape[0], axis=0)
    c = _sigma_counts(off * off, n, x)
    return np.where(x > 0, c, 0)


def _oracle_block(n, a, beta, lams, master_seed, indices):
    off = np.empty((len(indices), 2 * n - 1))
    for r, i in enumerate(indices):
        d, s = _draw_entries(NoiseDriver(master_seed, int(i)).generator(), n, a, beta)
        off[r, 0::2] = d
        off[r, 1::2] = s
    return _count_at(off, n, beta, lams).T


def oracle_counts(n: int, beta: float, a: float, lams, n_samples: int, master_seed: int,
                  first_index: int = 0) -> np.ndarray:
    """Oracle counts at each ``lam`` (rows) for ``n_samples`` consecutive streams (columns)."""
    _validate(n, a, beta)
    lams = [float(v) for v in np.atleast_1d(lams)]
    if any(not (math.isfinite(v) and v >= 0) for v in lams):
        raise DomainError("lambda must be nonnegative")
    idx = np.arange(first_index, first_index + n_samples, dtype=np.int64)
    res = map_blocks(partial(_oracle_block, int(n), float(a), float(beta), lams, master_seed), idx)
    if not res:
        return np.zeros((len(lams), 0), dtype=np.int64)
    return np.concatenate(res, axis=1).astype(np.int64)
