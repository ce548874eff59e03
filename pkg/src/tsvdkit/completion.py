"""Entry completion by tensor-nuclear-norm penalized ADMM.

The solver alternates a least-squares projection onto the observed entries, a
spectral-domain singular value shrinkage (the proximal map of the tensor
nuclear norm), and a dual ascent step.  The observed entries are enforced
exactly at every iteration by the projection, never by a penalty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from .core import (
    as_tensor,
    conjugate_partners,
    fold_trailing_modes,
    idft_mode3,
    t_product,
    t_transpose,
    unfold_trailing_modes,
)
from .decomposition import TSvdFactors, _check_factors
from .errors import DimensionError, NumericalError


class SamplingMask:
    """Indicator of observed entries with observed-count bookkeeping."""

    def __init__(self, indicator):
        indicator = np.asarray(indicator)
        if indicator.ndim < 2:
            raise DimensionError(
                f"mask must have order >= 2, got {indicator.ndim}"
            )
        if indicator.dtype != np.bool_:
            if not np.isin(indicator, (0, 1)).all():
                raise ValueError("mask entries must be 0 or 1")
            indicator = indicator.astype(bool)
        self.indicator = indicator
        self.count = int(indicator.sum())

    @property
    def dims(self):
        return self.indicator.shape

    def __eq__(self, other):
        return isinstance(other, SamplingMask) and np.array_equal(
            self.indicator, other.indicator
        )


def _as_mask(mask):
    return mask if isinstance(mask, SamplingMask) else SamplingMask(mask)


@dataclass
class SolverConfig:
    """ADMM hyperparameters shared by the completion and separation solvers."""

    penalty: float = 1.0
    tol: float = 1e-6
    max_iters: int = 1000
    seed: int | None = None

    def __post_init__(self):
        if self.penalty <= 0:
            raise ValueError("penalty must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class SolveTrace:
    """Per-iteration residual/objective/wall-time history of one solve."""

    residuals: list[float] = field(default_factory=list)
    objectives: list[float] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return len(self.residuals)


def sample_mask(dims, rate, seed=None):
    """Observe each entry independently with probability ``rate``.

    Deterministic for a fixed seed.
    """
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    rng = np.random.default_rng(seed)
    return SamplingMask(rng.random(tuple(int(d) for d in dims)) < rate)


def project_onto_observations(candidate, observed, mask):
    """Replace the observed entries of ``candidate`` with the observed values:
    the closed-form least-squares projection onto the sampling constraint."""
    candidate = np.asarray(candidate, dtype=np.float64)
    observed = np.asarray(observed, dtype=np.float64)
    mask = _as_mask(mask)
    if candidate.shape != observed.shape or candidate.shape != mask.dims:
        raise DimensionError(
            f"shape mismatch: candidate {candidate.shape}, observed "
            f"{observed.shape}, mask {mask.dims}"
        )
    return np.where(mask.indicator, observed, candidate)


def _svt_with_values(w, tau):
    try:
        u, s, vh = np.linalg.svd(w, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("SVD failed during singular value shrinkage") from exc
    shrunk = np.maximum(s - tau, 0.0)
    return (u * shrunk[..., np.newaxis, :]) @ vh, shrunk


def svt(w, tau):
    """Soft-threshold the singular values of a real or complex matrix.

    Minimizes ``0.5 * |X - w|_F^2 + tau * |X|_*`` over X.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    w = np.asarray(w)
    if w.ndim != 2:
        raise DimensionError(f"expected a matrix, got order {w.ndim}")
    return _svt_with_values(w, tau)[0]


def _shrink_spectral(spectral, trailing_dims, tau):
    """SVT every spectral slice, mirroring conjugate partners.

    Returns the shrunk spectral tensor together with the nuclear norm of its
    block-diagonal stack, i.e. the tensor nuclear norm of the result.
    """
    n1, n2, rho = spectral.shape
    partners = conjugate_partners(trailing_dims)
    order = np.arange(rho)
    canonical = partners >= order
    selfconj = partners == order
    stacked = spectral.transpose(2, 0, 1)
    out = np.empty_like(stacked)
    slice_sums = np.zeros(rho)

    for mask, real_input in ((canonical & ~selfconj, False), (selfconj, True)):
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        mats = stacked[idx].real if real_input else stacked[idx]
        shrunk, values = _svt_with_values(mats, tau)
        out[idx] = shrunk
        slice_sums[idx] = values.sum(axis=-1)

    mirrored = np.nonzero(~canonical)[0]
    if mirrored.size:
        out[mirrored] = out[partners[mirrored]].conj()
        slice_sums[mirrored] = slice_sums[partners[mirrored]]
    return out.transpose(1, 2, 0), float(slice_sums.sum())


def shrink_slicewise(t, tau):
    """Shrink the singular values of every spectral frontal slice by ``tau``.

    This is the proximal map used in the nuclear-term update: transform the
    trailing modes, soft-threshold each slice's singular values, transform
    back.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    t = as_tensor(t, min_order=3)
    spectral, trailing = fold_trailing_modes(t)
    shrunk, _ = _shrink_spectral(spectral, trailing, tau)
    return unfold_trailing_modes(shrunk, trailing)


def tubal_shrink(f, tau):
    """Shrink a factorization by convolving each singular tube with a
    threshold tube.

    Builds the f-diagonal tensor T whose ith diagonal tube is the inverse
    transform of ``(1 - tau / shat(i,i,j))_+`` (zero where the spectral entry
    is zero) and returns ``u * (s * T) * v^T``: the original-domain equivalent
    of slicewise singular value shrinkage.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    _check_factors(f)
    s = as_tensor(f.s, order=3, name="f-diagonal factor")
    n1, n2, n3 = s.shape
    k = min(n1, n2)
    diag = s[np.arange(k), np.arange(k), :]
    shat = np.fft.fft(diag, axis=1).real
    safe = np.where(shat > 0, shat, 1.0)
    factors = np.where(shat > 0, np.maximum(1.0 - tau / safe, 0.0), 0.0)
    that = np.zeros((n2, n2, n3), dtype=np.complex128)
    that[np.arange(k), np.arange(k), :] = factors
    thresh = idft_mode3(that)
    return t_product(t_product(f.u, t_product(s, thresh)), t_transpose(f.v))


def complete_tnn(observed, mask, cfg=None):
    """Recover a tensor from sampled entries by TNN-penalized ADMM.

    Parameters
    ----------
    observed : array_like
        Tensor holding the observed values (entries off the mask are ignored
        and treated as zero).
    mask : SamplingMask or array_like
        Indicator of the observed entries; must observe at least one entry.
    cfg : SolverConfig, optional
        Penalty, stopping tolerance, and iteration cap.

    Returns
    -------
    (ndarray, SolveTrace)
        The recovered tensor and the per-iteration history.  If the solver
        hits the iteration cap, the iterate with the smallest residual is
        returned and ``trace.converged`` is False.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    observed = as_tensor(observed, min_order=3, name="observed tensor")
    mask = _as_mask(mask)
    if mask.dims != observed.shape:
        raise DimensionError(
            f"mask dims {mask.dims} do not match tensor dims {observed.shape}"
        )
    if mask.count == 0:
        raise ValueError("mask observes no entries")

    ind = mask.indicator
    obs = np.where(ind, observed, 0.0)
    scale = max(1.0, float(np.linalg.norm(obs.ravel())))
    tau = 1.0 / cfg.penalty
    z = obs.copy()
    q = np.zeros_like(obs)
    trace = SolveTrace()
    best = z
    best_residual = np.inf

    for _ in range(cfg.max_iters):
        t0 = perf_counter()
        x = np.where(ind, obs, z - q)
        spectral, trailing = fold_trailing_modes(x + q)
        shrunk, objective = _shrink_spectral(spectral, trailing, tau)
        z = unfold_trailing_modes(shrunk, trailing)
        q = q + (x - z)
        residual = float(np.linalg.norm((x - z).ravel())) / scale
        trace.residuals.append(residual)
        trace.objectives.append(objective)
        trace.seconds.append(perf_counter() - t0)
        if residual < best_residual:
            best_residual = residual
            best = z
        if residual < cfg.tol:
            trace.converged = True
            break
    return (z if trace.converged else best), trace


def synth_low_tubal_rank(dims, r, seed=None):
    """t-product of two independent standard normal factors with inner
    extent ``r``: a generic tensor of tubal rank ``r``."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 3:
        raise DimensionError(f"dims must have order >= 3, got {len(dims)}")
    n1, n2 = dims[0], dims[1]
    if not 1 <= r <= min(n1, n2):
        raise ValueError(f"r must be in [1, {min(n1, n2)}], got {r}")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n1, r) + dims[2:])
    y = rng.standard_normal((r, n2) + dims[2:])
    return t_product(x, y)
