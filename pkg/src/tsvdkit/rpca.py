"""Robust separation of a low-tubal-rank part from tube-sparse corruption,
plus the flattening baselines it is compared against.

The tensor solver splits ``M = L + S`` with a tensor-nuclear-norm penalty on
L and a (1,1,2)-norm penalty on S, so whole tubes of S are scaled or zeroed by
the proximal step.  The matrix baselines vectorize each frontal slice into a
column and run the classical nuclear-norm / l1 recursions on that matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from .completion import (
    SolveTrace,
    SolverConfig,
    _as_mask,
    _shrink_spectral,
    _svt_with_values,
)
from .core import as_tensor, fold_trailing_modes, unfold_trailing_modes
from .errors import DimensionError


@dataclass
class RpcaTrace(SolveTrace):
    """Solve history with the sparse-part norm alongside feasibility and the
    nuclear objective."""

    sparse_norms: list[float] = field(default_factory=list)


@dataclass
class RpcaResult:
    """Low-rank and sparse parts of a separation, with the solve history."""

    low_rank: np.ndarray
    sparse: np.ndarray
    trace: RpcaTrace


def default_lambda(n1, n2):
    """Sparsity weight ``1 / sqrt(max(n1, n2))``.

    For the tensor solver pass the frame extents; for the matrix baseline pass
    the matricization extents (n1*n2, n3).
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("extents must be positive")
    return 1.0 / math.sqrt(max(n1, n2))


def l112_norm(s):
    """Sum over (i, j) of the Frobenius norms of the tubes ``s[i, j, :]``."""
    s = as_tensor(s, order=3)
    return float(np.linalg.norm(s, axis=2).sum())


def _tube_shrink_with_norm(d, threshold):
    norms = np.linalg.norm(d, axis=2)
    safe = np.where(norms > 0, norms, 1.0)
    scale = np.where(norms > threshold, 1.0 - threshold / safe, 0.0)
    post = np.maximum(norms - threshold, 0.0)
    return d * scale[:, :, np.newaxis], float(post.sum())


def tube_shrink_l112(d, threshold):
    """Scale each tube by ``(1 - threshold / |tube|_F)_+``.

    Tubes whose norm is at most ``threshold`` become exactly zero; this is the
    proximal map of ``threshold * sum_ij |.(i,j,:)|_F``.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    d = as_tensor(d, order=3)
    return _tube_shrink_with_norm(d, threshold)[0]


def soft_threshold(x, threshold):
    """Entrywise shrink toward zero by ``threshold``."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


def rpca_tensor(m, lam=None, cfg=None):
    """Split ``m`` into a low-tubal-rank part and a tube-sparse part.

    Parameters
    ----------
    m : array_like
        Order-3 tensor to separate.
    lam : float, optional
        Weight on the tube-sparsity term; defaults to
        ``1 / sqrt(max(n1, n2))``.
    cfg : SolverConfig, optional

    Returns
    -------
    RpcaResult
        Parts satisfying ``low_rank + sparse ~= m`` at the stopping tolerance.
    """
    m = as_tensor(m, order=3)
    if lam is None:
        lam = default_lambda(m.shape[0], m.shape[1])
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cfg = cfg if cfg is not None else SolverConfig()

    tau_l = 1.0 / cfg.penalty
    tau_s = lam / cfg.penalty
    denom = float(np.linalg.norm(m.ravel())) or 1.0
    change_denom = max(1.0, denom)
    low = m.copy()
    sparse = np.zeros_like(m)
    w = np.zeros_like(m)
    trace = RpcaTrace()

    for _ in range(cfg.max_iters):
        t0 = perf_counter()
        spectral, trailing = fold_trailing_modes(m - sparse - w)
        shrunk, tnn_low = _shrink_spectral(spectral, trailing, tau_l)
        low_new = unfold_trailing_modes(shrunk, trailing)
        sparse_new, l112_sparse = _tube_shrink_with_norm(m - low_new - w, tau_s)
        w = w + low_new + sparse_new - m
        feasibility = float(np.linalg.norm((low_new + sparse_new - m).ravel())) / denom
        change = (
            float(np.linalg.norm((low_new - low).ravel()))
            + float(np.linalg.norm((sparse_new - sparse).ravel()))
        ) / change_denom
        low, sparse = low_new, sparse_new
        trace.residuals.append(feasibility)
        trace.objectives.append(tnn_low)
        trace.sparse_norms.append(l112_sparse)
        trace.seconds.append(perf_counter() - t0)
        if feasibility < cfg.tol and change < cfg.tol:
            trace.converged = True
            break
    return RpcaResult(low_rank=low, sparse=sparse, trace=trace)


def synth_tube_sparse(dims, fraction, sigma, block_len, seed=None):
    """Tube-sparse noise whose support is redrawn once per block of frames.

    Mode 3 is cut into blocks of ``block_len`` frames (the last block may be
    short); within each block, ``floor(fraction * n1 * n2)`` pixel positions
    are chosen and their tube segments filled with N(0, sigma^2) noise.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise DimensionError(f"dims must have order 3, got {len(dims)}")
    n1, n2, n3 = dims
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if not 1 <= block_len <= n3:
        raise ValueError(f"block_len must be in [1, {n3}], got {block_len}")
    rng = np.random.default_rng(seed)
    out = np.zeros(dims)
    per_block = int(fraction * n1 * n2)
    for start in range(0, n3, block_len):
        stop = min(start + block_len, n3)
        if per_block == 0:
            continue
        flat = rng.choice(n1 * n2, size=per_block, replace=False)
        i, j = np.unravel_index(flat, (n1, n2))
        out[i, j, start:stop] = sigma * rng.standard_normal((per_block, stop - start))
    return out


def _matricize(m):
    n1, n2, n3 = m.shape
    return m.reshape(n1 * n2, n3, order="F")


def rpca_matrix_baseline(m, lambda_opt=None, cfg=None):
    """Matrix robust PCA on the slice-vectorized matricization.

    The L-update soft-thresholds singular values of the real n1*n2 x n3
    matrix, the S-update soft-thresholds entries; lambda defaults to
    ``1 / sqrt(max(n1*n2, n3))``.
    """
    m = as_tensor(m, order=3)
    n1, n2, n3 = m.shape
    lam = lambda_opt if lambda_opt is not None else default_lambda(n1 * n2, n3)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    cfg = cfg if cfg is not None else SolverConfig()

    mat = _matricize(m)
    tau_l = 1.0 / cfg.penalty
    tau_s = lam / cfg.penalty
    denom = float(np.linalg.norm(mat.ravel())) or 1.0
    change_denom = max(1.0, denom)
    low = mat.copy()
    sparse = np.zeros_like(mat)
    w = np.zeros_like(mat)
    trace = RpcaTrace()

    for _ in range(cfg.max_iters):
        t0 = perf_counter()
        low_new, values = _svt_with_values(mat - sparse - w, tau_l)
        sparse_new = soft_threshold(mat - low_new - w, tau_s)
        w = w + low_new + sparse_new - mat
        feasibility = float(np.linalg.norm(low_new + sparse_new - mat)) / denom
        change = (
            float(np.linalg.norm(low_new - low))
            + float(np.linalg.norm(sparse_new - sparse))
        ) / change_denom
        low, sparse = low_new, sparse_new
        trace.residuals.append(feasibility)
        trace.objectives.append(float(values.sum()))
        trace.sparse_norms.append(float(np.abs(sparse).sum()))
        trace.seconds.append(perf_counter() - t0)
        if feasibility < cfg.tol and change < cfg.tol:
            trace.converged = True
            break
    return RpcaResult(
        low_rank=low.reshape(m.shape, order="F"),
        sparse=sparse.reshape(m.shape, order="F"),
        trace=trace,
    )


def complete_matrix_baseline(observed, mask, cfg=None):
    """Nuclear-norm completion of the slice-vectorized matricization.

    Same ADMM skeleton as the tensor completion solver, with the whole
    matricization shrunk as a single block.  Returns the completed tensor and
    the solve history.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    observed = as_tensor(observed, order=3, name="observed tensor")
    mask = _as_mask(mask)
    if mask.dims != observed.shape:
        raise DimensionError(
            f"mask dims {mask.dims} do not match tensor dims {observed.shape}"
        )
    if mask.count == 0:
        raise ValueError("mask observes no entries")

    ind = _matricize(mask.indicator)
    obs = np.where(ind, _matricize(observed), 0.0)
    scale = max(1.0, float(np.linalg.norm(obs)))
    tau = 1.0 / cfg.penalty
    z = obs.copy()
    q = np.zeros_like(obs)
    trace = SolveTrace()
    best = z
    best_residual = np.inf

    for _ in range(cfg.max_iters):
        t0 = perf_counter()
        x = np.where(ind, obs, z - q)
        z, values = _svt_with_values(x + q, tau)
        q = q + (x - z)
        residual = float(np.linalg.norm(x - z)) / scale
        trace.residuals.append(residual)
        trace.objectives.append(float(values.sum()))
        trace.seconds.append(perf_counter() - t0)
        if residual < best_residual:
            best_residual = residual
            best = z
        if residual < cfg.tol:
            trace.converged = True
            break
    result = (z if trace.converged else best).reshape(observed.shape, order="F")
    return result, trace
