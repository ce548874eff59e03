"""Tubal singular value factorization and the rank measures built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    as_spectral,
    as_tensor,
    conjugate_partners,
    fold_trailing_modes,
    t_product,
    t_transpose,
    unfold_trailing_modes,
)
from .errors import DimensionError, NumericalError

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class TSvdFactors:
    """Orthogonal * f-diagonal * orthogonal factorization of a tensor.

    ``u`` is n1 x n1 x ..., ``s`` is n1 x n2 x ... with every frontal slice
    diagonal, ``v`` is n2 x n2 x ...; the input is ``u * s * t_transpose(v)``.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class MultiRank:
    """Per-spectral-slice matrix ranks and the threshold used to count them."""

    p: np.ndarray
    tol: float


def _svd_batch(mats, full_matrices):
    try:
        return np.linalg.svd(mats, full_matrices=full_matrices)
    except np.linalg.LinAlgError:
        return None


def spectral_slice_svd(spectral, trailing_dims, full_matrices=True):
    """SVD of every frontal spectral slice, mirroring conjugate partners.

    Only the canonical half of the frequencies is factored; the partner slice
    is the elementwise conjugate, which keeps the stacked factors exactly
    conjugate symmetric (so their inverse transforms are real).  Self-paired
    frequencies carry a real slice and are factored with a real SVD for the
    same reason.

    Returns ``(uhat, svals, vhat)`` with ``uhat[:, :, j] @ diag(svals[:, j])
    @ vhat[:, :, j].conj().T`` reproducing slice j.
    """
    spectral = as_spectral(spectral)
    n1, n2, rho = spectral.shape
    k = min(n1, n2)
    ku = n1 if full_matrices else k
    kv = n2 if full_matrices else k
    partners = conjugate_partners(trailing_dims)
    order = np.arange(rho)
    canonical = partners >= order
    selfconj = partners == order

    uhat = np.empty((n1, ku, rho), dtype=np.complex128)
    vhat = np.empty((n2, kv, rho), dtype=np.complex128)
    svals = np.empty((k, rho))
    stacked = spectral.transpose(2, 0, 1)

    for mask, real_input in ((canonical & ~selfconj, False), (selfconj, True)):
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        mats = stacked[idx].real if real_input else stacked[idx]
        out = _svd_batch(mats, full_matrices)
        if out is None:
            # redo one at a time so the failing slice can be named
            for j in idx:
                mat = stacked[j].real if real_input else stacked[j]
                if _svd_batch(mat, full_matrices) is None:
                    raise NumericalError(f"SVD failed on spectral slice {j}")
            raise NumericalError("SVD failed on a spectral slice")
        u, s, vh = out
        uhat[:, :, idx] = u.transpose(1, 2, 0)
        svals[:, idx] = s.T
        vhat[:, :, idx] = vh.conj().transpose(2, 1, 0)

    mirrored = np.nonzero(~canonical)[0]
    if mirrored.size:
        src = partners[mirrored]
        uhat[:, :, mirrored] = uhat[:, :, src].conj()
        vhat[:, :, mirrored] = vhat[:, :, src].conj()
        svals[:, mirrored] = svals[:, src]
    return uhat, svals, vhat


def tsvd(m):
    """Factor ``m`` into orthogonal, f-diagonal, orthogonal parts.

    Parameters
    ----------
    m : array_like
        Real tensor of order >= 3.  Orders above 3 are transformed along every
        trailing mode and factored slice by slice in that flattened spectral
        domain, then unfolded back.

    Returns
    -------
    TSvdFactors
        Factors ``(u, s, v)`` with ``reconstruct`` reproducing ``m``; the
        spectral diagonal of ``s`` is real, nonnegative and nonincreasing.
    """
    m = as_tensor(m, min_order=3)
    spectral, trailing = fold_trailing_modes(m)
    n1, n2, rho = spectral.shape
    uhat, svals, vhat = spectral_slice_svd(spectral, trailing, full_matrices=True)
    shat = np.zeros((n1, n2, rho), dtype=np.complex128)
    diag = np.arange(min(n1, n2))
    shat[diag, diag, :] = svals
    return TSvdFactors(
        u=unfold_trailing_modes(uhat, trailing),
        s=unfold_trailing_modes(shat, trailing),
        v=unfold_trailing_modes(vhat, trailing),
    )


def _check_factors(f):
    u, s, v = f.u, f.s, f.v
    if u.ndim != s.ndim or v.ndim != s.ndim or s.ndim < 3:
        raise DimensionError("factor orders are inconsistent")
    if (
        u.shape[0] != u.shape[1]
        or v.shape[0] != v.shape[1]
        or u.shape[0] != s.shape[0]
        or v.shape[0] != s.shape[1]
        or u.shape[2:] != s.shape[2:]
        or v.shape[2:] != s.shape[2:]
    ):
        raise DimensionError(
            f"factor shapes {u.shape}, {s.shape}, {v.shape} are inconsistent"
        )


def reconstruct(f):
    """``u * s * v^T`` for a :class:`TSvdFactors` triple."""
    _check_factors(f)
    return t_product(t_product(f.u, f.s), t_transpose(f.v))


def truncate_tubal(f, k):
    """Keep the first ``k`` singular tubes of the factorization.

    Returns the sum of the leading ``k`` outer tube products, which is the
    best Frobenius approximation among all t-products with inner extent ``k``.
    """
    _check_factors(f)
    n1, n2 = f.s.shape[0], f.s.shape[1]
    if not 1 <= k <= min(n1, n2):
        raise ValueError(f"k must be in [1, {min(n1, n2)}], got {k}")
    u = f.u[:, :k]
    s = f.s[:k, :k]
    v = f.v[:, :k]
    return t_product(t_product(u, s), t_transpose(v))


def _spectral_singular_values(a):
    """Singular values of every spectral frontal slice, as a (k, rho) array."""
    spectral, _ = fold_trailing_modes(a)
    svals = np.linalg.svd(spectral.transpose(2, 0, 1), compute_uv=False)
    return svals.T


def multi_rank(a, tol=DEFAULT_RANK_TOL):
    """Rank of each spectral frontal slice.

    A singular value counts toward the rank when it exceeds ``tol`` times the
    largest singular value over all slices.
    """
    a = as_tensor(a, min_order=3)
    if tol <= 0:
        raise ValueError("tol must be positive")
    svals = _spectral_singular_values(a)
    smax = svals.max(initial=0.0)
    return MultiRank(p=(svals > tol * smax).sum(axis=0), tol=tol)


def tubal_rank(a, tol=DEFAULT_RANK_TOL):
    """Number of singular tubes with non-negligible energy.

    Counts the diagonal tubes of ``s`` whose Frobenius norm exceeds ``tol``
    times the norm of the whole f-diagonal factor (computed spectrally via
    Parseval, so no inverse transform is needed).
    """
    a = as_tensor(a, min_order=3)
    svals = _spectral_singular_values(a)
    rho = svals.shape[1]
    tube_norms = np.sqrt((svals**2).sum(axis=1) / rho)
    total = np.sqrt((svals**2).sum() / rho)
    return int((tube_norms > tol * total).sum())


def tnn(a):
    """Tensor nuclear norm: the sum of the singular values of every spectral
    frontal slice (equal to the nuclear norm of their block-diagonal stack)."""
    a = as_tensor(a, min_order=3)
    return float(_spectral_singular_values(a).sum())


def blkdiag(s):
    """Block-diagonal matrix holding the frontal slices of a spectral tensor
    in slice order."""
    s = as_spectral(s)
    n1, n2, n3 = s.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=np.complex128)
    for j in range(n3):
        out[j * n1 : (j + 1) * n1, j * n2 : (j + 1) * n2] = s[:, :, j]
    return out


def shifted_frames(n, frames, seed=None):
    """Video of a random n x n image cyclically shifted down one row per frame.

    With ``frames == n`` every spectral slice is a rank-one outer product, so
    the tensor has multi-rank all ones and tubal rank one: the panning-camera
    structure that tube convolution captures exactly.
    """
    if n < 1 or frames < 1:
        raise ValueError("n and frames must be positive")
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((n, n))
    return np.stack([np.roll(base, k, axis=0) for k in range(frames)], axis=2)
