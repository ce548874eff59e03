"""Truncation-based compression schemes and their storage-ratio bookkeeping.

Three schemes are provided: a rank-k SVD of the slice-vectorized matricization
(the flattening baseline), keeping the k largest spectral f-diagonal entries
(truncation in the spectral domain), and keeping the k leading singular tubes
(truncation in the tube-product domain).  Ratios count retained factor entries
exactly, as rational numbers; no quantization or entropy coding is modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import as_tensor, fold_trailing_modes, frobenius_norm
from .decomposition import spectral_slice_svd, truncate_tubal, tsvd

METHODS = ("svd", "tsvd", "tsvd_tubal")


@dataclass(frozen=True)
class CompressionReport:
    """One compression measurement: scheme, truncation level, exact storage
    ratio, and reconstruction error in dB."""

    method: str
    k: int
    ratio: Fraction
    rse_db: float


def rse_db(rec, ref):
    """Relative square error in dB: ``20 log10(|rec - ref|_F / |ref|_F)``.

    An exact match returns ``-inf``; a zero reference is rejected.
    """
    rec = np.asarray(rec, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if rec.shape != ref.shape:
        raise ValueError(f"shape mismatch: {rec.shape} vs {ref.shape}")
    ref_norm = frobenius_norm(ref)
    if ref_norm == 0.0:
        raise ValueError("reference tensor is zero")
    err = frobenius_norm(rec - ref)
    if err == 0.0:
        return float("-inf")
    return 20.0 * math.log10(err / ref_norm)


def svd_ratio(dims, k1):
    """Storage ratio of the rank-k1 SVD of the n1*n2 x n3 matricization."""
    n1, n2, n3 = dims
    if not 1 <= k1 <= min(n1 * n2, n3):
        raise ValueError(f"k1 must be in [1, {min(n1 * n2, n3)}], got {k1}")
    return Fraction(n1 * n2 * n3, k1 * (n1 * n2 + n3 + 1))


def tsvd_ratio(dims, k2):
    """Storage ratio of keeping k2 spectral f-diagonal entries."""
    n1, n2, n3 = dims
    if not 1 <= k2 <= min(n1, n2) * n3:
        raise ValueError(f"k2 must be in [1, {min(n1, n2) * n3}], got {k2}")
    return Fraction(n1 * n2 * n3, k2 * (n1 + n2 + 1))


def tsvd_tubal_ratio(dims, k3):
    """Storage ratio of keeping k3 singular tubes."""
    n1, n2, n3 = dims
    if not 1 <= k3 <= min(n1, n2):
        raise ValueError(f"k3 must be in [1, {min(n1, n2)}], got {k3}")
    return Fraction(n1 * n2, k3 * (n1 + n2 + 1))


def _matricize(m):
    n1, n2, n3 = m.shape
    return m.reshape(n1 * n2, n3, order="F")


def compress_matrix_svd(m, k1, ref=None):
    """Rank-k1 truncated SVD of the matricization that stacks each vectorized
    frontal slice as a column."""
    m = as_tensor(m, order=3)
    ratio = svd_ratio(m.shape, k1)
    u, s, vt = np.linalg.svd(_matricize(m), full_matrices=False)
    rec = ((u[:, :k1] * s[:k1]) @ vt[:k1]).reshape(m.shape, order="F")
    report = CompressionReport("svd", k1, ratio, rse_db(rec, m if ref is None else ref))
    return rec, report


def top_fdiag_entries(values, count):
    """Boolean mask keeping the ``count`` largest entries of a (diag, slice)
    value table; ties keep the smaller (slice, diagonal) position."""
    k0, n3 = values.shape
    if not 1 <= count <= k0 * n3:
        raise ValueError(f"count must be in [1, {k0 * n3}], got {count}")
    diag_idx, slice_idx = np.meshgrid(np.arange(k0), np.arange(n3), indexing="ij")
    order = np.lexsort((diag_idx.ravel(), slice_idx.ravel(), -values.ravel()))
    mask = np.zeros(k0 * n3, dtype=bool)
    mask[order[:count]] = True
    return mask.reshape(k0, n3)


def compress_tsvd(m, k2, ref=None):
    """Keep the k2 largest spectral f-diagonal entries, zeroing the matching
    factor columns, and reconstruct."""
    m = as_tensor(m, order=3)
    ratio = tsvd_ratio(m.shape, k2)
    spectral, trailing = fold_trailing_modes(m)
    uhat, svals, vhat = spectral_slice_svd(spectral, trailing, full_matrices=False)
    kept = np.where(top_fdiag_entries(svals, k2), svals, 0.0)
    chat = np.matmul(
        (uhat * kept[np.newaxis, :, :]).transpose(2, 0, 1),
        vhat.conj().transpose(2, 1, 0),
    ).transpose(1, 2, 0)
    # The greedy selection may keep one slice of a conjugate pair and drop the
    # other, so the spectrum is not guaranteed symmetric; the approximation is
    # the real part of the inverse transform.
    rec = np.fft.ifft(chat, axis=2).real
    report = CompressionReport("tsvd", k2, ratio, rse_db(rec, m if ref is None else ref))
    return rec, report


def compress_tsvd_tubal(m, k3, ref=None):
    """Keep the k3 leading singular tubes of the factorization."""
    m = as_tensor(m, order=3)
    ratio = tsvd_tubal_ratio(m.shape, k3)
    rec = truncate_tubal(tsvd(m), k3)
    report = CompressionReport(
        "tsvd_tubal", k3, ratio, rse_db(rec, m if ref is None else ref)
    )
    return rec, report


_DISPATCH = {
    "svd": compress_matrix_svd,
    "tsvd": compress_tsvd,
    "tsvd_tubal": compress_tsvd_tubal,
}


def sweep(m, method, ks, ref=None):
    """One :class:`CompressionReport` per truncation level, ordered by ratio."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    reports = [_DISPATCH[method](m, int(k), ref=ref)[1] for k in ks]
    return sorted(reports, key=lambda r: r.ratio)
