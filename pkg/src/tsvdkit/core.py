"""Dense tensor algebra where tubes multiply by circular convolution.

A third-order tensor is treated as a matrix of tubes (mode-3 fibers).  All
products are computed in the spectral domain: an unnormalized DFT along every
tube turns tube convolution into per-slice complex matrix multiplication, and
the inverse transform (scaled by 1/n3) returns to the real domain.  Tensors of
order N > 3 are handled by transforming every trailing mode and flattening
them into one spectral mode of extent n3*n4*...*nN.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, SymmetryError

# Relative bound on the imaginary residue tolerated when returning to the real
# domain.  A larger residue means the spectrum was not conjugate symmetric,
# i.e. not the transform of any real tensor.
IMAG_RESIDUE_RTOL = 1e-9


def as_tensor(a, order=None, min_order=2, name="tensor"):
    """Validate ``a`` as a real tensor and return it as a float64 array.

    Rejects complex data, non-finite entries, and wrong orders.
    """
    if np.iscomplexobj(a):
        raise ValueError(f"{name} must be real valued")
    arr = np.asarray(a, dtype=np.float64)
    if order is not None and arr.ndim != order:
        raise DimensionError(f"{name} must have order {order}, got {arr.ndim}")
    if arr.ndim < min_order:
        raise DimensionError(f"{name} must have order >= {min_order}, got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_spectral(s, name="spectrum"):
    """Validate ``s`` as an order-3 complex spectral tensor."""
    arr = np.asarray(s, dtype=np.complex128)
    if arr.ndim != 3:
        raise DimensionError(f"{name} must have order 3, got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _to_real(w, ref_norm):
    """Drop the imaginary residue of ``w`` if it is negligible against
    ``ref_norm``, else raise :class:`SymmetryError`."""
    residue = np.linalg.norm(w.imag.ravel())
    if residue > IMAG_RESIDUE_RTOL * ref_norm:
        raise SymmetryError(
            "imaginary residue %.3e exceeds %.1e of the spectrum norm %.3e; "
            "the input is not the spectrum of a real tensor"
            % (residue, IMAG_RESIDUE_RTOL, ref_norm)
        )
    return np.ascontiguousarray(w.real)


def dft_mode3(t):
    """Unnormalized DFT of every tube ``t[i, j, :]`` of an order-3 tensor."""
    t = as_tensor(t, order=3)
    return np.fft.fft(t, axis=2)


def idft_mode3(s):
    """Inverse of :func:`dft_mode3` (scaled by 1/n3 per tube).

    The result must be real: if the imaginary residue exceeds
    ``IMAG_RESIDUE_RTOL`` times the Frobenius norm of ``s``, the input was not
    conjugate symmetric and :class:`SymmetryError` is raised.
    """
    s = as_spectral(s)
    return _to_real(np.fft.ifft(s, axis=2), np.linalg.norm(s.ravel()))


def fold_trailing_modes(t):
    """Transform modes 3..N and flatten them into a single spectral mode.

    Returns ``(spectral, trailing_dims)`` where ``spectral`` is the complex
    ``n1 x n2 x rho`` image of ``t`` (``rho`` is the product of the trailing
    extents, enumerated with mode 3 varying fastest) and ``trailing_dims``
    records the original extents for :func:`unfold_trailing_modes`.

    For an order-3 input this is exactly :func:`dft_mode3`.
    """
    t = as_tensor(t, min_order=3)
    spectral = t.astype(np.complex128)
    for axis in range(2, t.ndim):
        spectral = np.fft.fft(spectral, axis=axis)
    trailing = t.shape[2:]
    rho = int(np.prod(trailing))
    return (
        np.reshape(spectral, (t.shape[0], t.shape[1], rho), order="F"),
        trailing,
    )


def unfold_trailing_modes(spectral, trailing_dims):
    """Invert :func:`fold_trailing_modes`: restore the trailing modes and apply
    the inverse transforms, returning a real tensor."""
    spectral = as_spectral(spectral)
    trailing = tuple(int(d) for d in trailing_dims)
    if int(np.prod(trailing)) != spectral.shape[2]:
        raise DimensionError(
            f"trailing dims {trailing} do not flatten to extent {spectral.shape[2]}"
        )
    w = np.reshape(spectral, spectral.shape[:2] + trailing, order="F")
    for axis in range(2, w.ndim):
        w = np.fft.ifft(w, axis=axis)
    return _to_real(w, np.linalg.norm(spectral.ravel()))


def conjugate_partners(trailing_dims):
    """Flat spectral index of the conjugate-frequency partner for every
    flattened trailing-mode frequency.

    For a real tensor, spectral slice j and slice ``partners[j]`` are
    elementwise complex conjugates; ``partners[j] == j`` marks the real
    (self-conjugate) frequencies.
    """
    trailing = tuple(int(d) for d in trailing_dims)
    multi = np.unravel_index(np.arange(int(np.prod(trailing))), trailing, order="F")
    partner = tuple((d - m) % d for m, d in zip(multi, trailing))
    return np.ravel_multi_index(partner, trailing, order="F")


def tube_circ_conv(a, b):
    """Circular convolution of two equal-length tubes by the direct sum
    ``c[k] = sum_m a[m] * b[(k - m) mod n]``.

    Quadratic in the tube length on purpose: this is the reference definition
    of the tube product, independent of any transform.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionError(f"tube lengths differ: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    c = np.zeros(n)
    for k in range(n):
        for m in range(n):
            c[k] += a[m] * b[(k - m) % n]
    return c


def t_product(a, b):
    """Tensor-tensor product where tube multiplication is circular convolution.

    ``a`` is ``n1 x n2 x n3 (x ...)`` and ``b`` is ``n2 x n4 x n3 (x ...)``
    with identical trailing extents; the result is ``n1 x n4 x n3 (x ...)``.
    Computed by transforming the trailing modes, multiplying the frontal
    slices pairwise, and transforming back.
    """
    a = as_tensor(a, min_order=3, name="left factor")
    b = as_tensor(b, min_order=3, name="right factor")
    if a.ndim != b.ndim or a.shape[1] != b.shape[0] or a.shape[2:] != b.shape[2:]:
        raise DimensionError(f"cannot t-multiply {a.shape} by {b.shape}")
    ahat, trailing = fold_trailing_modes(a)
    bhat, _ = fold_trailing_modes(b)
    chat = np.matmul(ahat.transpose(2, 0, 1), bhat.transpose(2, 0, 1))
    return unfold_trailing_modes(chat.transpose(1, 2, 0), trailing)


def t_transpose(a):
    """Transpose every frontal slice and reverse the slice order along each
    trailing mode (slice 1 stays put, slice k swaps with slice n+2-k)."""
    a = as_tensor(a, min_order=3)
    out = np.swapaxes(a, 0, 1)
    for axis in range(2, out.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return np.ascontiguousarray(out)


def identity_tensor(n1, n3):
    """Order-3 identity for the t-product: first frontal slice is the n1 x n1
    identity matrix, all other slices zero."""
    if n1 < 1 or n3 < 1:
        raise ValueError("identity extents must be positive")
    eye = np.zeros((n1, n1, n3))
    eye[:, :, 0] = np.eye(n1)
    return eye


def _identity_like(n, ndim, trailing):
    e = np.zeros((n, n) + trailing)
    e[(slice(None), slice(None)) + (0,) * (ndim - 2)] = np.eye(n)
    return e


def is_orthogonal(q, tol=1e-9):
    """True iff both q^T * q and q * q^T match the identity tensor within
    ``tol`` in Frobenius norm."""
    q = as_tensor(q, min_order=3)
    if q.shape[0] != q.shape[1]:
        raise DimensionError(f"frontal slices must be square, got {q.shape}")
    eye = _identity_like(q.shape[0], q.ndim, q.shape[2:])
    qt = t_transpose(q)
    left = np.linalg.norm((t_product(qt, q) - eye).ravel())
    right = np.linalg.norm((t_product(q, qt) - eye).ravel())
    return bool(left <= tol and right <= tol)


def frobenius_norm(t):
    """Square root of the sum of squared entries (any order, real or complex)."""
    arr = np.asarray(t)
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor contains non-finite entries")
    return float(np.linalg.norm(arr.ravel()))
