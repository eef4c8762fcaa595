"""Third-order tensors and the Fourier-domain Schatten p-norm machinery.

A third-order tensor is a plain ``numpy.ndarray`` of shape ``(n1, n2, n3)``.
Frontal slice ``k`` is ``t[:, :, k]`` (an ``n1 x n2`` matrix) and lateral
slice ``j`` is ``t[:, j, :]`` (an ``n1 x n3`` matrix). The multi-view
clustering tensors stack one per-view matrix per lateral slice, so their
frontal slices are ``n x V`` matrices indexed by cluster.

The DFT along the third mode is unnormalized in the forward direction and
carries the ``1/n3`` factor in the inverse, matching ``numpy.fft``. Under
that convention ``||X||_F^2 = ||fft(X)||_F^2 / n3``, which is why
:func:`schatten_prox` scales its threshold by ``n3`` on every slice.
"""

import numpy as np

from .errors import ConjugateSymmetryViolation, InvalidP, InvalidTau

IMAG_TOL = 1e-8
GST_TOL = 1e-12
GST_MAX_ITER = 100


def as_tensor3(t, dtype=float):
    t = np.asarray(t, dtype=dtype)
    if t.ndim != 3 or 0 in t.shape:
        raise ValueError(f"expected a non-empty 3rd-order tensor, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("tensor has non-finite entries")
    return t


def frontal_slice(t, k):
    return t[:, :, k]


def lateral_slice(t, j):
    return t[:, j, :]


def stack_lateral(mats):
    """Build an ``n1 x len(mats) x n3`` tensor whose lateral slices are ``mats``."""
    return np.stack([np.asarray(m, dtype=float) for m in mats], axis=1)


def _check_p(p):
    if not (0.0 < p <= 1.0):
        raise InvalidP(f"p must lie in (0, 1], got {p}")


def _check_tau(tau):
    if not tau > 0.0:
        raise InvalidTau(f"tau must be positive, got {tau}")


def dft_dim3(t):
    """Unnormalized forward DFT of every mode-3 fiber."""
    return np.fft.fft(as_tensor3(t), axis=2)


def idft_dim3(t, atol=IMAG_TOL):
    """Inverse DFT along mode 3, returning the real part.

    Raises
    ------
    ConjugateSymmetryViolation
        If the largest imaginary magnitude of the inverse exceeds ``atol``.
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim != 3:
        raise ValueError(f"expected a 3rd-order tensor, got shape {t.shape}")
    out = np.fft.ifft(t, axis=2)
    residue = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if residue > atol:
        raise ConjugateSymmetryViolation(
            f"imaginary residue {residue:.3e} exceeds tolerance {atol:.1e}"
        )
    return np.ascontiguousarray(out.real)


def _half_spectrum(n3):
    # Slices 0..n3//2 determine the rest through conjugate symmetry.
    return range(n3 // 2 + 1)


def singular_spectra(t):
    """Singular values (descending) of every DFT-domain frontal slice.

    Returns an ``(n3, min(n1, n2))`` array; row ``k`` is the spectrum of
    slice ``k``.
    """
    tf = dft_dim3(t)
    n1, n2, n3 = tf.shape
    out = np.empty((n3, min(n1, n2)))
    for k in _half_spectrum(n3):
        out[k] = np.linalg.svd(tf[:, :, k], compute_uv=False)
        # conj(A) has the same singular values as A
        if 0 < k < n3 - k:
            out[n3 - k] = out[k]
    return out


def schatten_p_norm(t, p):
    """Tensor Schatten p-norm ``(sum_k sum_j sigma_j(fft(t)_k)^p)^(1/p)``.

    The regularizer in the clustering objective is the p-th power of this.
    """
    _check_p(p)
    spectra = singular_spectra(t)
    return float(np.sum(spectra**p) ** (1.0 / p))


def gst_threshold(tau, p):
    """Smallest input for which the generalized soft-threshold is non-zero."""
    if p == 1.0:
        return tau
    base = 2.0 * tau * (1.0 - p)
    return base ** (1.0 / (2.0 - p)) + tau * p * base ** ((p - 1.0) / (2.0 - p))


def gst_scalar(sigma, tau, p):
    """Global minimizer of ``0.5 * (d - sigma)**2 + tau * d**p`` over ``d >= 0``.

    For ``p == 1`` this is the ordinary soft threshold ``max(sigma - tau, 0)``.
    Otherwise values at or below the closed-form threshold map to zero and
    the rest are found by the fixed-point iteration
    ``d <- sigma - tau * p * d**(p - 1)`` started at ``sigma``.
    """
    _check_p(p)
    _check_tau(tau)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if p == 1.0:
        return max(sigma - tau, 0.0)
    if sigma <= gst_threshold(tau, p):
        return 0.0
    delta = float(sigma)
    for _ in range(GST_MAX_ITER):
        nxt = sigma - tau * p * delta ** (p - 1.0)
        if abs(nxt - delta) < GST_TOL:
            delta = nxt
            break
        delta = nxt
    return delta


def gst(sigma, tau, p):
    """Vectorised :func:`gst_scalar` over an array of singular values."""
    _check_p(p)
    _check_tau(tau)
    sigma = np.asarray(sigma, dtype=float)
    if p == 1.0:
        return np.maximum(sigma - tau, 0.0)
    out = np.zeros_like(sigma)
    active = sigma > gst_threshold(tau, p)
    if not np.any(active):
        return out
    s = sigma[active]
    delta = s.copy()
    for _ in range(GST_MAX_ITER):
        nxt = s - tau * p * delta ** (p - 1.0)
        done = np.max(np.abs(nxt - delta)) < GST_TOL
        delta = nxt
        if done:
            break
    out[active] = delta
    return out


def schatten_prox(z, tau, p):
    """Proximal map of ``tau * ||X||_Sp^p``.

    Solves ``min_X 0.5 * ||X - z||_F^2 + tau * ||X||_Sp^p`` by shrinking the
    singular values of each DFT-domain frontal slice with threshold
    ``tau * n3``.
    """
    _check_p(p)
    _check_tau(tau)
    zf = dft_dim3(z)
    n3 = zf.shape[2]
    eff = tau * n3
    xf = np.zeros_like(zf)
    for k in _half_spectrum(n3):
        sl = zf[:, :, k]
        if k == 0 or 2 * k == n3:
            # self-conjugate slices are real; a real SVD keeps them exactly so
            sl = sl.real
        u, s, vh = np.linalg.svd(sl, full_matrices=False)
        d = gst(s, eff, p)
        keep = d > 0
        if np.any(keep):
            xf[:, :, k] = (u[:, keep] * d[keep]) @ vh[keep]
        if 0 < k < n3 - k:
            xf[:, :, n3 - k] = np.conj(xf[:, :, k])
    return idft_dim3(xf)


def schatten_prox_objective(x, z, tau, p):
    """``0.5 * ||x - z||_F^2 + tau * ||x||_Sp^p``; used to sanity-check the prox."""
    return 0.5 * float(np.sum((x - z) ** 2)) + tau * schatten_p_norm(x, p) ** p
