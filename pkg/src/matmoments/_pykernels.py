"""Pure numpy implementations of the inner loops.

Same signatures as the compiled ``_ckernels`` module; used whenever the
extension is unavailable or ``MATMOMENTS_PURE_PYTHON`` is set.
"""
import numpy as np


def circle_moments(thetas, weights, m):
    """Gamma_k = sum_j exp(i k theta_j) W_j for k = 0..m, shape (m+1, p, p)."""
    thetas = np.asarray(thetas, dtype=float)
    weights = np.asarray(weights, dtype=complex)
    k = np.arange(m + 1)
    phases = np.exp(1j * np.outer(k, thetas))
    return np.einsum("kj,jab->kab", phases, weights)


def interval_moments(xs, weights, n):
    """S_k = sum_j x_j^k W_j for k = 0..n, shape (n+1, p, p)."""
    xs = np.asarray(xs, dtype=float)
    weights = np.asarray(weights, dtype=complex)
    powers = np.ones((n + 1, xs.size))
    for k in range(1, n + 1):
        powers[k] = powers[k - 1] * xs
    return np.einsum("kj,jab->kab", powers, weights)


def polyval(coeffs, zs):
    """Horner evaluation of a matrix polynomial at many points.

    `coeffs` has shape (n+1, p, q), lowest degree first; returns (len(zs), p, q).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    zs = np.asarray(zs, dtype=complex)
    out = np.broadcast_to(coeffs[-1], (zs.size,) + coeffs.shape[1:]).copy()
    for c in coeffs[-2::-1]:
        out *= zs[:, None, None]
        out += c
    return out
