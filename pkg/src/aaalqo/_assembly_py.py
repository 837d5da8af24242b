"""Pure-numpy assembly kernels for the divided-difference matrices.

Mirrors the compiled lane in _assembly_cy; aaalqo.assembly picks one at
import time.  All inputs are complex128 arrays; row layouts use 0-based
flattened indices alpha_ij = i*m + j (m = number of LS points, n = number
of support points), beta_kl = k*n + l and gamma_ji = j*n + i.
"""

from __future__ import annotations

import numpy as np


def loewner_1d(shat, hhat, xi, h):
    """L[i, k] = (hhat_i - h_k) / (shat_i - xi_k), shape (m, n)."""
    return (hhat[:, None] - h[None, :]) / (shat[:, None] - xi[None, :])


def loewner_12(shat, xi, hmat, h2_sup_ls):
    """Rows alpha_ij = i*m + j over (support i, LS j), columns l.

    Entry (alpha_ij, l) = (h2_sup_ls[i, j] - hmat[i, l]) / (shat_j - xi_l);
    shape (n*m, n).
    """
    n = xi.size
    m = shat.size
    D = shat[:, None] - xi[None, :]
    out = (h2_sup_ls[:, :, None] - hmat[:, None, :]) / D[None, :, :]
    return out.reshape(n * m, n)


def loewner_21(shat, xi, hmat, h2_ls_sup):
    """Rows gamma_ji = j*n + i over (LS j, support i), columns k.

    Entry (gamma_ji, k) = (h2_ls_sup[j, i] - hmat[k, i]) / (shat_j - xi_k);
    shape (m*n, n).
    """
    n = xi.size
    m = shat.size
    D = shat[:, None] - xi[None, :]
    out = (h2_ls_sup[:, :, None] - hmat.T[None, :, :]) / D[:, None, :]
    return out.reshape(m * n, n)


def loewner_2d(shat, xi, hmat, h2_ls_ls):
    """Rows alpha_ij = i*m + j over LS pairs, columns beta_kl = k*n + l.

    Entry = (h2_ls_ls[i, j] - hmat[k, l]) / ((shat_i - xi_k)(shat_j - xi_l));
    shape (m*m, n*n).
    """
    n = xi.size
    m = shat.size
    D = shat[:, None] - xi[None, :]
    out = np.empty((m * m, n * n), dtype=complex)
    # row-block loop keeps peak memory at one (m, n, n) slab
    for i in range(m):
        block = (h2_ls_ls[i, :, None, None] - hmat[None, :, :]) / (
            D[i][None, :, None] * D[:, None, :]
        )
        out[i * m : (i + 1) * m] = block.reshape(m, n * n)
    return out


def u_matrix(shat, xi, h2_ls_ls):
    """U[alpha_ij, k] = h2_ls_ls[i, j] (shat_i + shat_j - 2 xi_k) /
    ((shat_i - xi_k)(shat_j - xi_k)); shape (m*m, n).
    """
    n = xi.size
    m = shat.size
    D = shat[:, None] - xi[None, :]
    num = shat[:, None, None] + shat[None, :, None] - 2.0 * xi[None, None, :]
    out = h2_ls_ls[:, :, None] * num / (D[:, None, :] * D[None, :, :])
    return out.reshape(m * m, n)
