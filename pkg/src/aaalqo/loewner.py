"""Divided-difference matrices and the two-stage weight least-squares solve.

For a partition of the sampling points into support points xi_k and LS
points shat_i, the residuals of the barycentric fit, after clearing
denominators, are linear (or bilinear) in the weights.  The matrices built
here collect those linearized residuals:

    L   [i, k]              = (h1hat_i - h_k) / (shat_i - xi_k)
    L12 [alpha_ij, l]       = (h2(xi_i, shat_j) - Hmat[i, l]) / (shat_j - xi_l)
    L21 [gamma_ji, k]       = (h2(shat_j, xi_i) - Hmat[k, i]) / (shat_j - xi_k)
    L22 [alpha_ij, beta_kl] = (h2(shat_i, shat_j) - Hmat[k, l])
                              / ((shat_i - xi_k)(shat_j - xi_l))
    U   [alpha_ij, k]       = h2(shat_i, shat_j) (shat_i + shat_j - 2 xi_k)
                              / ((shat_i - xi_k)(shat_j - xi_k))

with 0-based flattened row maps alpha_ij = i*m + j, beta_kl = k*n + l,
gamma_ji = j*n + i (m = #LS points, n = #support points).  Stage 1 solves
the linear blocks for provisional weights; stage 2 freezes one weight
factor of the bilinear block (T = L22 (w1 kron I) + U) and re-solves the
full stack.  Residual sums are weighted by rho1 = 1/m, rho2 = 1/(m n),
rho3 = 1/m^2 so each block contributes per-entry-normalized error.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np

from . import assembly
from .barycentric import BarycentricLqo
from .errors import DegenerateProblemError

RHO_MODES = ("sqrt_both", "matrix_only")


def alpha_index(i, j, m):
    """Flattened row of the (support-or-LS i, LS j) pair blocks."""
    return i * m + j


def beta_index(k, l, n):
    """Flattened column of the (support k, support l) pair in L22."""
    return k * n + l


def gamma_index(j, i, n):
    """Flattened row of the (LS j, support i) pair block."""
    return j * n + i


def alpha_unindex(a, m):
    return divmod(a, m)


def beta_unindex(b, n):
    return divmod(b, n)


def gamma_unindex(g, n):
    return divmod(g, n)


@dataclass(frozen=True)
class Partition:
    """Disjoint ordered index sets: support points and LS points."""

    support_idx: tuple
    ls_idx: tuple

    def __init__(self, support_idx, ls_idx):
        support = tuple(int(i) for i in support_idx)
        ls = tuple(int(i) for i in ls_idx)
        ns = len(support) + len(ls)
        if set(support) & set(ls):
            raise ValueError("support and LS index sets overlap")
        if set(support) | set(ls) != set(range(ns)):
            raise ValueError("partition must cover indices 0..Ns-1 exactly once")
        object.__setattr__(self, "support_idx", support)
        object.__setattr__(self, "ls_idx", ls)

    @classmethod
    def from_support(cls, ns, support_idx):
        """LS set = remaining indices in their natural order."""
        chosen = set(int(i) for i in support_idx)
        return cls(support_idx, [i for i in range(ns) if i not in chosen])

    @property
    def n(self):
        return len(self.support_idx)

    @property
    def m(self):
        return len(self.ls_idx)


@dataclass
class LoewnerBlocks:
    """All stacked-LS ingredients for one partition."""

    L: np.ndarray
    L12: np.ndarray
    L21: np.ndarray
    L22: np.ndarray
    U: np.ndarray
    rhs_h: np.ndarray
    rhs_h12: np.ndarray
    rhs_h21: np.ndarray
    rhs_h22: np.ndarray
    rho1: float
    rho2: float
    rho3: float


def _partition_views(samples, partition):
    sup = np.asarray(partition.support_idx, dtype=int)
    ls = np.asarray(partition.ls_idx, dtype=int)
    if partition.n < 1:
        raise ValueError("partition needs at least one support point")
    if partition.m < 1:
        raise ValueError("partition needs at least one LS point")
    pts = samples.points
    return {
        "xi": np.ascontiguousarray(pts[sup]),
        "shat": np.ascontiguousarray(pts[ls]),
        "h": np.ascontiguousarray(samples.h1[sup]),
        "hhat": np.ascontiguousarray(samples.h1[ls]),
        "hmat": np.ascontiguousarray(samples.h2[np.ix_(sup, sup)]),
        "h2_sup_ls": np.ascontiguousarray(samples.h2[np.ix_(sup, ls)]),
        "h2_ls_sup": np.ascontiguousarray(samples.h2[np.ix_(ls, sup)]),
        "h2_ls_ls": np.ascontiguousarray(samples.h2[np.ix_(ls, ls)]),
    }


def build_loewner_1d(samples, partition):
    """(L, rhs) for the linear block; rhs holds the uninterpolated h1 values."""
    v = _partition_views(samples, partition)
    L = assembly.loewner_1d(v["shat"], v["hhat"], v["xi"], v["h"])
    return L, v["hhat"].copy()


def build_loewner_12(samples, partition):
    """(L12, rhs) for the (support, LS) mixed block of h2."""
    v = _partition_views(samples, partition)
    L12 = assembly.loewner_12(v["shat"], v["xi"], v["hmat"], v["h2_sup_ls"])
    return L12, v["h2_sup_ls"].reshape(-1).copy()


def build_loewner_21(samples, partition):
    """(L21, rhs) for the (LS, support) mixed block of h2."""
    v = _partition_views(samples, partition)
    L21 = assembly.loewner_21(v["shat"], v["xi"], v["hmat"], v["h2_ls_sup"])
    return L21, v["h2_ls_sup"].reshape(-1).copy()


def build_loewner_2d(samples, partition):
    """(L22, rhs) for the bilinear (LS, LS) block of h2."""
    v = _partition_views(samples, partition)
    L22 = assembly.loewner_2d(v["shat"], v["xi"], v["hmat"], v["h2_ls_ls"])
    return L22, v["h2_ls_ls"].reshape(-1).copy()


def build_U(samples, partition):
    """The order-one companion of L22 absorbing the shared-weight terms."""
    v = _partition_views(samples, partition)
    return assembly.u_matrix(v["shat"], v["xi"], v["h2_ls_ls"])


def build_blocks(samples, partition):
    """Assemble every block plus the per-entry normalization weights."""
    v = _partition_views(samples, partition)
    n = partition.n
    m = partition.m
    return LoewnerBlocks(
        L=assembly.loewner_1d(v["shat"], v["hhat"], v["xi"], v["h"]),
        L12=assembly.loewner_12(v["shat"], v["xi"], v["hmat"], v["h2_sup_ls"]),
        L21=assembly.loewner_21(v["shat"], v["xi"], v["hmat"], v["h2_ls_sup"]),
        L22=assembly.loewner_2d(v["shat"], v["xi"], v["hmat"], v["h2_ls_ls"]),
        U=assembly.u_matrix(v["shat"], v["xi"], v["h2_ls_ls"]),
        rhs_h=v["hhat"].copy(),
        rhs_h12=v["h2_sup_ls"].reshape(-1).copy(),
        rhs_h21=v["h2_ls_sup"].reshape(-1).copy(),
        rhs_h22=v["h2_ls_ls"].reshape(-1).copy(),
        rho1=1.0 / m,
        rho2=1.0 / (m * n),
        rho3=1.0 / m**2,
    )


def min_norm_lstsq(A, rhs):
    """Minimum-norm least-squares solution with SVD cutoff max(dim) * eps."""
    rcond = max(A.shape) * np.finfo(float).eps
    return np.linalg.lstsq(A, rhs, rcond=rcond)[0]


def _stack(blocks, rho_mode, with_T=None):
    if rho_mode not in RHO_MODES:
        raise ValueError(f"rho_mode must be one of {RHO_MODES}")
    if rho_mode == "sqrt_both":
        f1, f2, f3 = np.sqrt(blocks.rho1), np.sqrt(blocks.rho2), np.sqrt(blocks.rho3)
        g1, g2, g3 = f1, f2, f3
    else:
        # the literal stacked form: rho on the matrix blocks, rhs unscaled
        f1, f2, f3 = blocks.rho1, blocks.rho2, blocks.rho3
        g1 = g2 = g3 = 1.0
    mats = [f1 * blocks.L, f2 * blocks.L12, f2 * blocks.L21]
    rhss = [g1 * blocks.rhs_h, g2 * blocks.rhs_h12, g2 * blocks.rhs_h21]
    if with_T is not None:
        mats.append(f3 * with_T)
        rhss.append(g3 * blocks.rhs_h22)
    return np.vstack(mats), np.concatenate(rhss)


def solve_stage1(blocks, rho_mode="sqrt_both"):
    """Provisional weights from the weight-linear blocks only."""
    A, rhs = _stack(blocks, rho_mode)
    if not A.any():
        raise DegenerateProblemError("stage-1 stacked matrix is identically zero")
    return min_norm_lstsq(A, -rhs)


def build_T(blocks, w1):
    """T = L22 (w1 kron I) + U via a column-block contraction of L22."""
    w1 = np.asarray(w1, dtype=complex).ravel()
    n = blocks.U.shape[1]
    if w1.shape != (n,):
        raise ValueError(f"w1 must have length {n}, got {w1.shape}")
    rows = blocks.L22.shape[0]
    L22r = blocks.L22.reshape(rows, n, n)
    return np.tensordot(L22r, w1, axes=([1], [0])) + blocks.U


def solve_stage2(blocks, T, rho_mode="sqrt_both"):
    """Final weights from the full stack with the frozen-factor block T."""
    A, rhs = _stack(blocks, rho_mode, with_T=T)
    if not A.any():
        raise DegenerateProblemError("stage-2 stacked matrix is identically zero")
    w = min_norm_lstsq(A, -rhs)
    if np.any(w == 0):
        warnings.warn(
            "stage-2 solution contains exactly zero weights; the barycentric"
            " interpolation property fails at those support points",
            stacklevel=2,
        )
    return w


def relaxed_objective(blocks, w):
    """The quadraticized objective value at w (with w kron w, no freezing)."""
    w = np.asarray(w, dtype=complex).ravel()
    r1 = blocks.L @ w + blocks.rhs_h
    r12 = blocks.L12 @ w + blocks.rhs_h12
    r21 = blocks.L21 @ w + blocks.rhs_h21
    r22 = blocks.L22 @ np.kron(w, w) + blocks.U @ w + blocks.rhs_h22
    return float(
        blocks.rho1 * np.sum(np.abs(r1) ** 2)
        + blocks.rho2 * (np.sum(np.abs(r12) ** 2) + np.sum(np.abs(r21) ** 2))
        + blocks.rho3 * np.sum(np.abs(r22) ** 2)
    )


def true_objective(samples, partition, w):
    """The four non-relaxed residual sums (J1, J2, J3, J4) at weights w.

    J1 sums |H1 - r1|^2 over LS points; J2 and J3 sum |H2 - r2|^2 over the
    mixed (support, LS) and (LS, support) grids via the closed forms linear
    in w; J4 sums over the (LS, LS) grid via the factored bivariate form.
    Each sum carries its rho normalization.  A vanishing barycentric
    denominator at an LS point makes the affected terms infinite.
    """
    v = _partition_views(samples, partition)
    w = np.asarray(w, dtype=complex).ravel()
    if w.shape != (partition.n,):
        raise ValueError(f"w must have length {partition.n}")
    rho1 = 1.0 / partition.m
    rho2 = 1.0 / (partition.m * partition.n)
    rho3 = 1.0 / partition.m**2
    C = 1.0 / (v["shat"][:, None] - v["xi"][None, :])
    den = 1.0 + C @ w
    bad = den == 0
    if bad.any():
        warnings.warn(
            f"barycentric denominator vanished at LS point"
            f" {complex(v['shat'][np.flatnonzero(bad)[0]])}; affected terms are"
            " infinite",
            stacklevel=2,
        )
    den_safe = np.where(bad, 1.0, den)
    wh = w * v["h"]
    r1 = (C @ wh) / den_safe
    res1 = np.abs(v["hhat"] - r1) ** 2
    mixed_l = ((v["hmat"] * w[None, :]) @ C.T) / den_safe[None, :]
    res2 = np.abs(v["h2_sup_ls"] - mixed_l) ** 2
    mixed_r = (C @ (w[:, None] * v["hmat"])) / den_safe[:, None]
    res3 = np.abs(v["h2_ls_sup"] - mixed_r) ** 2
    r2 = (C @ (w[:, None] * v["hmat"] * w[None, :]) @ C.T) / (
        den_safe[:, None] * den_safe[None, :]
    )
    res4 = np.abs(v["h2_ls_ls"] - r2) ** 2
    if bad.any():
        res1[bad] = np.inf
        res2[:, bad] = np.inf
        res3[bad, :] = np.inf
        res4[bad, :] = np.inf
        res4[:, bad] = np.inf
    return (
        float(rho1 * res1.sum()),
        float(rho2 * res2.sum()),
        float(rho2 * res3.sum()),
        float(rho3 * res4.sum()),
    )


def weights_to_bary(samples, partition, w):
    """BarycentricLqo carrying the partition's support data and weights w."""
    sup = np.asarray(partition.support_idx, dtype=int)
    return BarycentricLqo(
        samples.points[sup],
        w,
        samples.h1[sup],
        samples.h2[np.ix_(sup, sup)],
    )


def dump_blocks(blocks, directory):
    """Write every matrix and rhs as Matrix Market files into a directory."""
    from scipy.io import mmwrite

    os.makedirs(directory, exist_ok=True)
    items = {
        "L": blocks.L,
        "L12": blocks.L12,
        "L21": blocks.L21,
        "L22": blocks.L22,
        "U": blocks.U,
        "rhs_h": blocks.rhs_h.reshape(-1, 1),
        "rhs_h12": blocks.rhs_h12.reshape(-1, 1),
        "rhs_h21": blocks.rhs_h21.reshape(-1, 1),
        "rhs_h22": blocks.rhs_h22.reshape(-1, 1),
    }
    for name, mat in items.items():
        mmwrite(os.path.join(directory, name), np.asarray(mat))
    return directory
