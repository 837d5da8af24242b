"""Joint barycentric representation of a reduced quadratic-output model.

The linear part is the rational function

    r1(s) = n1(s) / d1(s),
    n1(s) = sum_k w_k h_k / (s - xi_k),
    d1(s) = 1 + sum_k w_k / (s - xi_k),

strictly proper by the "1 +" convention and interpolating h_k at every
support point xi_k with nonzero weight.  The quadratic part shares support
points and weights:

    r2(s, z) = N(s, z) / (d1(s) d1(z)),
    N(s, z)  = sum_k sum_l Hmat[k, l] w_k w_l / ((s - xi_k)(z - xi_l)),

and interpolates Hmat[i, j] at (xi_i, xi_j).  When exactly one argument
sits on a support point, the 0/0 quotient has closed-form limits that are
linear in the weights (eval_r2_mixed_left / eval_r2_mixed_right).  Support
points are recognized by exact equality and answered from stored data; the
quotients are numerically 0/0 there and the stored value is the exact limit.
"""

from __future__ import annotations

import numpy as np

from ._jsonutil import (
    complex_to_pairs,
    parse_complex,
    read_json,
    require_field,
    write_json,
)
from .errors import FormatError, SpuriousPoleError
from .lqo import LqoStateSpace


class BarycentricLqo:
    """Support points xi, weights w, and interpolated data h, Hmat.

    Args:
        xi: length-n distinct complex support points.
        w: length-n nonzero complex weights.
        h: length-n values interpolated by r1.
        Hmat: n x n values interpolated by r2 on the support grid.
    """

    def __init__(self, xi, w, h, Hmat):
        xi = np.array(xi, dtype=complex).ravel()
        w = np.array(w, dtype=complex).ravel()
        h = np.array(h, dtype=complex).ravel()
        Hmat = np.array(Hmat, dtype=complex)
        n = xi.size
        if n < 1:
            raise ValueError("at least one support point is required")
        if w.shape != (n,) or h.shape != (n,):
            raise ValueError("xi, w, h must share the same length")
        if Hmat.shape != (n, n):
            raise ValueError(f"Hmat must be {n}x{n}, got shape {Hmat.shape}")
        if np.unique(xi).size != n:
            raise ValueError("support points must be pairwise distinct")
        if np.any(w == 0):
            raise ValueError("barycentric weights must be nonzero")
        for arr in (xi, w, h, Hmat):
            arr.setflags(write=False)
        self.xi = xi
        self.w = w
        self.h = h
        self.Hmat = Hmat
        self.n = n

    def __repr__(self):
        return f"BarycentricLqo(n={self.n})"


class ConstantModel:
    """Order-zero stand-in: r1 and r2 are the constants const1 and const2."""

    n = 0

    def __init__(self, const1, const2):
        self.const1 = complex(const1)
        self.const2 = complex(const2)

    def __repr__(self):
        return f"ConstantModel(const1={self.const1}, const2={self.const2})"


# ---------------------------------------------------------------------------
# raw kernels on (xi, w, values) arrays, shared with the classical AAA module

def _support_hits(xi, points):
    """Pairs (grid index, support index) where a grid point equals a support point."""
    return np.argwhere(points[:, None] == xi[None, :])


def _r1_point_raw(xi, w, h, s):
    s = complex(s)
    hit = np.flatnonzero(xi == s)
    if hit.size:
        return complex(h[hit[0]])
    cs = 1.0 / (s - xi)
    den = 1.0 + np.dot(cs, w)
    if den == 0:
        raise SpuriousPoleError(s)
    return complex(np.dot(cs, w * h) / den)


def _cauchy_and_denominator(xi, w, points):
    """Cauchy matrix C[i, k] = 1/(s_i - xi_k) and d1 on the grid.

    Rows belonging to support points carry garbage (their zero difference is
    replaced by 1 to avoid dividing by zero); callers overwrite those rows.
    """
    D = points[:, None] - xi[None, :]
    sup = D == 0
    if sup.any():
        D = np.where(sup, 1.0, D)
    C = 1.0 / D
    den = 1.0 + C @ w
    return C, den


def _pole_rows(den, hits, points, on_pole):
    """Indices of non-support grid points where d1 vanished."""
    rows = np.flatnonzero(den == 0)
    if hits.size:
        rows = np.setdiff1d(rows, hits[:, 0])
    if rows.size and on_pole == "raise":
        raise SpuriousPoleError(complex(points[rows[0]]))
    return rows


def _r1_grid_raw(xi, w, h, points, on_pole="raise"):
    points = np.asarray(points, dtype=complex).ravel()
    hits = _support_hits(xi, points)
    C, den = _cauchy_and_denominator(xi, w, points)
    poles = _pole_rows(den, hits, points, on_pole)
    den = np.where(den == 0, 1.0, den)
    r = (C @ (w * h)) / den
    if poles.size:
        r[poles] = np.inf
    if hits.size:
        r[hits[:, 0]] = h[hits[:, 1]]
    return r


# ---------------------------------------------------------------------------
# public evaluation

def eval_r1(bary, s):
    """r1 at one point; support points answer with their stored value."""
    if isinstance(bary, ConstantModel):
        return bary.const1
    return _r1_point_raw(bary.xi, bary.w, bary.h, s)


def eval_r2_mixed_left(bary, i, shat):
    """r2(xi_i, shat) for shat off the support set.

    Closed form (sum_l w_l Hmat[i, l]/(shat - xi_l)) / (1 + sum_l w_l/(shat - xi_l));
    both numerator and denominator are linear in the weights.
    """
    shat = complex(shat)
    if np.any(bary.xi == shat):
        raise ValueError("shat must not be a support point")
    cz = 1.0 / (shat - bary.xi)
    den = 1.0 + np.dot(cz, bary.w)
    if den == 0:
        raise SpuriousPoleError(shat)
    return complex(np.dot(cz, bary.w * bary.Hmat[i, :]) / den)


def eval_r2_mixed_right(bary, shat, i):
    """r2(shat, xi_i) for shat off the support set; sums first-index values."""
    shat = complex(shat)
    if np.any(bary.xi == shat):
        raise ValueError("shat must not be a support point")
    cz = 1.0 / (shat - bary.xi)
    den = 1.0 + np.dot(cz, bary.w)
    if den == 0:
        raise SpuriousPoleError(shat)
    return complex(np.dot(cz, bary.w * bary.Hmat[:, i]) / den)


def eval_r2(bary, s, z):
    """r2 at one point pair, dispatching on support-point membership."""
    if isinstance(bary, ConstantModel):
        return bary.const2
    s = complex(s)
    z = complex(z)
    si = np.flatnonzero(bary.xi == s)
    zi = np.flatnonzero(bary.xi == z)
    if si.size and zi.size:
        return complex(bary.Hmat[si[0], zi[0]])
    if si.size:
        return eval_r2_mixed_left(bary, int(si[0]), z)
    if zi.size:
        return eval_r2_mixed_right(bary, s, int(zi[0]))
    cs = 1.0 / (s - bary.xi)
    cz = 1.0 / (z - bary.xi)
    ds = 1.0 + np.dot(cs, bary.w)
    if ds == 0:
        raise SpuriousPoleError(s)
    dz = 1.0 + np.dot(cz, bary.w)
    if dz == 0:
        raise SpuriousPoleError(z)
    num = np.dot(cs, (bary.w[:, None] * bary.Hmat * bary.w[None, :]) @ cz)
    return complex(num / (ds * dz))


def eval_r1_grid(bary, points, on_pole="raise"):
    """r1 on a point vector, matching pointwise eval_r1 entry for entry.

    on_pole selects what happens when d1 vanishes at a non-support grid
    point: "raise" (default) or "inf" (mark the entry and continue).
    """
    points = np.asarray(points, dtype=complex).ravel()
    if isinstance(bary, ConstantModel):
        return np.full(points.size, bary.const1, dtype=complex)
    return _r1_grid_raw(bary.xi, bary.w, bary.h, points, on_pole=on_pole)


def eval_r2_grid(bary, points, on_pole="raise"):
    """r2 on the full rectangular grid points x points.

    Off-support entries come from the factored form N/(d1 d1) as two Cauchy
    products; rows and columns at support points are rewritten with the
    mixed closed forms and the support-grid entries with the stored Hmat.
    """
    points = np.asarray(points, dtype=complex).ravel()
    if isinstance(bary, ConstantModel):
        return np.full((points.size, points.size), bary.const2, dtype=complex)
    xi, w, Hmat = bary.xi, bary.w, bary.Hmat
    hits = _support_hits(xi, points)
    C, den = _cauchy_and_denominator(xi, w, points)
    poles = _pole_rows(den, hits, points, on_pole)
    den = np.where(den == 0, 1.0, den)
    num = C @ (w[:, None] * Hmat * w[None, :]) @ C.T
    R = num / (den[:, None] * den[None, :])
    if hits.size:
        g, k = hits[:, 0], hits[:, 1]
        R[g, :] = ((Hmat[k, :] * w[None, :]) @ C.T) / den[None, :]
        R[:, g] = (C @ (w[:, None] * Hmat[:, k])) / den[:, None]
        R[np.ix_(g, g)] = Hmat[np.ix_(k, k)]
    if poles.size:
        R[poles, :] = np.inf
        R[:, poles] = np.inf
    return R


# ---------------------------------------------------------------------------
# realization

def realize(bary):
    """Diagonal-plus-rank-one state-space model reproducing r1 and r2.

    With Xi = diag(xi): A = Xi - w 1^T, b = w, c = h, M = Hmat.  The
    resolvent of A relates to the barycentric quotients through a rank-one
    (Sherman-Morrison) update, which makes eval_h1/eval_h2 of the result
    equal to eval_r1/eval_r2.
    """
    if isinstance(bary, ConstantModel):
        raise ValueError("a constant model has no strictly proper realization")
    A = np.diag(bary.xi) - np.outer(bary.w, np.ones(bary.n))
    return LqoStateSpace(A, bary.w, bary.h, bary.Hmat)


def _conjugate_pairing(xi):
    """Index l(k) with xi[l] = conj(xi[k]); errors when no involution exists."""
    n = xi.size
    tol = 1e-12 * (1.0 + np.max(np.abs(xi)))
    dist = np.abs(xi[None, :] - np.conj(xi)[:, None])
    pairing = np.argmin(dist, axis=1)
    ok = dist[np.arange(n), pairing] <= tol
    if not ok.all() or np.any(pairing[pairing] != np.arange(n)):
        raise ValueError("support set is not closed under conjugation")
    return pairing


def realize_real(bary):
    """Real-valued realization via a unitary pairing transform.

    Conjugate support-point pairs are rotated into real 2x2 blocks; the
    result is real exactly when weights and data are conjugate-symmetric.
    Returns (model, residue) where residue is the largest imaginary part
    discarded, relative to the largest matrix entry.
    """
    model = realize(bary)
    pairing = _conjugate_pairing(bary.xi)
    n = bary.n
    S = np.zeros((n, n), dtype=complex)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for k in range(n):
        l = int(pairing[k])
        if l == k:
            S[k, k] = 1.0
        elif k < l:
            S[k, k] = inv_sqrt2
            S[l, k] = inv_sqrt2
            S[k, l] = 1j * inv_sqrt2
            S[l, l] = -1j * inv_sqrt2
    Ar = S.conj().T @ model.A @ S
    br = S.conj().T @ model.b
    # the linear and quadratic output forms transform with S^T, not S^H
    cr = S.T @ model.c
    Mr = S.T @ model.M @ S
    scale = max(
        np.max(np.abs(Ar)), np.max(np.abs(br)), np.max(np.abs(cr)), np.max(np.abs(Mr))
    )
    residue = max(
        np.max(np.abs(Ar.imag)),
        np.max(np.abs(br.imag)),
        np.max(np.abs(cr.imag)),
        np.max(np.abs(Mr.imag)),
    ) / max(scale, np.finfo(float).tiny)
    real_model = LqoStateSpace(Ar.real, br.real, cr.real, Mr.real)
    return real_model, float(residue)


# ---------------------------------------------------------------------------
# serialization

def save_bary(bary, path):
    """Write a barycentric model (or the order-zero constant variant) as JSON."""
    if isinstance(bary, ConstantModel):
        doc = {
            "xi": [],
            "w": [],
            "h": [],
            "Hmat": [],
            "const1": [bary.const1.real, bary.const1.imag],
            "const2": [bary.const2.real, bary.const2.imag],
        }
    else:
        doc = {
            "xi": complex_to_pairs(bary.xi),
            "w": complex_to_pairs(bary.w),
            "h": complex_to_pairs(bary.h),
            "Hmat": complex_to_pairs(bary.Hmat),
        }
    write_json(doc, path)


def load_bary(path):
    """Read a model written by save_bary."""
    doc = read_json(path)
    xi = parse_complex(require_field(doc, "xi", path), 1, field="xi")
    if xi.size == 0:
        c1 = parse_complex(require_field(doc, "const1", path), 0, field="const1")
        c2 = parse_complex(require_field(doc, "const2", path), 0, field="const2")
        return ConstantModel(complex(c1), complex(c2))
    w = parse_complex(require_field(doc, "w", path), 1, field="w")
    h = parse_complex(require_field(doc, "h", path), 1, field="h")
    Hmat = parse_complex(require_field(doc, "Hmat", path), 2, field="Hmat")
    try:
        return BarycentricLqo(xi, w, h, Hmat)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
