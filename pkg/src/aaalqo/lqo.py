"""State-space systems with quadratic output and their transfer functions.

A model is

    x'(t) = A x(t) + b u(t),
    y(t)  = c^T x(t) + x(t)^T M x(t),

so the output carries a linear term c^T x and a quadratic term x^T M x.
In the frequency domain the two terms are described by

    H1(s)    = c^T (sI - A)^(-1) b,
    H2(s, z) = u(s)^T M u(z),        u(s) = (sI - A)^(-1) b,

both evaluated here through dense LU solves.  A reciprocal-condition
estimate guards every solve so that evaluation at (or numerically at) a
pole raises instead of returning garbage.
"""

from __future__ import annotations

import os
import warnings

import numpy as np
import scipy.linalg

from ._jsonutil import (
    complex_to_pairs,
    parse_complex,
    read_json,
    real_to_lists,
    require_field,
    write_json,
)
from .errors import FormatError, PoleError

# Reciprocal condition numbers below sqrt(eps) count as "at a pole".
_RCOND_FLOOR = float(np.sqrt(np.finfo(float).eps))


class LqoStateSpace:
    """Immutable (A, b, c, M) system of state dimension ``dim``.

    Args:
        A: dim x dim dynamics matrix.
        b: length-dim input vector.
        c: length-dim linear output vector (may be all zero).
        M: dim x dim quadratic output matrix; no symmetry is assumed.
    """

    def __init__(self, A, b, c, M):
        A = np.array(A, dtype=complex)
        b = np.array(b, dtype=complex).ravel()
        c = np.array(c, dtype=complex).ravel()
        M = np.array(M, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        dim = A.shape[0]
        if dim < 1:
            raise ValueError("state dimension must be at least 1")
        if b.shape != (dim,) or c.shape != (dim,):
            raise ValueError("b and c must be vectors of length dim")
        if M.shape != (dim, dim):
            raise ValueError(f"M must be {dim}x{dim}, got shape {M.shape}")
        for arr in (A, b, c, M):
            arr.setflags(write=False)
        self.A = A
        self.b = b
        self.c = c
        self.M = M
        self.dim = dim

    @property
    def real_flag(self):
        """True when every entry of A, b, c, M has exactly zero imaginary part."""
        return bool(
            np.all(self.A.imag == 0)
            and np.all(self.b.imag == 0)
            and np.all(self.c.imag == 0)
            and np.all(self.M.imag == 0)
        )

    def __repr__(self):
        return f"LqoStateSpace(dim={self.dim}, real={self.real_flag})"


def matrix_to_kron(M):
    """Row vector K with K @ kron(x, x) == x^T M x for every x.

    Uses the column-stacking vec convention, so K[i + j*dim] = M[i, j].
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"M must be square, got shape {M.shape}")
    return M.flatten(order="F")


def kron_to_matrix(K):
    """Inverse of matrix_to_kron; K must have square length."""
    K = np.asarray(K).ravel()
    n = int(round(np.sqrt(K.size)))
    if n * n != K.size:
        raise ValueError(f"length {K.size} is not a perfect square")
    return K.reshape((n, n), order="F")


def _resolvent(model, s, argument="s"):
    """Solve (sI - A) u = b, raising PoleError when the solve is untrustworthy."""
    s = complex(s)
    S = s * np.eye(model.dim) - model.A
    anorm = np.linalg.norm(S, 1)
    with warnings.catch_warnings():
        # an exactly singular factor only warns; the rcond check below catches it
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(S)
    gecon = scipy.linalg.get_lapack_funcs(("gecon",), (lu,))
    rcond, _ = gecon[0](lu, anorm)
    if not np.isfinite(rcond) or rcond < _RCOND_FLOOR:
        raise PoleError(s, argument, rcond=float(rcond))
    return scipy.linalg.lu_solve((lu, piv), model.b)


def resolvent_grid(model, points):
    """Resolvent vectors u(s_i) as columns, one LU solve per distinct point.

    Repeated points reuse the already computed vector.
    """
    points = np.asarray(points, dtype=complex).ravel()
    U = np.empty((model.dim, points.size), dtype=complex)
    cache = {}
    for i, s in enumerate(points):
        key = complex(s)
        u = cache.get(key)
        if u is None:
            u = _resolvent(model, key)
            cache[key] = u
        U[:, i] = u
    return U


def eval_h1(model, s):
    """Linear-part transfer function c^T (sI - A)^(-1) b."""
    return complex(np.dot(model.c, _resolvent(model, s)))


def eval_h2(model, s, z):
    """Quadratic-part transfer function u(s)^T M u(z)."""
    us = _resolvent(model, s, argument="s")
    uz = us if complex(s) == complex(z) else _resolvent(model, z, argument="z")
    return complex(np.dot(us, model.M @ uz))


def harmonic_output(model, freqs, t):
    """Steady-state output under u(t) = sum_j exp(i w_j t).

    Returns

        sum_j H1(i w_j) e^(i w_j t)
        + sum_j sum_l H2(i w_j, i w_l) e^(i (w_j + w_l) t),

    the transient-free response of the system to the harmonic sum input.
    """
    freqs = np.asarray(freqs, dtype=float).ravel()
    if freqs.size == 0:
        raise ValueError("freqs must contain at least one frequency")
    if np.any(freqs < 0):
        raise ValueError("frequencies must be nonnegative")
    us = {}
    for w in freqs:
        if w not in us:
            us[w] = _resolvent(model, 1j * w)
    y = 0j
    for w in freqs:
        y += np.dot(model.c, us[w]) * np.exp(1j * w * t)
    for wj in freqs:
        Mu = model.M @ us[wj]
        for wl in freqs:
            y += np.dot(us[wl], Mu) * np.exp(1j * (wj + wl) * t)
    return complex(y)


def random_lqo(order, seed, c_zero=False):
    """Random stable real LQO system for synthetic experiments.

    The dynamics are a standard normal matrix shifted left so the rightmost
    eigenvalue sits at -1; M is symmetrized.  With c_zero the linear output
    term is removed and only the quadratic part remains.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((order, order))
    A = A - (np.max(np.linalg.eigvals(A).real) + 1.0) * np.eye(order)
    b = rng.standard_normal(order)
    c = np.zeros(order) if c_zero else rng.standard_normal(order)
    M = rng.standard_normal((order, order))
    M = 0.5 * (M + M.T)
    return LqoStateSpace(A, b, c, M)


def save_model(model, path):
    """Write a model as JSON; real models use bare floats, complex ones [re, im]."""
    enc = real_to_lists if model.real_flag else complex_to_pairs
    doc = {
        "dim": model.dim,
        "A": enc(model.A),
        "b": enc(model.b),
        "c": enc(model.c),
        "M": enc(model.M),
    }
    write_json(doc, path)


def load_model(path):
    """Read a model written by save_model."""
    doc = read_json(path)
    dim = require_field(doc, "dim", path)
    A = parse_complex(require_field(doc, "A", path), 2, field="A")
    b = parse_complex(require_field(doc, "b", path), 1, field="b")
    c = parse_complex(require_field(doc, "c", path), 1, field="c")
    M = parse_complex(require_field(doc, "M", path), 2, field="M")
    if A.shape != (dim, dim):
        raise FormatError(f"{path}: field 'A' has shape {A.shape}, expected ({dim}, {dim})")
    try:
        return LqoStateSpace(A, b, c, M)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _read_mm(path):
    from scipy.io import mmread
    from scipy.sparse import issparse

    mat = mmread(path)
    if issparse(mat):
        mat = mat.toarray()
    return np.asarray(mat)


def load_model_mm(directory):
    """Assemble a model from Matrix Market files A.mtx, b.mtx, c.mtx[, M.mtx].

    Vectors may be stored as rows or columns.  A missing M.mtx yields a zero
    quadratic term (a purely linear system).
    """
    def p(name):
        return os.path.join(directory, name)

    for name in ("A.mtx", "b.mtx", "c.mtx"):
        if not os.path.exists(p(name)):
            raise FormatError(f"{directory}: missing {name}")
    A = _read_mm(p("A.mtx"))
    b = _read_mm(p("b.mtx")).ravel()
    c = _read_mm(p("c.mtx")).ravel()
    if os.path.exists(p("M.mtx")):
        M = _read_mm(p("M.mtx"))
    else:
        M = np.zeros((A.shape[0], A.shape[0]))
    return LqoStateSpace(A, b, c, M)
