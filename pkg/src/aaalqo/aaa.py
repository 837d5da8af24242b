"""Classical single-variable AAA on samples of one rational function.

Serves as the linear-only baseline: greedy support-point promotion plus a
linearized least-squares weight solve, using the same strictly proper
"1 +" barycentric convention as the joint algorithm.  Because of that
convention the weights come from an inhomogeneous least-squares problem
min ||L w + hhat|| rather than a nullspace computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import assembly
from .barycentric import _r1_grid_raw, _r1_point_raw
from .loewner import min_norm_lstsq


@dataclass
class AaaModel:
    """Barycentric fit of one function: support points, weights, values.

    const is the order-zero initial model (the sample mean), used when no
    support point was needed; history records (support size, max absolute
    error) before each promotion and after the last solve.
    """

    xi: np.ndarray
    w: np.ndarray
    h: np.ndarray
    const: complex
    history: list = field(default_factory=list)
    converged: bool = False

    @property
    def n(self):
        return self.xi.size


def aaa_eval(model, s):
    """Evaluate the fit at one point (support points answer exactly)."""
    if model.n == 0:
        return model.const
    return _r1_point_raw(model.xi, model.w, model.h, s)


def aaa_eval_grid(model, points, on_pole="raise"):
    """Evaluate the fit on a point vector."""
    points = np.asarray(points, dtype=complex).ravel()
    if model.n == 0:
        return np.full(points.size, model.const, dtype=complex)
    return _r1_grid_raw(model.xi, model.w, model.h, points, on_pole=on_pole)


def _symmetrize_pairs(w, support, pairing):
    """Average weights across conjugate support pairs, exactly symmetric."""
    pos = {idx: p for p, idx in enumerate(support)}
    out = w.copy()
    done = set()
    for p, idx in enumerate(support):
        if p in done:
            continue
        mate = int(pairing[idx])
        q = pos.get(mate)
        if q is None:
            continue
        if q == p:
            out[p] = out[p].real
        else:
            avg = 0.5 * (w[p] + np.conj(w[q]))
            out[p] = avg
            out[q] = np.conj(avg)
            done.add(q)
        done.add(p)
    return out


def aaa_fit(points, values, tol=1e-8, nmax=100, pairing=None):
    """Greedy barycentric fit of sampled values of one function.

    Each round promotes the worst-approximated sample into the support set
    (starting from the constant sample-mean model), then re-solves the
    linearized least-squares problem for the weights.  Iteration stops when
    the max absolute error drops to tol relative to the largest sample
    modulus, or when the support size reaches nmax.  With pairing (from
    conjugate_close), conjugate mates are promoted together and the weights
    are symmetrized so the fit satisfies r(conj(s)) = conj(r(s)).
    """
    pts = np.asarray(points, dtype=complex).ravel()
    f = np.asarray(values, dtype=complex).ravel()
    if pts.size != f.size:
        raise ValueError("points and values must have the same length")
    if pts.size < 2:
        raise ValueError("at least two sampling points are required")
    if np.unique(pts).size != pts.size:
        raise ValueError("sampling points must be pairwise distinct")
    if not tol > 0:
        raise ValueError("tol must be positive")
    scale = float(np.max(np.abs(f)))
    const = complex(np.mean(f))
    support = []
    w = np.zeros(0, dtype=complex)
    rvals = np.full(pts.size, const, dtype=complex)
    history = []
    converged = False
    while True:
        err = np.abs(f - rvals)
        if support:
            err[support] = 0.0
        emax = float(err.max())
        history.append((len(support), emax))
        if emax <= tol * scale:
            converged = True
            break
        if len(support) >= nmax:
            break
        support.append(int(np.argmax(err)))
        if pairing is not None:
            mate = int(pairing[support[-1]])
            if mate not in support:
                support.append(mate)
        ls = [i for i in range(pts.size) if i not in support]
        L = assembly.loewner_1d(
            np.ascontiguousarray(pts[ls]),
            np.ascontiguousarray(f[ls]),
            np.ascontiguousarray(pts[support]),
            np.ascontiguousarray(f[support]),
        )
        w = min_norm_lstsq(L, -f[ls])
        if pairing is not None:
            w = _symmetrize_pairs(w, support, pairing)
        rvals = _r1_grid_raw(pts[support], w, f[support], pts, on_pole="inf")
    return AaaModel(
        xi=pts[support].copy(),
        w=w,
        h=f[support].copy(),
        const=const,
        history=history,
        converged=converged,
    )
