"""Frequency-domain sample sets: the algorithm's sole input.

A SampleSet couples Ns distinct sampling points {s_i} with measurements of
both transfer functions: h1[i] = H1(s_i) on the points and h2[i, j] =
H2(s_i, s_j) on the full rectangular grid of point pairs.
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
from .errors import FormatError
from .lqo import resolvent_grid

# Points closer than this (relative to the largest modulus) are duplicates.
_DISTINCT_RTOL = 1e-13
# Slack for verifying conjugate closure of measured values.
_CLOSURE_RTOL = 1e-12


class SampleSet:
    """Immutable sampling points plus H1 vector and H2 grid values.

    Args:
        points: length-Ns complex sampling points, pairwise distinct.
        h1: length-Ns values of H1 at the points.
        h2: Ns x Ns values of H2 on the rectangular grid of point pairs.
        conjugate_closed: declare the set closed under conjugation; requires
            pairing.
        pairing: length-Ns involution with points[pairing[i]] the conjugate
            of points[i]; values must close accordingly.
    """

    def __init__(self, points, h1, h2, conjugate_closed=False, pairing=None):
        points = np.array(points, dtype=complex).ravel()
        h1 = np.array(h1, dtype=complex).ravel()
        h2 = np.array(h2, dtype=complex)
        ns = points.size
        if ns < 1:
            raise ValueError("at least one sampling point is required")
        if h1.shape != (ns,):
            raise ValueError(f"h1 must have length {ns}, got {h1.shape}")
        if h2.shape != (ns, ns):
            raise ValueError(f"h2 must be {ns}x{ns}, got shape {h2.shape}")
        tol = _DISTINCT_RTOL * (1.0 + np.max(np.abs(points)))
        if ns > 1:
            diff = np.abs(points[:, None] - points[None, :])
            diff[np.diag_indices(ns)] = np.inf
            if diff.min() <= tol:
                i, j = np.unravel_index(np.argmin(diff), diff.shape)
                raise ValueError(
                    f"sampling points {i} and {j} coincide within tolerance:"
                    f" {points[i]} vs {points[j]}"
                )
        if conjugate_closed:
            if pairing is None:
                raise ValueError("conjugate_closed requires a pairing map")
            pairing = np.array(pairing, dtype=int).ravel()
            self._check_closure(points, h1, h2, pairing, tol)
        else:
            pairing = None
        for arr in (points, h1, h2) + ((pairing,) if pairing is not None else ()):
            arr.setflags(write=False)
        self.points = points
        self.h1 = h1
        self.h2 = h2
        self.conjugate_closed = bool(conjugate_closed)
        self.pairing = pairing

    @staticmethod
    def _check_closure(points, h1, h2, pairing, tol):
        ns = points.size
        if pairing.shape != (ns,):
            raise ValueError(f"pairing must have length {ns}")
        if np.any(pairing < 0) or np.any(pairing >= ns):
            raise ValueError("pairing indices out of range")
        if np.any(pairing[pairing] != np.arange(ns)):
            raise ValueError("pairing is not an involution")
        if np.max(np.abs(points[pairing] - np.conj(points))) > tol:
            raise ValueError("points are not conjugate-closed under the pairing")
        vtol = _CLOSURE_RTOL * (1.0 + max(np.max(np.abs(h1)), np.max(np.abs(h2))))
        if np.max(np.abs(h1[pairing] - np.conj(h1))) > vtol:
            raise ValueError("h1 values are not conjugate-closed under the pairing")
        if np.max(np.abs(h2[np.ix_(pairing, pairing)] - np.conj(h2))) > vtol:
            raise ValueError("h2 values are not conjugate-closed under the pairing")

    @property
    def ns(self):
        return self.points.size

    @property
    def m1(self):
        """Largest modulus among the H1 samples."""
        return float(np.max(np.abs(self.h1)))

    @property
    def m2(self):
        """Largest modulus on the H2 sample grid."""
        return float(np.max(np.abs(self.h2)))

    def __repr__(self):
        return (
            f"SampleSet(ns={self.ns}, conjugate_closed={self.conjugate_closed})"
        )


def log_space_axis(lo_exp, hi_exp, m):
    """m points i * 10^e with e equispaced in [lo_exp, hi_exp], rising modulus."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if not lo_exp < hi_exp:
        raise ValueError("lo_exp must be strictly less than hi_exp")
    return 1j * np.logspace(lo_exp, hi_exp, int(m))


def conjugate_close(points):
    """Close a point list under conjugation.

    Returns (closed_points, pairing) where the output contains each input
    point and its conjugate exactly once (real points are self-paired) and
    pairing is the involution mapping each index to its conjugate's index.
    """
    points = np.asarray(points, dtype=complex).ravel()
    out = []
    seen = set()
    for p in points:
        p = complex(p)
        if p not in seen:
            out.append(p)
            seen.add(p)
        cp = p.conjugate()
        if cp not in seen:
            out.append(cp)
            seen.add(cp)
    index = {p: i for i, p in enumerate(out)}
    pairing = np.array([index[p.conjugate()] for p in out], dtype=int)
    return np.array(out, dtype=complex), pairing


def sample_lqo(model, points, pairing=None):
    """Measure both transfer functions of a model on a point set.

    The resolvent vectors u(s_i) are computed once each (Ns linear solves),
    then h1 = c^T u(s_i) and h2[i, j] = u(s_i)^T M u(s_j) by inner products.
    Pass the pairing from conjugate_close to mark the result conjugate-closed
    (the model must be real for the values to close).
    """
    points = np.asarray(points, dtype=complex).ravel()
    U = resolvent_grid(model, points)
    h1 = model.c @ U
    h2 = U.T @ (model.M @ U)
    return SampleSet(
        points,
        h1,
        h2,
        conjugate_closed=pairing is not None,
        pairing=pairing,
    )


def save_sampleset(samples, path):
    """Write a SampleSet as JSON (schema mirrored by load_sampleset)."""
    doc = {
        "points": complex_to_pairs(samples.points),
        "h1": complex_to_pairs(samples.h1),
        "h2": complex_to_pairs(samples.h2),
        "conjugate_closed": samples.conjugate_closed,
        "pairing": None if samples.pairing is None else samples.pairing.tolist(),
    }
    write_json(doc, path)


def load_sampleset(path):
    """Read a SampleSet written by save_sampleset."""
    doc = read_json(path)
    points = parse_complex(require_field(doc, "points", path), 1, field="points")
    h1 = parse_complex(require_field(doc, "h1", path), 1, field="h1")
    h2 = parse_complex(require_field(doc, "h2", path), 2, field="h2")
    closed = bool(require_field(doc, "conjugate_closed", path))
    pairing = doc.get("pairing")
    return SampleSet(points, h1, h2, conjugate_closed=closed, pairing=pairing)


def _fmt(x):
    return f"{x:.17g}"


def write_h1_csv(path, points, values):
    """CSV with columns (i, Re s_i, Im s_i, Re h1_i, Im h1_i)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("i,re_s,im_s,re_h1,im_h1\n")
        for i, (s, v) in enumerate(zip(points, values)):
            f.write(
                f"{i},{_fmt(s.real)},{_fmt(s.imag)},{_fmt(v.real)},{_fmt(v.imag)}\n"
            )


def write_h2_csv(path, values):
    """CSV with columns (i, j, Re h2_ij, Im h2_ij)."""
    values = np.asarray(values)
    with open(path, "w", encoding="utf-8") as f:
        f.write("i,j,re_h2,im_h2\n")
        for i in range(values.shape[0]):
            for j in range(values.shape[1]):
                v = values[i, j]
                f.write(f"{i},{j},{_fmt(v.real)},{_fmt(v.imag)}\n")


def export_csv(samples, prefix):
    """Write {prefix}_h1.csv and {prefix}_h2.csv; returns the two paths."""
    p1 = f"{prefix}_h1.csv"
    p2 = f"{prefix}_h2.csv"
    write_h1_csv(p1, samples.points, samples.h1)
    write_h2_csv(p2, samples.h2)
    return p1, p2
