"""JSON helpers for complex-valued arrays stored as nested [re, im] pairs."""

from __future__ import annotations

import json

import numpy as np

from .errors import FormatError


def complex_to_pairs(a):
    """Encode an array as nested lists with each entry an [re, im] pair."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def real_to_lists(a):
    """Encode a real array as plain nested lists of floats."""
    a = np.asarray(a)
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        raise ValueError("array has nonzero imaginary parts")
    return np.asarray(a.real, dtype=float).tolist()


def parse_complex(data, ndim, field=""):
    """Decode nested [re, im] pairs (or bare reals) into a complex array.

    ndim is the logical rank of the result; pair encodings therefore arrive
    with rank ndim + 1 and a trailing axis of length 2.
    """
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"field '{field}': not a numeric array: {exc}") from exc
    if arr.size == 0:
        return np.zeros((0,) * ndim, dtype=complex)
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == ndim:
        return arr.astype(complex)
    raise FormatError(
        f"field '{field}': expected rank-{ndim} array of [re, im] pairs or reals,"
        f" got shape {arr.shape}"
    )


def read_json(path):
    """Load a JSON document, wrapping parse failures with file context."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def require_field(doc, name, path):
    if not isinstance(doc, dict) or name not in doc:
        raise FormatError(f"{path}: missing field '{name}'")
    return doc[name]


def write_json(doc, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
