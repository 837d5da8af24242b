"""Fixed-step time-domain simulation of quadratic-output systems.

Integrates x' = A x + b u(t) with the classical fourth-order Runge-Kutta
scheme on a uniform grid and records both the full output
y = c^T x + x^T M x and its linear part y1 = c^T x.  The fixed step keeps
runs deterministic and makes the convergence order directly testable.
Complex states are supported, so reduced models may stay in their
complex-diagonal realization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, FormatError


@dataclass(frozen=True)
class Signal:
    """Scalar input signal: a*cos(w t), a*sin(w t), or a sampled series.

    Sampled series are linearly interpolated and clamped at their end
    values; amplitude is dimensionless and omega is in rad/s.
    """

    kind: str
    amplitude: float = 1.0
    omega: float = 0.0
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    @staticmethod
    def cosine(amplitude, omega):
        return Signal(kind="cos", amplitude=float(amplitude), omega=float(omega))

    @staticmethod
    def sine(amplitude, omega):
        return Signal(kind="sin", amplitude=float(amplitude), omega=float(omega))

    @staticmethod
    def sampled(times, values):
        times = np.asarray(times, dtype=float).ravel()
        values = np.asarray(values, dtype=complex).ravel()
        if times.size != values.size or times.size < 2:
            raise ValueError("sampled signal needs matching times and values")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        return Signal(kind="sampled", times=times, values=values)

    def __call__(self, t):
        if self.kind == "cos":
            return self.amplitude * np.cos(self.omega * t)
        if self.kind == "sin":
            return self.amplitude * np.sin(self.omega * t)
        if self.kind == "sampled":
            re = np.interp(t, self.times, self.values.real)
            im = np.interp(t, self.times, self.values.imag)
            return re + 1j * im if np.any(self.values.imag) else re
        raise ValueError(f"unknown signal kind {self.kind!r}")


@dataclass(frozen=True)
class Trace:
    """Uniform time grid with output values y and linear-only output y1."""

    t: np.ndarray
    y: np.ndarray
    y1: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).ravel()
        y = np.asarray(self.y, dtype=complex).ravel()
        y1 = np.asarray(self.y1, dtype=complex).ravel()
        if not (t.size == y.size == y1.size):
            raise ValueError("t, y, y1 must have the same length")
        if t.size >= 2:
            steps = np.diff(t)
            if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
                raise ValueError("time grid must be uniform with positive step")
        for arr in (t, y, y1):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "y1", y1)

    @property
    def dt(self):
        if self.t.size < 2:
            raise ValueError("a single-point trace has no step size")
        return float(self.t[1] - self.t[0])


def simulate_lqo(model, signal, t_end, dt, x0=None):
    """Integrate the model under the given input from x0 (default zero).

    t_end is rounded to a whole number of steps of size dt.  A non-finite
    state aborts with the first offending time.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    steps = int(round(t_end / dt))
    t = np.arange(steps + 1) * dt
    A, b, c, M = model.A, model.b, model.c, model.M
    if x0 is None:
        x = np.zeros(model.dim, dtype=complex)
    else:
        x = np.array(x0, dtype=complex).ravel()
        if x.shape != (model.dim,):
            raise ValueError(f"x0 must have length {model.dim}")
    y = np.empty(steps + 1, dtype=complex)
    y1 = np.empty(steps + 1, dtype=complex)

    def outputs(k, xk):
        lin = np.dot(c, xk)
        y1[k] = lin
        y[k] = lin + np.dot(xk, M @ xk)

    outputs(0, x)
    half = 0.5 * dt
    # overflow on the way to a non-finite state is expected and reported
    # through DivergenceError, not a numpy warning
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            tk = t[k]
            u0 = signal(tk)
            um = signal(tk + half)
            u1 = signal(tk + dt)
            k1 = A @ x + b * u0
            k2 = A @ (x + half * k1) + b * um
            k3 = A @ (x + half * k2) + b * um
            k4 = A @ (x + dt * k3) + b * u1
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise DivergenceError(float(t[k + 1]))
            outputs(k + 1, x)
    return Trace(t=t, y=y, y1=y1)


def output_error(full, reduced):
    """Pointwise |y - yhat| and its maximum; the grids must coincide."""
    if full.t.shape != reduced.t.shape or not np.array_equal(full.t, reduced.t):
        raise ValueError("traces live on different time grids")
    series = np.abs(full.y - reduced.y)
    return float(series.max()), series


def save_trace(trace, path):
    """CSV with columns (t, Re y, Im y, Re y1, Im y1)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("t,re_y,im_y,re_y1,im_y1\n")
        for tk, yk, y1k in zip(trace.t, trace.y, trace.y1):
            f.write(
                f"{tk:.17g},{yk.real:.17g},{yk.imag:.17g},"
                f"{y1k.real:.17g},{y1k.imag:.17g}\n"
            )


def load_trace(path):
    """Read a trace written by save_trace."""
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if rows.shape[1] != 5:
        raise FormatError(f"{path}: expected 5 columns, got {rows.shape[1]}")
    return Trace(
        t=rows[:, 0],
        y=rows[:, 1] + 1j * rows[:, 2],
        y1=rows[:, 3] + 1j * rows[:, 4],
    )
