"""Greedy driver: support promotion, two-stage weight solve, error tracking.

Starting from the order-zero constant model (sample means), each iteration
promotes the worst-approximated sampling point (or its conjugate pair) into
the support set, rebuilds the divided-difference blocks for the new
partition, solves stage 1 then stage 2 for the weights, and re-measures the
two error surfaces

    E1[i]    = |H1(s_i)    - r1(s_i)|,
    E2[i, j] = |H2(s_i, s_j) - r2(s_i, s_j)|,

whose maxima, relative to the data magnitudes M1 = max|h1| and
M2 = max|h2|, drive both the greedy selection and termination.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .aaa import _symmetrize_pairs
from .barycentric import ConstantModel, eval_r1_grid, eval_r2_grid
from .errors import AaalqoError
from .loewner import (
    RHO_MODES,
    Partition,
    build_blocks,
    build_T,
    dump_blocks,
    relaxed_objective,
    solve_stage1,
    solve_stage2,
    weights_to_bary,
)


@dataclass
class AaaLqoConfig:
    """Run parameters; defaults follow the reference experiment setup.

    pair_mode None means "promote conjugate pairs exactly when the samples
    are conjugate-closed".  greedy_n overrides the normalization constant N
    in the surface comparison eps1/N vs eps2/N^2 (default: the number of
    sampling points).  stage2_iterations > 1 re-freezes the weight factor
    with the latest solution and re-solves (off by default).
    """

    nmax: int = 30
    eps: float = 1e-2
    pair_mode: bool | None = None
    rho_mode: str = "sqrt_both"
    greedy_n: float | None = None
    stage2_iterations: int = 1
    dump_blocks: str | None = None

    def __post_init__(self):
        if self.nmax < 1:
            raise ValueError("nmax must be at least 1")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie strictly between 0 and 1")
        if self.rho_mode not in RHO_MODES:
            raise ValueError(f"rho_mode must be one of {RHO_MODES}")
        if self.greedy_n is not None and not self.greedy_n > 0:
            raise ValueError("greedy_n must be positive")
        if self.stage2_iterations < 1:
            raise ValueError("stage2_iterations must be at least 1")


@dataclass
class IterationRecord:
    """One row of the convergence history."""

    n: int
    added_idx: tuple
    added: tuple
    eps1: float
    eps2: float
    eps1_rel: float
    eps2_rel: float
    relaxed_obj: float


@dataclass
class AaaLqoReport:
    """Per-iteration records plus the data constants and the final verdict."""

    records: list
    m1: float
    m2: float
    converged: bool

    def to_csv(self, path):
        """Columns (n, xi_re, xi_im, eps1_rel, eps2_rel, relaxed_obj).

        xi is the greedy pick of the iteration; its conjugate mate, when
        promoted in the same step, is implied.  The order-zero row has no
        pick and writes nan coordinates.
        """
        with open(path, "w", encoding="utf-8") as f:
            f.write("n,xi_re,xi_im,eps1_rel,eps2_rel,relaxed_obj\n")
            for rec in self.records:
                if rec.added:
                    xr, xc = rec.added[0].real, rec.added[0].imag
                else:
                    xr = xc = math.nan
                f.write(
                    f"{rec.n},{xr:.17g},{xc:.17g},{rec.eps1_rel:.17g},"
                    f"{rec.eps2_rel:.17g},{rec.relaxed_obj:.17g}\n"
                )


class AaaLqoState:
    """Mutable run state: partition, current model, error surfaces, history."""

    def __init__(self, samples, config, pair_mode):
        self.samples = samples
        self.config = config
        self.pair_mode = pair_mode
        self.support = []
        self.model = None
        self.e1 = None
        self.e2 = None
        self.eps1 = math.inf
        self.idx1 = 0
        self.eps2 = math.inf
        self.idx2 = (0, 0)
        self.records = []

    @property
    def n(self):
        return len(self.support)


def initialize(samples, config=None):
    """Order-zero state: constant model at the sample means, all points LS."""
    if samples.ns < 2:
        raise ValueError("at least two sampling points are required")
    config = config if config is not None else AaaLqoConfig()
    pair_mode = (
        config.pair_mode
        if config.pair_mode is not None
        else samples.conjugate_closed
    )
    if pair_mode and not samples.conjugate_closed:
        raise ValueError("pair mode requires conjugate-closed samples")
    state = AaaLqoState(samples, config, pair_mode)
    state.model = ConstantModel(np.mean(samples.h1), np.mean(samples.h2))
    _append_record(state, added_idx=(), robj=math.nan)
    return state


def error_surfaces(state):
    """Measure both error surfaces of the current model on the full grid.

    Returns (eps1, argmax index, eps2, argmax index pair) and caches the
    surfaces on the state for the greedy tie-break.  A spurious pole on a
    grid point makes its error infinite, which forces greedy attention.
    """
    samples = state.samples
    r1v = eval_r1_grid(state.model, samples.points, on_pole="inf")
    state.e1 = np.abs(samples.h1 - r1v)
    r2v = eval_r2_grid(state.model, samples.points, on_pole="inf")
    state.e2 = np.abs(samples.h2 - r2v)
    state.eps1 = float(state.e1.max())
    state.idx1 = int(np.argmax(state.e1))
    state.eps2 = float(state.e2.max())
    state.idx2 = tuple(
        int(v) for v in np.unravel_index(np.argmax(state.e2), state.e2.shape)
    )
    return state.eps1, state.idx1, state.eps2, state.idx2


def _append_record(state, added_idx, robj):
    error_surfaces(state)
    samples = state.samples
    m1, m2 = samples.m1, samples.m2
    state.records.append(
        IterationRecord(
            n=state.n,
            added_idx=tuple(added_idx),
            added=tuple(complex(samples.points[i]) for i in added_idx),
            eps1=state.eps1,
            eps2=state.eps2,
            eps1_rel=state.eps1 / m1 if m1 > 0 else math.nan,
            eps2_rel=state.eps2 / m2 if m2 > 0 else math.nan,
            relaxed_obj=robj,
        )
    )


def rel_err(state):
    """max(eps1/M1, eps2/M2), skipping any part whose data is identically zero."""
    samples = state.samples
    candidates = []
    if samples.m1 > 0:
        candidates.append(state.eps1 / samples.m1)
    if samples.m2 > 0:
        candidates.append(state.eps2 / samples.m2)
    return max(candidates, default=0.0)


def greedy_select(state):
    """Indices to promote next (a 1-tuple, or a 2-tuple in pair mode).

    The linear surface wins when eps1/N > eps2/N^2 (N = number of sampling
    points unless overridden); it is disabled entirely when the h1 data is
    identically zero.  On the quadratic surface the argmax pair (s+, z+)
    resolves to a single point: the non-support member if one of the two is
    already interpolated, otherwise the member with the larger linear-surface
    error (s+ on a tie).
    """
    samples = state.samples
    support = set(state.support)
    if len(support) >= samples.ns:
        raise ValueError("no LS points remain")
    N = state.config.greedy_n if state.config.greedy_n is not None else samples.ns
    if samples.m1 == 0:
        use_h1 = False
    elif samples.m2 == 0:
        use_h1 = True
    else:
        use_h1 = state.eps1 / N > state.eps2 / N**2
    if use_h1:
        pick = state.idx1
    else:
        i, j = state.idx2
        assert not (i in support and j in support), (
            "quadratic error surface peaked on an interpolated pair"
        )
        if i in support:
            pick = j
        elif j in support:
            pick = i
        else:
            pick = i if state.e1[i] >= state.e1[j] else j
    assert pick not in support, "greedy pick already interpolated"
    sel = [pick]
    if state.pair_mode:
        mate = int(state.samples.pairing[pick])
        if mate != pick and mate not in support:
            sel.append(mate)
    return tuple(sel)


def step(state):
    """One promotion plus weight re-solve; the state is untouched on failure."""
    config = state.config
    sel = greedy_select(state)
    support = state.support + list(sel)
    partition = Partition.from_support(state.samples.ns, support)
    blocks = build_blocks(state.samples, partition)
    if config.dump_blocks:
        dump_blocks(blocks, os.path.join(config.dump_blocks, f"n{len(support):03d}"))
    w1 = solve_stage1(blocks, rho_mode=config.rho_mode)
    w = solve_stage2(blocks, build_T(blocks, w1), rho_mode=config.rho_mode)
    for _ in range(config.stage2_iterations - 1):
        w = solve_stage2(blocks, build_T(blocks, w), rho_mode=config.rho_mode)
    if state.pair_mode:
        w = _symmetrize_pairs(w, support, state.samples.pairing)
    robj = relaxed_objective(blocks, w)
    zero = w == 0
    if np.any(zero):
        # keep the raw solution for diagnostics, realize with a nudged copy
        w = w.copy()
        w[zero] = np.finfo(float).tiny * max(float(np.linalg.norm(w)), 1.0)
        warnings.warn(
            "zero weights from the stage-2 solve were perturbed to preserve"
            " the interpolation property",
            stacklevel=2,
        )
    model = weights_to_bary(state.samples, partition, w)
    state.support = support
    state.model = model
    _append_record(state, added_idx=sel, robj=robj)
    return state


def run(samples, config=None):
    """Iterate until max(eps1/M1, eps2/M2) <= eps or the order cap is hit.

    Returns (model, report).  A failed weight solve ends the run early with
    a warning; the report then carries converged=False and the completed
    records.
    """
    config = config if config is not None else AaaLqoConfig()
    state = initialize(samples, config)
    while rel_err(state) > config.eps and state.n < config.nmax:
        try:
            step(state)
        except AaalqoError as exc:
            warnings.warn(f"run stopped early at n={state.n}: {exc}", stacklevel=2)
            break
    converged = rel_err(state) <= config.eps
    report = AaaLqoReport(
        records=list(state.records),
        m1=samples.m1,
        m2=samples.m2,
        converged=converged,
    )
    return state.model, report
