"""Data-driven reduced-order models of linear systems with quadratic output.

Fits a reduced model jointly to frequency samples of the linear transfer
function H1(s) and the quadratic one H2(s, z), by greedy support-point
selection on a shared barycentric representation whose weights solve a
two-stage linearized least-squares problem.  The fitted model realizes
exactly as a small state-space system and can be simulated in the time
domain.
"""

from .assembly import BACKEND
from .errors import (
    AaalqoError,
    DegenerateProblemError,
    DivergenceError,
    FormatError,
    PoleError,
    SpuriousPoleError,
)
from .lqo import (
    LqoStateSpace,
    eval_h1,
    eval_h2,
    harmonic_output,
    kron_to_matrix,
    load_model,
    load_model_mm,
    matrix_to_kron,
    random_lqo,
    resolvent_grid,
    save_model,
)
from .sampling import (
    SampleSet,
    conjugate_close,
    export_csv,
    load_sampleset,
    log_space_axis,
    sample_lqo,
    save_sampleset,
)
from .barycentric import (
    BarycentricLqo,
    ConstantModel,
    eval_r1,
    eval_r1_grid,
    eval_r2,
    eval_r2_grid,
    eval_r2_mixed_left,
    eval_r2_mixed_right,
    load_bary,
    realize,
    realize_real,
    save_bary,
)
from .loewner import (
    LoewnerBlocks,
    Partition,
    build_T,
    build_U,
    build_blocks,
    build_loewner_1d,
    build_loewner_12,
    build_loewner_21,
    build_loewner_2d,
    dump_blocks,
    relaxed_objective,
    solve_stage1,
    solve_stage2,
    true_objective,
    weights_to_bary,
)
from .aaa import AaaModel, aaa_eval, aaa_eval_grid, aaa_fit
from .driver import (
    AaaLqoConfig,
    AaaLqoReport,
    error_surfaces,
    greedy_select,
    initialize,
    rel_err,
    run,
    step,
)
from .sim import Signal, Trace, load_trace, output_error, save_trace, simulate_lqo

__version__ = "0.1.0"

__all__ = [
    "AaaLqoConfig",
    "AaaLqoReport",
    "AaaModel",
    "AaalqoError",
    "BACKEND",
    "BarycentricLqo",
    "ConstantModel",
    "DegenerateProblemError",
    "DivergenceError",
    "FormatError",
    "LoewnerBlocks",
    "LqoStateSpace",
    "Partition",
    "PoleError",
    "SampleSet",
    "Signal",
    "SpuriousPoleError",
    "Trace",
    "aaa_eval",
    "aaa_eval_grid",
    "aaa_fit",
    "build_T",
    "build_U",
    "build_blocks",
    "build_loewner_1d",
    "build_loewner_12",
    "build_loewner_21",
    "build_loewner_2d",
    "conjugate_close",
    "dump_blocks",
    "error_surfaces",
    "eval_h1",
    "eval_h2",
    "eval_r1",
    "eval_r1_grid",
    "eval_r2",
    "eval_r2_grid",
    "eval_r2_mixed_left",
    "eval_r2_mixed_right",
    "export_csv",
    "greedy_select",
    "harmonic_output",
    "initialize",
    "kron_to_matrix",
    "load_bary",
    "load_model",
    "load_model_mm",
    "load_sampleset",
    "load_trace",
    "log_space_axis",
    "matrix_to_kron",
    "output_error",
    "random_lqo",
    "realize",
    "realize_real",
    "rel_err",
    "relaxed_objective",
    "resolvent_grid",
    "run",
    "sample_lqo",
    "save_bary",
    "save_model",
    "save_sampleset",
    "save_trace",
    "simulate_lqo",
    "solve_stage1",
    "solve_stage2",
    "step",
    "true_objective",
    "weights_to_bary",
]
