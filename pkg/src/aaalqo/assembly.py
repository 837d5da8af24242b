"""Selects the block-assembly backend at import time.

The compiled extension is preferred when it was built; otherwise the
pure-numpy kernels take over with identical contracts.  The active lane is
reported in BACKEND.
"""

from __future__ import annotations

import warnings

try:
    from . import _assembly_cy as _impl

    BACKEND = "compiled"
except ImportError:
    from . import _assembly_py as _impl

    BACKEND = "numpy"
    warnings.warn(
        "aaalqo compiled assembly kernels not found; falling back to the"
        " pure-numpy implementation.",
        stacklevel=2,
    )

loewner_1d = _impl.loewner_1d
loewner_12 = _impl.loewner_12
loewner_21 = _impl.loewner_21
loewner_2d = _impl.loewner_2d
u_matrix = _impl.u_matrix
