"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``COVERPLACE_PURE`` is set to a non-empty value other
than ``0``, the numpy fallback is used. ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _kernels_py

_force_pure = os.environ.get("COVERPLACE_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

enum_cost = _impl.enum_cost
enum_subgradient = _impl.enum_subgradient
dp_cdf_indep = _impl.dp_cdf_indep
dp_count_cdf = _impl.dp_count_cdf
run_prob = _impl.run_prob


def implementations():
    """Available backends by name, for benchmarks and cross-checks."""
    impls = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        impls["compiled"] = _kernels
    except ImportError:
        pass
    return impls
