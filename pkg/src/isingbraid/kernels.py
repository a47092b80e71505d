"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy reference in ``_kernels_py`` takes over. Setting ``ISINGBRAID_PURE=1``
forces the reference path. Both expose ``matmul_batch``, ``reduce_batch``,
``projective_canonical_batch`` and ``left_mul_batch``.

The compiled path works in int64 only; callers route object-dtype
(arbitrary precision) arrays to the reference module.
"""
from __future__ import annotations

import os
from types import ModuleType

from isingbraid import _kernels_py

_compiled: ModuleType | None
try:
    from isingbraid import _ckernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("ISINGBRAID_PURE", "") not in ("1", "true", "yes"):
    impl: ModuleType = _compiled
    BACKEND = "cython"
else:
    impl = _kernels_py
    BACKEND = "python"


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def for_dtype(dtype) -> ModuleType:
    """Backend able to handle arrays of ``dtype``."""
    return _kernels_py if dtype == object else impl
