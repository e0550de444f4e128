"""Kernel selection: compiled Cython core when built, numpy fallback otherwise.

Set ``SKEWQUIVER_BACKEND=python`` to force the fallback.  Callers must go
through this module's attributes (``backend.rref_prime``) so :func:`use`
takes effect everywhere.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_IMPLS = {"python": _pykernels}
if _ckernels is not None:
    _IMPLS["compiled"] = _ckernels

NAME = ""
rref_prime = _pykernels.rref_prime
matmul_prime = _pykernels.matmul_prime


def available() -> list:
    return sorted(_IMPLS)


def use(name: str) -> str:
    """Switch the active kernel set; returns the previous name."""
    global NAME, rref_prime, matmul_prime
    if name not in _IMPLS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    prev = NAME
    impl = _IMPLS[name]
    NAME = name
    rref_prime = impl.rref_prime
    matmul_prime = impl.matmul_prime
    return prev


_requested = os.environ.get("SKEWQUIVER_BACKEND", "").strip().lower()
if _requested == "python" or _ckernels is None:
    use("python")
else:
    use("compiled")
