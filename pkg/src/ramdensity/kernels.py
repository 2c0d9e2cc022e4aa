"""Backend selection for the GL_2 hot loops.

The compiled extension is used when it imports and the modulus fits its
64-bit arithmetic; otherwise the pure-Python twin runs. Setting
``RAMDENSITY_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("RAMDENSITY_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled


def available_backends() -> list:
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Kernel module by name; ``None`` picks the default."""
    if name is None:
        return _compiled if _compiled is not None else _kernels_py
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None


def _pick(M, backend):
    mod = get_backend(backend)
    limit = getattr(mod, "MAX_MODULUS", None)
    if limit is not None and M >= limit:
        return _kernels_py
    return mod


def tr_det_histogram(M, p, stride=1, lo=0, hi=-1, backend=None):
    return _pick(M, backend).tr_det_histogram(M, p, stride, lo, hi)


def sample_gl2(key, M, p, stride=1, det_target=-1, backend=None):
    return _pick(M, backend).sample_gl2(key, M, p, stride, det_target)


def derive_key(seed: int, *parts: int) -> int:
    """Hash a seed and integer labels into an independent 64-bit substream key."""
    mask = _kernels_py.MASK
    h = _kernels_py.fmix((seed + _kernels_py.GOLDEN) & mask)
    for part in parts:
        h = _kernels_py.fmix(((h ^ (part & mask)) + _kernels_py.GOLDEN) & mask)
    return h
