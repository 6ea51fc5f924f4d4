"""Hot numeric kernels: fixed-step RK4 for small dense complex linear ODEs.

The transport equation dv/dt = A(t) v is integrated with the classical
4th-order scheme over a precomputed generator grid A sampled at every node
and midpoint, so the inner loop is pure small-matrix arithmetic.  The loop
is JIT-compiled with numba when available; set SPINBUNDLES_NO_NUMBA=1 to
force the pure-numpy fallback (same code path, uncompiled).
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "SPINBUNDLES_NO_NUMBA"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    njit = None
    _HAVE_NUMBA = False


def numba_available() -> bool:
    return _HAVE_NUMBA


def numba_enabled() -> bool:
    """True when the JIT path will be used for kernel dispatch."""
    return _HAVE_NUMBA and os.environ.get(DISABLE_ENV, "").strip().lower() not in (
        "1",
        "true",
        "yes",
        "on",
    )


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


def _rk4_chain(gen: np.ndarray, h: float, v0: np.ndarray, out: np.ndarray) -> None:
    # gen: (2*steps + 1, n, n) generator samples at nodes and midpoints,
    # v0: (n,) start vector, out: (steps + 1, n) transported vectors.
    v = v0.copy()
    out[0] = v
    steps = (gen.shape[0] - 1) // 2
    for i in range(steps):
        a0 = gen[2 * i]
        am = gen[2 * i + 1]
        a1 = gen[2 * i + 2]
        k1 = a0 @ v
        k2 = am @ (v + (0.5 * h) * k1)
        k3 = am @ (v + (0.5 * h) * k2)
        k4 = a1 @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = v


_rk4_chain_py = _rk4_chain
_rk4_chain_nb = njit(cache=True)(_rk4_chain) if _HAVE_NUMBA else None


def rk4_transport_path(gen: np.ndarray, h: float, v0: np.ndarray) -> np.ndarray:
    """Integrate dv/dt = A(t) v, returning the (steps + 1, n) node trajectory."""
    gen = np.ascontiguousarray(gen, dtype=np.complex128)
    if gen.ndim != 3 or gen.shape[1] != gen.shape[2] or gen.shape[0] % 2 != 1:
        raise ValueError("generator grid must have shape (2*steps + 1, n, n)")
    v0 = np.ascontiguousarray(v0, dtype=np.complex128)
    steps = (gen.shape[0] - 1) // 2
    out = np.empty((steps + 1, gen.shape[1]), dtype=np.complex128)
    kernel = _rk4_chain_nb if numba_enabled() else _rk4_chain_py
    kernel(gen, float(h), v0, out)
    return out


def rk4_transport(gen: np.ndarray, h: float, v0: np.ndarray) -> np.ndarray:
    """Final value of the RK4 chain; see rk4_transport_path."""
    return rk4_transport_path(gen, h, v0)[-1]
