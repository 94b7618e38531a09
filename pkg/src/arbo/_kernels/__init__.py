"""RK4 kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python mirror
when it is not built.  `BACKEND` reports which one is active; both
implementations are importable directly for benchmarking.
"""

from . import fallback

try:
    from . import _fbs as _impl
    BACKEND = "cython"
except ImportError:
    _impl = fallback
    BACKEND = "python"

rk4_basic = _impl.rk4_basic
rk4_controlled = _impl.rk4_controlled
rk4_adjoint = _impl.rk4_adjoint

__all__ = ["BACKEND", "fallback", "rk4_basic", "rk4_controlled", "rk4_adjoint"]
