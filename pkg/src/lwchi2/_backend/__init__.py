"""Backend selection for the numerical kernels.

Two interchangeable kernel sets exist:

* ``_ckernels`` — Cython/C implementations compiled at install time (fast);
* ``_pykernels`` — pure NumPy implementations (always available).

The compiled set is preferred when it imported successfully.  The
environment variable ``LWCHI2_BACKEND`` forces a choice: ``c`` (raise if the
extension is missing) or ``python``.  ``BACKEND_NAME`` reports the winner.

Every kernel listed in ``_KERNEL_NAMES`` is looked up on the chosen module
and falls back to the pure-Python twin when the compiled module omits it,
so the two modules can evolve independently.
"""
import os as _os

from . import _pykernels as _py

try:  # pragma: no cover - exercised only when the extension is built
    from . import _ckernels as _c
except ImportError:  # pragma: no cover
    _c = None

_KERNEL_NAMES = (
    "loggamma_complex",
    "lgamma_real",
    "lgamma_real_arr",
    "branch_pair",
    "lambert_w0",
    "lambert_wm1",
    "lambert_w0_arr",
    "lambert_wm1_arr",
    "pgamma",
    "pgamma_arr",
    "polygamma_scalar",
)

_forced = _os.environ.get("LWCHI2_BACKEND", "").strip().lower()
if _forced == "c":
    if _c is None:
        raise ImportError(
            "LWCHI2_BACKEND=c requested but the compiled kernel extension "
            "is not available; reinstall with a C toolchain or unset the "
            "variable"
        )
    _chosen = _c
elif _forced == "python":
    _chosen = _py
elif _forced:
    raise ImportError(
        f"LWCHI2_BACKEND={_forced!r} not recognised (use 'c' or 'python')"
    )
else:
    _chosen = _c if _c is not None else _py

BACKEND_NAME = getattr(_chosen, "NAME", "python")


def _resolve(name):
    fn = getattr(_chosen, name, None)
    return fn if fn is not None else getattr(_py, name)


_globals = globals()
for _name in _KERNEL_NAMES:
    _globals[_name] = _resolve(_name)

__all__ = list(_KERNEL_NAMES) + ["BACKEND_NAME"]
