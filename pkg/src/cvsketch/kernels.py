"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; otherwise the
pure-Python fallback takes over transparently. Set CVSKETCH_BACKEND to
``pure`` or ``compiled`` to force a choice (``compiled`` raises if the
extension is missing, which unit tests use to pin behaviour).
"""

import os

_requested = os.environ.get("CVSKETCH_BACKEND", "auto").lower()

if _requested not in ("auto", "pure", "compiled"):
    raise RuntimeError(f"CVSKETCH_BACKEND must be auto|pure|compiled, got {_requested!r}")

if _requested == "pure":
    from . import _pykernels as _impl

    BACKEND = "pure"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _pykernels as _impl  # type: ignore[no-redef]

        BACKEND = "pure"

poly_mod = _impl.poly_mod
sign_sum = _impl.sign_sum
tow_counter_dense = _impl.tow_counter_dense
tow_counter = _impl.tow_counter
ip_trial = _impl.ip_trial
bucket_collision_count = _impl.bucket_collision_count
signed_collision_sum = _impl.signed_collision_sum
