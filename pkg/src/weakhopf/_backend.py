"""Selects the row-reduction backend: compiled if available, else pure.

Set WEAKHOPF_PURE=1 to force the pure-Python implementation (used by the
benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("WEAKHOPF_PURE"):
    from weakhopf._rowred_py import insert_row, normalize_row, reduce_row

    BACKEND = "python"
else:
    try:
        from weakhopf._rowred_c import insert_row, normalize_row, reduce_row

        BACKEND = "c"
    except ImportError:
        from weakhopf._rowred_py import insert_row, normalize_row, reduce_row

        BACKEND = "python"

__all__ = ["BACKEND", "insert_row", "normalize_row", "reduce_row"]
