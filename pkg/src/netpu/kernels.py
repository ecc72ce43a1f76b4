"""Backend selection for the hot graph kernels.

The compiled Cython extension is preferred; the pure-Python fallback is used
when the extension is unavailable or when ``NETPU_PURE_PYTHON=1`` is set.
Both expose the same functions and produce identical arrays.
"""

import os

if os.environ.get("NETPU_PURE_PYTHON", "").strip().lower() in ("1", "true", "yes"):
    from netpu import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from netpu import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from netpu import _fallback as _impl

        BACKEND = "python"

sssp_dijkstra = _impl.sssp_dijkstra
bfs_levels = _impl.bfs_levels
component_labels = _impl.component_labels


def backend_name() -> str:
    return BACKEND
