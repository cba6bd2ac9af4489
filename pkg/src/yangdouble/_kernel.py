"""Select the rewriting backend: the compiled extension when it is built,
else the pure-Python implementation.  Setting ``YANGDOUBLE_PURE_PYTHON=1``
forces the fallback."""
import os

BACKEND = "python"
if os.environ.get("YANGDOUBLE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._rewrite_c import Rewriter  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        pass
if BACKEND == "python":
    from ._rewrite_py import Rewriter  # noqa: F401
