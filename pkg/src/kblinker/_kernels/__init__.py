"""Numeric hot-path kernels.

Two interchangeable backends: a compiled Cython extension (built by setup.py
when Cython is present) and a numpy fallback. The compiled one is picked at
import time when available; both expose the same functions and are kept in
lockstep by the parity tests. ``benchmarks/bench_kernels.py`` compares them.
"""

from kblinker._kernels import _pykernels

try:
    from kblinker._kernels import _ckernels as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

pagerank_step = _impl.pagerank_step
similarity_pairs = _impl.similarity_pairs

__all__ = ["BACKEND", "pagerank_step", "similarity_pairs", "_pykernels"]
