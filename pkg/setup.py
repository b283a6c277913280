"""Build script: compiles the optional C kernel extension when Cython is available.

The package works without the extension; kblinker._kernels falls back to the
numpy implementations at import time.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "kblinker._kernels._ckernels",
                sources=["src/kblinker/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    print("Cython or numpy not available at build time; "
          "building without the compiled kernels", file=sys.stderr)

setup(ext_modules=ext_modules)
