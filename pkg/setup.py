"""Build script for the optional compiled kernels.

The package works without the extension; engine selection at import time
falls back to the pure-Python kernels.  Set RELATTICE_NO_EXT=1 to skip the
extension build entirely.
"""

import os
import warnings

from setuptools import setup

ext_modules = []
if not os.environ.get("RELATTICE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/relattice/engine/_kernels.pyx"],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except Exception as exc:  # pragma: no cover - depends on build host
        warnings.warn(f"compiled kernels will not be built: {exc}")
        ext_modules = []

setup(ext_modules=ext_modules)
