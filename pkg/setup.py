"""Build script for the optional Cython kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the extension only accelerates the elementwise
hot loops of the streamed denoising pipeline.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/shearvol/_kernels.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [np.get_include()]
except ImportError as exc:  # Cython/numpy absent at build time: pure-Python install
    print(f"shearvol: skipping Cython extension build ({exc})", file=sys.stderr)
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
