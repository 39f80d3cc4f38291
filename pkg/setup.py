"""Build script. The compiled kernel extension is optional: when Cython or a
C compiler is unavailable the package installs anyway and falls back to the
numpy/scipy implementation of the same kernel API at import time."""

import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("HEXSEP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy as np

        ext_modules = cythonize(
            ["src/hexsep/_kernels_c.pyx"],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": 3,
            },
        )
        for ext in ext_modules:
            ext.include_dirs.append(np.get_include())
            ext.extra_compile_args = ["-O3"]
    except Exception as exc:  # missing Cython/compiler is not fatal
        print(f"hexsep: skipping compiled kernels ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
