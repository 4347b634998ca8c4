"""Build script: compiles the optional speed kernels, falls back to pure Python."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CUBIK_NO_EXT") != "1" and os.path.exists("src/cubik/metric/_speed.pyx"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/cubik/metric/_speed.pyx"],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
