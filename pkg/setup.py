"""Builds the optional Cython kernel; everything else lives in pyproject.toml."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("UNPROJ_LAB_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/unproj_lab/_kernels_c.pyx"],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
