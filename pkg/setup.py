"""Build hook for the optional compiled core.

If Cython or a compiler is unavailable the package still installs and
falls back to the numpy implementation in ``sphx._pycore``.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SPHX_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sphx._core",
                    ["src/sphx/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
