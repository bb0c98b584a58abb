"""Build hook for the optional compiled kernel.

The package works without it; ``virtualcalc.kernels`` falls back to the
NumPy implementation when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("VIRTUALCALC_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "virtualcalc.kernels._ckernel",
                    ["src/virtualcalc/kernels/_ckernel.pyx"],
                    extra_compile_args=["-O3"],
                    libraries=["m"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
