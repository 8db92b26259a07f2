"""Builds the optional compiled path-length kernel.

The package works without it (a numpy fallback is selected at import), so
a missing Cython or compiler never blocks installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("hypermetric._speedups", ["src/hypermetric/_speedups.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
