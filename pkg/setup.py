"""Builds the optional compiled Smith-normal-form kernel.

The package works without it: flowcalc._kernel falls back to the pure
Python routine when the extension is absent or fails to compile.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "flowcalc._snf",
                ["src/flowcalc/_snf.pyx"],
                include_dirs=[numpy.get_include()],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
