"""Build script for the optional compiled matcher kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile is tolerated.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/semslice/_matchcore.pyx"],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
