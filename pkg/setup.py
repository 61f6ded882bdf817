"""Build script: compiles the typicality-scan extension when Cython and a C
compiler are available.  The package falls back to a pure-numpy backend at
import time if the extension is missing, so a failed extension build is not
fatal (see smaclab/kernels/__init__.py)."""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "smaclab.kernels._typscan",
                ["src/smaclab/kernels/_typscan.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
