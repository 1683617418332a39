import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

openmp = os.environ.get("TRACELAB_NO_OPENMP") != "1"

ext = Extension(
    "tracelab._speedups",
    ["src/tracelab/_speedups.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"] + (["-fopenmp"] if openmp else []),
    extra_link_args=["-fopenmp"] if openmp else [],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(ext_modules=cythonize([ext], language_level=3))
