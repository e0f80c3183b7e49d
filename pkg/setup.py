from setuptools import Extension, setup

import numpy
from Cython.Build import cythonize

ext = Extension(
    "biarray._core._greens",
    ["src/biarray/_core/_greens.pyx"],
    include_dirs=[numpy.get_include()],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], language_level=3))
