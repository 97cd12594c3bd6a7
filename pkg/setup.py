"""Build the optional Cython kernels; the package works without them."""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pccfit._kernels",
                ["src/pccfit/_kernels.pyx"],
                include_dirs=[np.get_include(), "src/pccfit"],
                extra_compile_args=["-O3", "-fno-math-errno", "-fopenmp-simd"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
