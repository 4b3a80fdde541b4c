import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "adseir._pairwise_kernel",
                ["src/adseir/_pairwise_kernel.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # no Cython: install runs with the pure-python kernel
    ext_modules = []

setup(ext_modules=ext_modules)
