import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "curvebraid._aberth",
                ["src/curvebraid/_aberth.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython available: install without the compiled kernel, the
    # numpy fallback in _aberth_py is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
