import os

import numpy  # noqa: F401  (build requirement)
from setuptools import Extension, setup

# The compiled core is optional: without Cython the package falls back to
# allknap._pure at import time.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("allknap._ext", [os.path.join("src", "allknap", "_ext.pyx")],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
