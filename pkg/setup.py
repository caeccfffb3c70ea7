import numpy as np
from setuptools import Extension, setup

# The event-loop kernel is an optional compiled extension. If Cython or a C
# compiler is unavailable the package falls back to the pure-Python twin in
# jjphotonics._kernels._pure at import time.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "jjphotonics._kernels._event_loop",
                ["src/jjphotonics/_kernels/_event_loop.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
