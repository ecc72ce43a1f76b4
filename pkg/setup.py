"""Build script for the compiled graph kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing Cython toolchain downgrades the build instead
of failing it.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "netpu._speedups",
                ["src/netpu/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=ext_modules)
