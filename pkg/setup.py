"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing Cython or C compiler must not break installs.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "roabp_pit._kernels",
                ["src/roabp_pit/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
