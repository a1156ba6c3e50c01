"""Build script: compiles the Cython path-stepping kernel when a compiler
and Cython are available.  The package works without the extension (a numpy
fallback is selected at import time), so build failures are non-fatal."""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ctcusum.sim._kernel",
                ["src/ctcusum/sim/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
