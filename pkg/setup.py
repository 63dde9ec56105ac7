"""Build script for the compiled time-stepping kernels.

The package works without the extension (a pure-Python mirror of the
kernels is selected at import time), so the build degrades gracefully
when Cython or a C compiler is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # -ffp-contract=off keeps the compiled kernels bitwise identical to
    # the pure-Python fallback (no fused multiply-add contraction).
    extensions = cythonize(
        [
            Extension(
                "scalesep._stepper",
                ["src/scalesep/_stepper.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
else:
    extensions = []

setup(ext_modules=extensions)
