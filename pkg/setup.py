"""Build script for the optional compiled sampling kernel.

The package is fully functional without the extension (a pure numpy
fallback is selected at import); building it just makes sample
generation faster and lets chunk generation run outside the GIL.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the accelerator instead of failing the install when no
    compiler (or numpy dev headers) is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - compiler-less envs
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: could not build liftdesign._kernels._core ({exc}); "
            "falling back to the pure-Python kernel",
            file=sys.stderr,
        )


def make_extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []

    # libnpyrandom carries the C implementations behind numpy.random
    npyrandom_dir = os.path.join(os.path.dirname(np.__file__), "random", "lib")
    compile_args = []
    if not sys.platform.startswith("win"):
        # -ffp-contract=off: the kernel must round exactly like the numpy
        # fallback, so FMA contraction of the lift arithmetic is not allowed
        compile_args = ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "liftdesign._kernels._core",
        ["src/liftdesign/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[npyrandom_dir],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=compile_args,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
