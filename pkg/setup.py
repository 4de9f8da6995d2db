"""Build script: compiles the optional quadrature kernel extension.

The extension is a speed-up only; if Cython, numpy headers or a C compiler
are unavailable the build silently degrades to the pure-Python kernels
(selected at import time in conekit.cp1.kernels).  Set CONEKIT_NO_EXT=1 to
skip the extension on purpose.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if os.environ.get("CONEKIT_NO_EXT") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "conekit.cp1._ckernels",
        ["src/conekit/cp1/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


class optional_build_ext(build_ext):
    """Never fail the install because the speed-up would not compile."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"conekit: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"conekit: skipping compiled kernels ({exc})")


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
