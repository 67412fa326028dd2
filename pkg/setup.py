"""Build script: compiles the optional Cython split-search kernel.

The extension is strictly optional; when it cannot be built (no compiler,
no Cython) the package falls back to the pure-Python kernel selected at
import time in jstdiff._split_backend.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "jstdiff._split_cy",
        ["src/jstdiff/_split_cy.pyx"],
        include_dirs=[numpy.get_include()],
        # no -ffast-math: the kernel must be bit-identical to the pure
        # Python fallback (same IEEE operation order)
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Swallow build failures; the pure-Python kernel remains available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: extension build failed ({exc}); "
                  "using pure-Python kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: building {ext.name} failed ({exc}); "
                  "using pure-Python kernel", file=sys.stderr)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
