"""Build script: compiles the optional Cython kernel core.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); set QUADLAB_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure backend when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernels ({exc}); "
                  "quadlab will use the pure NumPy backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "quadlab will use the pure NumPy backend")


PYX = "src/quadlab/_kernels/_core.pyx"

ext_modules = []
cmdclass = {}
if os.environ.get("QUADLAB_NO_EXT") != "1" and os.path.exists(PYX):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "quadlab._kernels._core",
                    sources=[PYX],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
        cmdclass = {"build_ext": OptionalBuildExt}
    except ImportError as exc:
        print(f"warning: Cython/NumPy unavailable ({exc}); building without kernels")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
