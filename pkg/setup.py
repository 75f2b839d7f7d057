"""Build the optional compiled kernel; the package falls back to numpy without it."""
import os

import numpy as np
from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - no Cython, pure-Python install
    cythonize = None


class OptionalBuildExt(build_ext):
    """Do not fail the install when the extension cannot be compiled."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self.warn(f"compiled kernel not built ({exc}); using the numpy backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self.warn(f"compiled kernel not built ({exc}); using the numpy backend")


ext_modules = []
if cythonize is not None and not os.environ.get("LIFSHITZ_AUDIT_NO_EXT"):
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "lifshitz_audit._kernel",
                ["src/lifshitz_audit/_kernel.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
