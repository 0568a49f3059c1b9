"""Build script: compiles the optional C extension for the hot kernels.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile only degrades performance. Build with

    pip install -e . --no-build-isolation
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler / headers
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"epigrid: building the compiled kernel failed ({exc}); "
            "falling back to the pure-Python backend"
        )


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "epigrid._kernels._core",
                ["src/epigrid/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
