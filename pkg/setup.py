"""Build script: compiles the optional C backend when Cython and a C compiler
are available, and falls back to the pure-Python backend otherwise.

The package is fully functional without the extension; ``lwchi2._backend``
selects whichever kernel set imported successfully (see its docstring).
"""
import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/lwchi2/_backend/_ckernels.pyx"],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(
        f"lwchi2: skipping C extension build ({exc!r}); "
        "the pure-Python backend will be used.\n"
    )

setup(ext_modules=ext_modules)
