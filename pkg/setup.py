import os

from setuptools import Extension, setup


def _extensions():
    # RINGRES_PURE_PYTHON=1 skips the compiled core entirely.
    if os.environ.get("RINGRES_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    extensions = [
        Extension(
            "ringres._kernels._ckernels",
            ["src/ringres/_kernels/_ckernels.pyx"],
            extra_compile_args=["-O3"],
        )
    ]
    return cythonize(extensions, compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
