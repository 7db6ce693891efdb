"""Build the optional Cython core; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DUNKLDISK_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools.extension import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension(
                "dunkldisk._core._recur",
                ["src/dunkldisk/_core/_recur.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )],
            language_level="3",
        )

setup(ext_modules=ext_modules)
