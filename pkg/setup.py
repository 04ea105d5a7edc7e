import os

from setuptools import Extension, setup

extensions = []
if os.environ.get("LOTQC_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "lotqc._kernels._native",
                    ["src/lotqc/_kernels/_native.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython available: install pure-Python only, kernels fall back at import
        extensions = []

setup(ext_modules=extensions)
