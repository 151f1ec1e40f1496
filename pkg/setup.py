"""Build the optional Cython kernel extension.

If Cython or a C compiler is missing the package installs without it and
falls back to ``fkinetic._kernels_py`` at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("FKINETIC_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "fkinetic._kernels",
                    ["src/fkinetic/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
