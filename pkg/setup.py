"""Builds the optional compiled kernels; the package works without them."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MPTCHECK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize([Extension("mptcheck.kernels._ckernels",
                                          ["src/mptcheck/kernels/_ckernels.pyx"])],
                                compiler_directives={"language_level": "3"}, quiet=True)

setup(ext_modules=ext_modules)
