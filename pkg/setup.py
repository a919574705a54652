"""Build script: compiles the sweep kernels when Cython and a C compiler
are available.  The package is fully functional without the extension --
``microspec._kernels`` falls back to the numpy implementation at import.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("MICROSPEC_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/microspec/_kernels/_sweeps.pyx"],
            language_level="3",
        )
        for ext in ext_modules:
            ext.include_dirs.append(np.get_include())
            ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
