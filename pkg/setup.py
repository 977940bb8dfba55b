"""Build script for the optional compiled kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a failed compile must not abort installation.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "nlijsa._core",
        ["src/nlijsa/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
