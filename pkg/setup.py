"""Build script for the optional compiled kernel core.

The extension is marked optional: if Cython or a C compiler is missing,
installation still succeeds and the package runs on the numpy fallback
backend.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "bruhatkit._kernels._core",
                ["src/bruhatkit/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.optional = True

setup(ext_modules=ext_modules)
