import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rdm_lab._sturm",
                ["src/rdm_lab/_sturm.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Source-tree installs without Cython fall back to the numpy kernel.
    ext_modules = []

setup(ext_modules=ext_modules)
