import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "gridcast._kernels._core",
                sources=["src/gridcast/_kernels/_core.pyx"],
                extra_compile_args=["-O3", "-march=native", "-funroll-loops", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
