from setuptools import setup, Extension
from Cython.Build import cythonize
import numpy as np


ext_module = Extension(
    "mixbie._core",
    ["src/mixbie/_core.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)


setup(
    ext_modules=cythonize(ext_module, compiler_directives={"language_level": 3}),
)
