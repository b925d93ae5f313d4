from setuptools import Extension, setup

# The compiled kernels are optional; without Cython the package runs on the
# numpy fallback in cyclewalk._pykernels.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("cyclewalk._ckernels", ["src/cyclewalk/_ckernels.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
