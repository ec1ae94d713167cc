from setuptools import setup

# The compiled kernel is an optional fast path; the package is fully
# functional on the pure-Python fallback if cythonize is unavailable or
# the extension fails to build.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hopfq/_kernels/_core.pyx"],
        language_level=3,
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
