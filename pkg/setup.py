"""Builds the optional compiled transport kernel; falls back to the numpy kernel if unavailable."""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("painlab._transport", ["src/painlab/_transport.pyx"],
                   include_dirs=[numpy.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    print(f"compiled kernel skipped: {exc}")

setup(ext_modules=ext_modules)
