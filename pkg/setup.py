"""Builds the optional Cython scan kernel; the package falls back to the
pure-Python kernel when the extension is unavailable."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("wplcsim._scan_cy", ["src/wplcsim/_scan_cy.pyx"])],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
