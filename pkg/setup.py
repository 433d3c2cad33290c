import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ALGEBROID_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "algebroid._bareiss",
                    ["src/algebroid/_bareiss.pyx"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython available: install works, the pure-Python twin takes over.
        ext_modules = []

setup(ext_modules=ext_modules)
