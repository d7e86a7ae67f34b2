import os

from setuptools import Extension, setup

# The compiled scan kernel is a pure speedup; the package falls back to
# fieldlab._zero_scan_py when it is absent.  Set FIELDLAB_NO_EXT=1 to skip.
ext_modules = []
if os.environ.get("FIELDLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "fieldlab._zero_scan",
                    ["src/fieldlab/_zero_scan.pyx"],
                    extra_compile_args=["-O2"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
