import sys

from setuptools import Extension, setup

# The compiled kernel is an optimization, not a requirement: spillkit.kernel
# falls back to the pure-Python implementation when the extension is missing.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("spillkit._kernel", ["src/spillkit/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write("spillkit: skipping compiled kernel (%s)\n" % exc)

setup(ext_modules=ext_modules)
