"""Build script.

The compiled kernel is optional: if Cython or a C compiler is missing the
package installs anyway and falls back to the pure Python row reduction in
``starforge._kernel_py``.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("starforge._kernel", ["src/starforge/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
