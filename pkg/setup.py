"""Build hook: compiles the optional SSA extension when Cython is available.

The package is fully functional without the extension; the simulator falls
back to a pure-Python kernel that produces bit-identical trajectories.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("crn2dsd._ssa_core", ["src/crn2dsd/_ssa_core.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
