from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mixedsums._kernels",
                ["src/mixedsums/_kernels.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython: the pure-Python kernel fallback is picked up at import time.
    pass

setup(ext_modules=ext_modules)
