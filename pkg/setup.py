import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the compiled row-reduction core, but never fail the install.

    The package falls back to the pure-Python implementation when the
    extension is unavailable (see weakhopf._backend).
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            print("weakhopf: skipping compiled core (%s); using pure Python" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print("weakhopf: skipping %s (%s)" % (ext.name, exc))


extensions = []
if not os.environ.get("WEAKHOPF_NO_EXT"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [Extension("weakhopf._rowred_c", ["src/weakhopf/_rowred_c.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("weakhopf: Cython not available; using pure Python core")

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
