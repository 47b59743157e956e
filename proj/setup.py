import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "_core",
    sorted(glob.glob("src/*.cpp")) + ["bindings/stratforge_py.cpp"],
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    libraries=["gmpxx", "gmp"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
