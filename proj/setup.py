"""Build the pybind11 extension by driving the project's CMake build.

The sandbox package mirror lacks scikit-build-core, so this uses a plain
setuptools build_ext that configures and builds the `_splatscene` target.
"""

import os
import subprocess
import sys
from pathlib import Path

import pybind11
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        args = [
            "cmake",
            str(source_dir),
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DSPLATSCENE_BUILD_PYTHON=ON",
            "-DSPLATSCENE_BUILD_TESTS=OFF",
            "-DSPLATSCENE_BUILD_CLI=OFF",
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            f"-DPython_EXECUTABLE={sys.executable}",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
        ]
        subprocess.run(args, cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_splatscene",
             "--parallel", str(os.cpu_count() or 2)],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("splatscene._splatscene")],
    cmdclass={"build_ext": CMakeBuild},
)
