"""Builds the compiled extension through the project's CMake configuration."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            str(source_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        if os.environ.get("CMAKE_GENERATOR") is None and _have("ninja"):
            configure.append("-GNinja")
        subprocess.run(configure, cwd=build_dir, check=True)
        subprocess.run(["cmake", "--build", ".", "--target", "pv2d_core"], cwd=build_dir, check=True)

        built = next(build_dir.glob("_core*.so"))
        self.copy_file(str(built), str(out_path))


def _have(tool: str) -> bool:
    from shutil import which

    return which(tool) is not None


setup(
    ext_modules=[CMakeExtension("pv2d._core")],
    cmdclass={"build_ext": CMakeBuild},
)
