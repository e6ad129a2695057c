"""Shared pytest fixtures.

  * ``lattice``: factory returning cached :class:`PlanarLattice` objects.
  * ``calibration_file``: factory writing a ``tests.fakes`` table to tmp_path.
  * ``output_dir``: pins ``cli.paths`` to a throwaway directory.
"""

import functools

import pytest

from cli import paths
from cli.lattice import build_lattice
from tests.fakes import write_calibration


@functools.lru_cache(maxsize=None)
def _lattice(d: int):
    return build_lattice(d)


@pytest.fixture
def lattice():
    """Factory: distance -> PlanarLattice (shared, immutable)."""
    return _lattice


@pytest.fixture
def calibration_file(tmp_path):
    """Factory: (fixture_name | raw text) -> path of a calibration CSV."""

    def _make(name: str | None = None, text: str | None = None, filename="cal.csv"):
        return write_calibration(tmp_path / filename, name=name, text=text)

    return _make


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    monkeypatch.delenv(paths.ENV_VAR, raising=False)
    out = tmp_path / "out"
    paths.set_output_dir(str(out))
    yield out
    paths.reset_output_dir()
