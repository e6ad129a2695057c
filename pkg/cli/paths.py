"""Resolve a single output directory and derive every result path from it.

Precedence (highest first):
  1. ``set_output_dir(path)``, called once at startup from ``--output-dir``.
  2. ``PLANAR_OUTPUT_DIR`` environment variable.
  3. The current working directory.
"""

import os

ENV_VAR = "PLANAR_OUTPUT_DIR"

# Pinned once at startup by set_output_dir(); None means "resolve dynamically".
_output_dir: str | None = None


def _abs(path: str) -> str:
    return os.path.abspath(os.path.expanduser(path))


def set_output_dir(path: str | None) -> str:
    """Pin the output directory for the rest of the process and create it."""
    global _output_dir
    if path:
        _output_dir = _abs(path)
    elif os.environ.get(ENV_VAR):
        _output_dir = _abs(os.environ[ENV_VAR])
    else:
        _output_dir = _abs(os.getcwd())
    os.makedirs(_output_dir, exist_ok=True)
    return _output_dir


def reset_output_dir() -> None:
    global _output_dir
    _output_dir = None


def resolve_output_dir() -> str:
    if _output_dir is not None:
        return _output_dir
    env = os.environ.get(ENV_VAR)
    if env:
        return _abs(env)
    return _abs(os.getcwd())


def output_path(filename: str) -> str:
    return os.path.join(resolve_output_dir(), filename)


# -- Named result paths ------------------------------------------------------


def points_csv(distance: int, decoder: str, tag: str = "") -> str:
    suffix = f"_{tag}" if tag else ""
    return output_path(f"points_d{distance}_{decoder}{suffix}.csv")


def summary_json(verb: str) -> str:
    return output_path(f"summary_{verb.replace('-', '_')}.json")


def plot_svg(verb: str) -> str:
    return output_path(f"plot_{verb.replace('-', '_')}.svg")


def layout_csv(distance: int) -> str:
    return output_path(f"layout_d{distance}.csv")
