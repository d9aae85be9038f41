"""Bundled example problem files."""

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture (e.g. "delivery.dp")."""
    path = resources.files(__package__).joinpath(name)
    return Path(str(path))


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")
