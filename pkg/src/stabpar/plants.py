"""Bundled example plants (``stabpar/data/*.plant``)."""
from __future__ import annotations

from importlib import resources

from .parse import parse_problem

__all__ = ["names", "text", "load", "path"]


def _dir():
    return resources.files(__package__).joinpath("data")


def names():
    return sorted(p.name[: -len(".plant")] for p in _dir().iterdir() if p.name.endswith(".plant"))


def path(name):
    return str(_dir().joinpath(f"{name}.plant"))


def text(name):
    return _dir().joinpath(f"{name}.plant").read_text(encoding="utf-8")


def load(name):
    """Parsed :class:`~stabpar.parse.ProblemFile` for a bundled plant."""
    return parse_problem(text(name))
