"""Exact feedback stabilization and controller parameterization over polynomial rings."""
from .feedback import Plant, compute_H, is_stabilizing
from .gef import is_stabilizable
from .parse import parse_problem
from .polyring import PolyRing
from .synthesis import synthesize

__version__ = "0.1.0"

__all__ = ["PolyRing", "Plant", "compute_H", "is_stabilizing", "is_stabilizable", "parse_problem", "synthesize"]
