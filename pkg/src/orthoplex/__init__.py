"""Exact-arithmetic orthoplicial Apollonian sphere packings."""

from .config import BUILTIN_SEEDS, F0, F1, F7D, FMatrix, VMatrix
from .inversive import Coord5, HonestSphere, PlanarSphere
from .packing import PackingReport, PackingSpec, generate
from .ring import Mat, QSqrt2

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SEEDS", "F0", "F1", "F7D", "FMatrix", "VMatrix",
    "Coord5", "HonestSphere", "PlanarSphere",
    "PackingReport", "PackingSpec", "generate",
    "Mat", "QSqrt2",
]
