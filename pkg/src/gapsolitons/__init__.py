"""Excitation spectrum of two-level atoms in a frequency gap medium.

Bethe strings of the quantum Maxwell-Bloch model are mapped to polaritons,
ordinary solitons, gap solitons and composite solitons; the package
evaluates their dispersion relations, band parameters and velocities.
"""

from .errors import *  # noqa: F401,F403
from .medium import Band, MediumParams, Side
from .numerics import SolverConfig
from .rapidity import AtomChainParams, RapidityMode, TaylorAB, taylor_ab
from .solitons import CompositeSoliton, DispersionPoint, GapBand, build_composite, gap_band
from .strings import BetheString, PairParams, SolitonImage, build_string, string_image

__version__ = "0.1.0"

__all__ = [
    "AtomChainParams", "Band", "BetheString", "CompositeSoliton", "DispersionPoint", "GapBand",
    "MediumParams", "PairParams", "RapidityMode", "Side", "SolitonImage", "SolverConfig", "TaylorAB",
    "build_composite", "build_string", "gap_band", "string_image", "taylor_ab",
]
