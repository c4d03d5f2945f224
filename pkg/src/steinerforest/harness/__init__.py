"""Generators, the SFP file format and the command line interface."""

from .generate import (
    CyclePathUnion,
    Fan,
    GenSpec,
    Generated,
    HSubgraphFree,
    Planted2DS2,
    PlantedCover,
    RepairFailed,
    TreeDepth3,
    generate,
)
from .sfp import SFPError, normalize, parse_certificate, parse_instance, write_certificate, write_instance

__all__ = [
    "CyclePathUnion",
    "Fan",
    "GenSpec",
    "Generated",
    "HSubgraphFree",
    "Planted2DS2",
    "PlantedCover",
    "RepairFailed",
    "SFPError",
    "TreeDepth3",
    "generate",
    "normalize",
    "parse_certificate",
    "parse_instance",
    "write_certificate",
    "write_instance",
]
