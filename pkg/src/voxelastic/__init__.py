"""Voxel elasticity workbench: corrected-SPH solid mechanics on block lattices."""

__version__ = "0.1.0"

from .engine import SimConfig, Simulation, SimulationResult, run
from .errors import VoxelasticError
from .heatmap import PALETTE, HeatMap, colorize
from .kernel import KernelParams
from .mechanics import MaterialParams
from .properties import PropertyRegistry
from .scenario import Scenario, bundled_scenario, bundled_scenario_names, load_scenario
from .world import BlockKind, Structure, World, discover_structure

__all__ = [
    "__version__",
    "BlockKind",
    "HeatMap",
    "KernelParams",
    "MaterialParams",
    "PALETTE",
    "PropertyRegistry",
    "Scenario",
    "SimConfig",
    "Simulation",
    "SimulationResult",
    "Structure",
    "VoxelasticError",
    "World",
    "bundled_scenario",
    "bundled_scenario_names",
    "colorize",
    "discover_structure",
    "load_scenario",
    "run",
]
