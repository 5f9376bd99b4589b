"""Joint path and schedule planning for heterogeneous search teams."""
from .directives import Directive
from .environment import (AgentSpec, CellGrid, Scenario, SectorLayout, TimeDiscretization,
                          TraversabilityGraph)
from .errors import DecodeError, FormatError, InputError, NumericalError
from .plan import AgentPlan, MissionPlan

__all__ = [
    "AgentPlan", "AgentSpec", "CellGrid", "DecodeError", "Directive", "FormatError",
    "InputError", "MissionPlan", "NumericalError", "Scenario", "SectorLayout",
    "TimeDiscretization", "TraversabilityGraph",
]
