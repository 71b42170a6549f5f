"""Static multi-metric instruction cost profiler."""

from opcost.cost_model import (
    CostTable,
    CostVector,
    InstructionClass,
    MemoryTier,
    MetricKind,
    Profile,
    TierPrior,
    builtin_profiles,
    get_profile,
    load_bundled_table,
    load_cost_table,
    lookup_cost,
    scale_table,
)
from opcost.errors import (
    InvalidArgumentError,
    OpcostError,
    ParseError,
    UndefinedCorrelationError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "CostTable",
    "CostVector",
    "InstructionClass",
    "InvalidArgumentError",
    "MemoryTier",
    "MetricKind",
    "OpcostError",
    "ParseError",
    "Profile",
    "TierPrior",
    "UndefinedCorrelationError",
    "ValidationError",
    "builtin_profiles",
    "get_profile",
    "load_bundled_table",
    "load_cost_table",
    "lookup_cost",
    "scale_table",
]
