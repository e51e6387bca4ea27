"""Soft edge coloring: wireless channel assignment and data migration scheduling."""

from .balanced import ContractError
from .estimators import (
    BalancedChannelAssigner,
    ClusteredChannelAssigner,
    EvenMigrationScheduler,
    GeneralMigrationScheduler,
    GreedyChannelAssigner,
)
from .instance import Instance, InstanceError, parse_instance, read_instance
from .validation import check_instance

__all__ = [
    "BalancedChannelAssigner",
    "ClusteredChannelAssigner",
    "ContractError",
    "EvenMigrationScheduler",
    "GeneralMigrationScheduler",
    "GreedyChannelAssigner",
    "Instance",
    "InstanceError",
    "check_instance",
    "parse_instance",
    "read_instance",
]

__version__ = "0.1.0"
