"""Strictly implicit priority queues with move and comparison counters."""
from .core import (CapacityError, CorruptionError, CostCounters, ImplicitArray,
                   UnderflowError)
from .amortized import PRODUCTION, SCALED, AmortizedPQ, Profile
from .identical import IdenticalPQ
from .oracle import BinaryHeap
from .worstcase import WorstCasePQ

__all__ = [
    "AmortizedPQ", "BinaryHeap", "CapacityError", "CorruptionError", "CostCounters",
    "IdenticalPQ", "ImplicitArray", "PRODUCTION", "Profile", "SCALED",
    "UnderflowError", "WorstCasePQ",
]
