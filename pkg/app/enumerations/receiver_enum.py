from enum import Enum


class ReceiverKind(str, Enum):
    HETERODYNE = "heterodyne"
    OPTIMAL = "optimal"
    SEPARABLE = "separable"


class EgMode(str, Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"
