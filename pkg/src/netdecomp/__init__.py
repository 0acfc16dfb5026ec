"""Node-level controllability/observability decomposition of linear networks."""

__version__ = "0.1.0"

from .exceptions import (BudgetExceeded, DimensionError, InvalidChoice,  # noqa: E402
                         InvariantViolation, MismatchedSystem, NetdecompError,
                         ParseError, SingularMatrix, ValidationError)
from .linalg import Mat, parse_scalar  # noqa: E402
from .system import NetworkSystem, load_system  # noqa: E402
from .observability import observe, observable_oracle  # noqa: E402
from .controllability import control, controllable_oracle  # noqa: E402
from .partition import NodePartition, analyze, partition  # noqa: E402
from .estimators import ControllableNodes, NetworkDecomposition, ObservableNodes  # noqa: E402

__all__ = [
    "BudgetExceeded", "DimensionError", "InvalidChoice", "InvariantViolation",
    "MismatchedSystem", "NetdecompError", "ParseError", "SingularMatrix", "ValidationError",
    "Mat", "parse_scalar", "NetworkSystem", "load_system", "observe", "observable_oracle",
    "control", "controllable_oracle", "NodePartition", "analyze", "partition",
    "ControllableNodes", "NetworkDecomposition", "ObservableNodes",
]
