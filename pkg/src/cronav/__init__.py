"""Observer-based navigation and guidance on circular relative orbits."""

from .errors import ConfigError, GuidanceSingularityError, InfeasibleBoundError, RunAborted
from .sim import RunMetrics, ScenarioConfig, Telemetry, compare_runs, run_scenario

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "GuidanceSingularityError",
    "InfeasibleBoundError",
    "RunAborted",
    "RunMetrics",
    "ScenarioConfig",
    "Telemetry",
    "compare_runs",
    "run_scenario",
    "__version__",
]
