"""Monte Carlo experiments on first-digit behavior of multiplicative and additive processes."""
from importlib import resources

from .digits import *  # noqa: F401,F403
from .metrics import *  # noqa: F401,F403
from .models import *  # noqa: F401,F403
from .process import *  # noqa: F401,F403
from .report import *  # noqa: F401,F403
from .sampling import *  # noqa: F401,F403
from .experiments import (  # noqa: F401
    REGISTRY, ExperimentDef, UnknownExperiment, check_report, list_experiments, run_experiment, run_many,
)
from .cli import NoNumericData, analyze_file  # noqa: F401

__version__ = "0.1.0"


def earthquake_path():
    """Path of the bundled 40-value earthquake interval sample."""
    return resources.files(__name__) / "data" / "earthquake.txt"
