import os
from dataclasses import dataclass, field
from fractions import Fraction

from mtpkit.errors import ConfigurationError, MtpkitError
from mtpkit.geometry import to_scalar
from mtpkit.transforms import CLI_CLASS_IDS

DEFAULT_CLASS_ID = "2T"
DEFAULT_MIN_SIZE = 1
DEFAULT_GAP = Fraction(1)
JOBS_ENV_VAR = "MTPKIT_JOBS"


def default_jobs(environ=None):
    """
    Worker count used when --jobs is not given: MTPKIT_JOBS if set, else the number of
    available cores.
    """
    environ = os.environ if environ is None else environ
    value = environ.get(JOBS_ENV_VAR)
    if value is None or not value.strip():
        return os.cpu_count() or 1
    try:
        jobs = int(value)
    except ValueError:
        jobs = 0
    if jobs < 1:
        raise ConfigurationError(f"{JOBS_ENV_VAR} must be a positive integer, got {value!r}")
    return jobs


@dataclass(frozen=True)
class CliConfig:
    command: str
    class_id: str = DEFAULT_CLASS_ID
    min_size: int = DEFAULT_MIN_SIZE
    gap: Fraction = DEFAULT_GAP
    jobs: int = 1
    inputs: tuple = field(default_factory=tuple)
    output: str = None

    def __post_init__(self):
        if self.class_id not in CLI_CLASS_IDS:
            raise ConfigurationError(f"class must be one of {', '.join(CLI_CLASS_IDS)}, got {self.class_id!r}")
        if self.min_size < 1:
            raise ConfigurationError(f"minimum size must be at least 1, got {self.min_size}")
        try:
            gap = to_scalar(self.gap)
        except MtpkitError as e:
            raise ConfigurationError(f"gap: {e}") from e
        if gap <= 0:
            raise ConfigurationError(f"gap must be positive, got {gap}")
        object.__setattr__(self, "gap", gap)
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be at least 1, got {self.jobs}")
