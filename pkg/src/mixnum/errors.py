class MixnumError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MixnumError, ValueError):
    pass


class ScenarioError(MixnumError, ValueError):
    pass


class PayloadError(MixnumError, ValueError):
    pass


class SizeError(MixnumError, ValueError):
    pass


class FramingError(MixnumError, ValueError):
    pass


class InputError(MixnumError, ValueError):
    """Malformed or unusable external input (config or IQ file)."""


class TrialError(MixnumError, RuntimeError):
    """A Monte-Carlo trial failed; carries the (snr_db, trial_index) context."""

    def __init__(self, snr_db: float, trial_index: int, cause: BaseException):
        super().__init__(f"trial failed at snr_db={snr_db}, index={trial_index}: {cause!r}")
        self.snr_db = snr_db
        self.trial_index = trial_index
