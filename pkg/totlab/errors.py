class TotlabError(Exception):
    """Base class for every error raised by totlab."""


class ConfigurationError(TotlabError, ValueError):
    """Invalid sizes, indices, names or input files."""


class ComputationError(TotlabError, RuntimeError):
    """A run could not be completed."""


class ScenarioSignatureError(ComputationError):
    """A scenario trace is missing part of its expected event signature."""
