"""Exception types shared across the package.

Plain ``ValueError`` is used for argument-contract violations; the classes
here exist so the CLI can map failure families to distinct exit codes.
"""


class DataFormatError(ValueError):
    """A data file exists but cannot be parsed into a dataset."""


class ModelError(RuntimeError):
    """A model is in a state that makes the requested operation undefined."""
