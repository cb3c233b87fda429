"""Exception types shared across the package.

The CLI maps these onto exit codes: bad input data / configuration exits
with 2, numerical or pipeline failures exit with 1.
"""


class InputDataError(ValueError):
    """A file, config entry, or record does not satisfy its documented format."""


class InconsistentTranscriptError(InputDataError):
    """A game transcript contradicts itself (e.g. feedback eliminates every
    candidate mid-game, or recorded feedback disagrees with the known answer)."""


class FitError(RuntimeError):
    """A model fit or statistical computation failed."""
