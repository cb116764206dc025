"""Exception hierarchy shared by every orbistar module."""


class OrbistarError(Exception):
    """Base class for all errors raised by orbistar."""


class GroupError(OrbistarError):
    """Invalid group presentation, element or label."""


class AlgebraError(OrbistarError):
    """Invalid algebra, element or map operation."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotHonestError(AlgebraError):
    """A characteristic class that needs an honest bundle got a virtual one."""


class CorpusError(OrbistarError):
    """Schema violation in a corpus document, located by a JSON path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class MissingDataError(OrbistarError):
    """A sector, correspondence, eigen datum or action datum is absent."""


class ComparisonError(OrbistarError):
    """Invalid comparison map between an orbifold ring and a resolution."""
